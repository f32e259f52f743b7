// Command-line front end: test, identify, simulate, mc, order.

#include "stationarity/report.hpp"
#include "stationarity/stationarity.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace stationarity;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputOptions {
    std::string path;
    bool header = false;
    bool no_center = false;
};

struct FitOptions {
    std::string order = "auto";
    std::optional<std::size_t> p_min;
    std::optional<std::size_t> p_max;
    std::string estimator = "yw";
    std::string penalty = "order";
    std::string aic_scale = "whittle";
};

void add_input(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("--input", in.path, "CSV file, one row per time point")->required();
    cmd->add_flag("--header", in.header, "skip the first row");
    cmd->add_flag("--no-center", in.no_center, "do not subtract column means");
}

void add_fit(CLI::App* cmd, FitOptions& fit) {
    cmd->add_option("--order", fit.order, "VAR order: auto or a fixed integer")->capture_default_str();
    cmd->add_option("--pmin", fit.p_min, "smallest order considered by AIC");
    cmd->add_option("--pmax", fit.p_max, "largest order considered by AIC (default min(T/10, 15))");
    cmd->add_option("--estimator", fit.estimator, "yw or ols")
        ->check(CLI::IsMember({"yw", "ols"}))
        ->capture_default_str();
    cmd->add_option("--penalty", fit.penalty, "AIC penalty: order (p/T) or params (p d^2/T)")
        ->check(CLI::IsMember({"order", "params"}))
        ->capture_default_str();
    cmd->add_option("--aic-scale", fit.aic_scale, "likelihood scale: whittle (1/T) or display (2pi/T)")
        ->check(CLI::IsMember({"whittle", "display"}))
        ->capture_default_str();
}

MultivariateSeries read_input(const InputOptions& in) {
    CsvOptions opts;
    opts.has_header = in.header;
    opts.center = !in.no_center;
    return load_csv(in.path, opts);
}

void apply_fit(const FitOptions& fit, BootstrapConfig& cfg) {
    if (fit.order != "auto") {
        std::size_t p = 0;
        const auto* end = fit.order.data() + fit.order.size();
        const auto [ptr, ec] = std::from_chars(fit.order.data(), end, p);
        if (ec != std::errc{} || ptr != end) throw UsageError("--order must be 'auto' or a non-negative integer");
        cfg.order = p;
    }
    if (fit.p_min) cfg.p_min = *fit.p_min;
    cfg.p_max = fit.p_max;
    cfg.estimator = fit.estimator == "ols" ? Estimator::least_squares : Estimator::yule_walker;
    cfg.penalty = fit.penalty == "params" ? AicPenalty::parameters : AicPenalty::order;
    cfg.scaling = fit.aic_scale == "display" ? AicScaling::display : AicScaling::whittle;
}

void emit(const nlohmann::json& j, const std::string& json_path, const std::string& summary) {
    if (json_path.empty()) {
        std::cout << dump(j);
        return;
    }
    std::ofstream out(json_path);
    if (!out) throw UsageError("cannot write '" + json_path + "'");
    out << dump(j);
    std::cout << summary << '\n';
}

void dump_field(const std::string& path, const DeviationField& field) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    write_field_csv(out, field);
}

int run(int argc, char** argv) {
    CLI::App app{"Bootstrap test for second-order stationarity of multivariate time series"};
    app.set_version_flag("--version", std::string(kSoftwareVersion));
    app.require_subcommand(1);

    InputOptions input;
    FitOptions fit;
    double alpha = 0.05;
    std::size_t replicates = 200;
    std::uint64_t seed = 42;
    std::string json_path;
    std::string field_path;
    std::size_t workers = 1;
    std::optional<std::size_t> burn_in;
    double gamma = kDefaultGamma;
    std::string model_name;
    std::optional<double> model_param;
    std::vector<std::size_t> t_values;
    std::vector<double> alphas{0.05, 0.10};
    std::size_t runs = 200;
    std::string output_path;

    auto* test = app.add_subcommand("test", "run the bootstrap stationarity test on a CSV series");
    add_input(test, input);
    add_fit(test, fit);
    test->add_option("--alpha", alpha, "nominal level")->capture_default_str();
    test->add_option("--bootstrap", replicates, "number of bootstrap replicates B")->capture_default_str();
    test->add_option("--seed", seed, "master seed")->capture_default_str();
    test->add_option("--burn-in", burn_in, "bootstrap burn-in (default 100 + 10p)");
    test->add_option("--workers", workers, "threads for the bootstrap (0 = all cores)")->capture_default_str();
    test->add_option("--json", json_path, "write the JSON report here instead of stdout");
    test->add_option("--dump-field", field_path, "write the deviation field as long-format CSV");

    auto* ident = app.add_subcommand("identify", "find the largest subsets of components with stable spectra");
    add_input(ident, input);
    ident->add_option("--gamma", gamma, "threshold exponent in (0, 1/2)")->capture_default_str();
    ident->add_option("--json", json_path, "write the JSON report here instead of stdout");
    ident->add_option("--dump-field", field_path, "write the deviation field as long-format CSV");

    auto* sim = app.add_subcommand("simulate", "write a simulated series as CSV");
    sim->add_option("--model", model_name, "model preset")->required()->check(CLI::IsMember(model_names()));
    sim->add_option("--param", model_param, "theta (ma1, vma1) or phi (ar1, var1)");
    sim->add_option("--t", t_values, "series length")->required()->expected(1);
    sim->add_option("--seed", seed, "seed")->capture_default_str();
    sim->add_option("--output", output_path, "CSV path (default stdout)");

    auto* mc = app.add_subcommand("mc", "Monte Carlo rejection frequencies");
    mc->add_option("--model", model_name, "model preset")->required()->check(CLI::IsMember(model_names()));
    mc->add_option("--param", model_param, "theta (ma1, vma1) or phi (ar1, var1)");
    mc->add_option("--t", t_values, "comma-separated series lengths")->required()->delimiter(',');
    mc->add_option("--runs", runs, "simulation runs per cell")->capture_default_str();
    mc->add_option("--bootstrap", replicates, "bootstrap replicates per run")->capture_default_str();
    mc->add_option("--alpha", alphas, "comma-separated nominal levels")->delimiter(',')->capture_default_str();
    mc->add_option("--seed", seed, "master seed")->capture_default_str();
    mc->add_flag("--no-center", input.no_center, "do not subtract column means");
    mc->add_option("--workers", workers, "concurrent runs (0 = all cores)")->capture_default_str();
    mc->add_option("--json", json_path, "write the JSON table here instead of stdout");
    add_fit(mc, fit);

    auto* order = app.add_subcommand("order", "select the VAR order by Whittle AIC");
    add_input(order, input);
    order->add_option("--pmin", fit.p_min, "smallest order");
    order->add_option("--pmax", fit.p_max, "largest order (default min(T/10, 15))");
    order->add_option("--estimator", fit.estimator, "yw or ols")->check(CLI::IsMember({"yw", "ols"}));
    order->add_option("--penalty", fit.penalty, "order or params")->check(CLI::IsMember({"order", "params"}));
    order->add_option("--aic-scale", fit.aic_scale, "whittle or display")->check(CLI::IsMember({"whittle", "display"}));
    order->add_option("--json", json_path, "write the JSON report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    if (*test) {
        BootstrapConfig cfg;
        cfg.alpha = alpha;
        cfg.replicates = replicates;
        cfg.seed = seed;
        cfg.burn_in = burn_in;
        cfg.workers = workers;
        apply_fit(fit, cfg);
        try {
            validate(cfg);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        const auto series = read_input(input);
        const auto report = run_test(series, cfg);
        if (!field_path.empty()) {
            const auto even = even_length(series);
            dump_field(field_path, deviation_field(even, build_grid(even.length())));
        }
        emit(to_json(report), json_path,
             std::string(report.reject ? "reject" : "do not reject") + " (statistic " + format_double(report.statistic) +
                 ", quantile " + format_double(report.quantile) + ", p-value " + format_double(report.p_value) + ")");
    } else if (*ident) {
        if (!(gamma > 0.0 && gamma < 0.5)) throw UsageError("--gamma must lie in (0, 1/2)");
        const auto series = even_length(read_input(input));
        const auto grid = build_grid(series.length());
        const auto field = deviation_field(series, grid);
        const auto result = identify(series, field, gamma);
        dump_field(field_path, field);
        emit(to_json(result, SupSummary{field.sup_matrix, field.statistic}, summarize(grid)), json_path,
             "maximum stationary subset size " + std::to_string(result.d_prime));
    } else if (*sim) {
        const auto spec = model_preset(model_name, model_param);
        Rng rng = make_rng(seed);
        const auto series = generate(spec, t_values.front(), rng);
        if (output_path.empty()) {
            write_csv(std::cout, series);
        } else {
            std::ofstream out(output_path);
            if (!out) throw UsageError("cannot write '" + output_path + "'");
            write_csv(out, series);
        }
    } else if (*mc) {
        McExperiment exp;
        exp.model = model_preset(model_name, model_param);
        exp.t_values = t_values;
        exp.runs = runs;
        exp.alphas = alphas;
        exp.seed = seed;
        exp.center = !input.no_center;
        exp.workers = workers;
        exp.bootstrap.replicates = replicates;
        apply_fit(fit, exp.bootstrap);
        if (runs < 1) throw UsageError("--runs must be positive");
        for (const double a : alphas) {
            BootstrapConfig probe = exp.bootstrap;
            probe.alpha = a;
            try {
                validate(probe);
            } catch (const DomainError& e) {
                throw UsageError(e.what());
            }
        }
        const auto table = run_mc(exp);
        std::string summary;
        for (const auto& r : table.rows) {
            summary += exp.model.name + " T=" + std::to_string(r.t_len) + " alpha=" + format_double(r.alpha) +
                       ": " + format_double(r.frequency) + "\n";
        }
        if (!summary.empty()) summary.pop_back();
        emit(to_json(table, exp), json_path, summary);
    } else if (*order) {
        const auto series = even_length(read_input(input));
        const std::size_t p_max = fit.p_max.value_or(default_max_order(series.length()));
        const std::size_t p_min = std::min(fit.p_min.value_or(0), p_max);
        const auto estimator = fit.estimator == "ols" ? Estimator::least_squares : Estimator::yule_walker;
        const auto penalty = fit.penalty == "params" ? AicPenalty::parameters : AicPenalty::order;
        const auto scaling = fit.aic_scale == "display" ? AicScaling::display : AicScaling::whittle;
        const auto sel = select_order(series, p_min, p_max, estimator, penalty, scaling);
        emit(to_json(sel, series.length(), estimator, penalty, scaling), json_path,
             "selected order " + std::to_string(sel.order));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
        return kExitNumerical;
    } catch (const UnstableModel& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
