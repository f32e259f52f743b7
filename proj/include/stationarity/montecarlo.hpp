#pragma once

#include "stationarity/bootstrap.hpp"
#include "stationarity/errors.hpp"
#include "stationarity/models.hpp"
#include "stationarity/parallel.hpp"
#include "stationarity/random.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace stationarity {

struct McExperiment {
    ModelSpec model;
    std::vector<std::size_t> t_values{64, 128, 256};
    std::size_t runs = 200;
    std::vector<double> alphas{0.05, 0.10};
    std::uint64_t seed = 42;
    bool center = true;
    /// Bootstrap settings per run; its seed and alpha are overridden per run.
    BootstrapConfig bootstrap;
    /// Runs executed concurrently; every run is itself single-threaded.
    std::size_t workers = 1;
    /// A cell aborts when more than this fraction of its runs fail.
    double max_failure_rate = 0.01;
};

struct McRow {
    std::string model;
    std::size_t t_len = 0;
    double alpha = 0.0;
    std::size_t runs = 0;
    std::size_t completed = 0;
    std::size_t rejections = 0;
    double frequency = 0.0;
    double std_error = 0.0;
};

struct McTable {
    std::vector<McRow> rows;
    std::uint64_t seed = 0;
    std::size_t replicates = 0;
    std::vector<std::string> failures;
};

/// Stream for the data of run r in the cell of length T.
[[nodiscard]] inline std::uint64_t mc_data_seed(std::uint64_t master, std::size_t t, std::size_t run) {
    return derive_seed(master, {0x64617461ULL, t, run});
}

[[nodiscard]] inline std::uint64_t mc_bootstrap_seed(std::uint64_t master, std::size_t t, std::size_t run) {
    return derive_seed(master, {0x626f6f74ULL, t, run});
}

/// Outcome of one Monte Carlo run: rejection per alpha, or the failure message.
struct McRunResult {
    bool ok = false;
    std::vector<bool> reject;
    std::string error;
};

[[nodiscard]] inline McRunResult mc_single_run(const McExperiment& exp, std::size_t t, std::size_t run) {
    McRunResult out;
    try {
        Rng rng = make_rng(mc_data_seed(exp.seed, t, run));
        auto series = generate(exp.model, t, rng);
        if (exp.center) series = center(series);
        BootstrapConfig cfg = exp.bootstrap;
        cfg.seed = mc_bootstrap_seed(exp.seed, t, run);
        cfg.alpha = exp.alphas.front();
        cfg.workers = 1;
        const auto report = run_test(series, cfg);
        for (const double a : exp.alphas) {
            out.reject.push_back(report.statistic > bootstrap_quantile(report.replicate_stats, a));
        }
        out.ok = true;
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

/**
 * Rejection frequencies for every (T, alpha) cell.
 *
 * Runs sharing T reuse one data set and one bootstrap distribution across alphas.
 * Seeds are derived per (T, run), so the table does not depend on the worker count.
 */
[[nodiscard]] inline McTable run_mc(const McExperiment& exp) {
    if (exp.runs < 1) throw DomainError("at least one Monte Carlo run is required");
    if (exp.alphas.empty()) throw DomainError("at least one nominal level is required");
    for (const double a : exp.alphas) {
        BootstrapConfig probe = exp.bootstrap;
        probe.alpha = a;
        validate(probe);
    }
    validate(exp.model);
    McTable table;
    table.seed = exp.seed;
    table.replicates = exp.bootstrap.replicates;
    for (const std::size_t t : exp.t_values) {
        if (t < kMinSeriesLength) throw DomainError("series length must be at least 8");
        std::vector<McRunResult> results(exp.runs);
        parallel_for(exp.runs, exp.workers, [&](std::size_t r) { results[r] = mc_single_run(exp, t, r); });
        std::size_t completed = 0;
        std::vector<std::size_t> rejections(exp.alphas.size(), 0);
        for (std::size_t r = 0; r < exp.runs; ++r) {
            if (!results[r].ok) {
                table.failures.push_back("T=" + std::to_string(t) + " run " + std::to_string(r) + ": " +
                                         results[r].error);
                continue;
            }
            ++completed;
            for (std::size_t i = 0; i < exp.alphas.size(); ++i) rejections[i] += results[r].reject[i] ? 1 : 0;
        }
        const std::size_t failed = exp.runs - completed;
        if (static_cast<double>(failed) > exp.max_failure_rate * static_cast<double>(exp.runs) || completed == 0) {
            throw NumericalError("Monte Carlo cell T=" + std::to_string(t) + " aborted: " + std::to_string(failed) +
                                 " of " + std::to_string(exp.runs) + " runs failed" +
                                 (table.failures.empty() ? std::string() : " (first: " + table.failures.front() + ")"));
        }
        for (std::size_t i = 0; i < exp.alphas.size(); ++i) {
            McRow row;
            row.model = exp.model.name;
            row.t_len = t;
            row.alpha = exp.alphas[i];
            row.runs = exp.runs;
            row.completed = completed;
            row.rejections = rejections[i];
            row.frequency = static_cast<double>(rejections[i]) / static_cast<double>(completed);
            row.std_error = std::sqrt(row.frequency * (1.0 - row.frequency) / static_cast<double>(completed));
            table.rows.push_back(row);
        }
    }
    return table;
}

}  // namespace stationarity
