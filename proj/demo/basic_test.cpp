// Simulates a series with a variance that grows over time, runs the test and,
// for a bivariate example, the identification step.

#include "stationarity/stationarity.hpp"

#include <iostream>

int main() {
    using namespace stationarity;

    Rng rng = make_rng(2024);
    const auto series = center(generate(model_preset("tv-scale"), 256, rng));

    BootstrapConfig cfg;
    cfg.replicates = 200;
    cfg.alpha = 0.05;
    cfg.seed = 7;
    const auto report = run_test(series, cfg);
    std::cout << "tv-scale, T=256: statistic " << report.statistic << ", quantile " << report.quantile
              << ", p-value " << report.p_value << (report.reject ? " -> reject\n" : " -> keep\n");

    // Component 0 changes scale half way, component 1 is white noise.
    Eigen::MatrixXd x(1024, 2);
    std::normal_distribution<double> normal;
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        x(t, 0) = (t < 512 ? 1.0 : 3.0) * normal(rng);
        x(t, 1) = normal(rng);
    }
    const MultivariateSeries pair(x);
    const auto field = deviation_field(pair, build_grid(pair.length()));
    const auto ident = identify(pair, field, 0.25);
    std::cout << "largest stationary subsets (size " << ident.d_prime << "):";
    for (const auto& s : ident.subsets) {
        std::cout << " {";
        for (std::size_t i = 0; i < s.size(); ++i) std::cout << (i ? "," : "") << s[i];
        std::cout << "}";
    }
    std::cout << '\n';
}
