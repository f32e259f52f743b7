#include "oracles.hpp"
#include "stationarity/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace stationarity;

TEST(Report, TestReportFields) {
    const auto x = center(oracle::gaussian(64, 2, 1));
    BootstrapConfig cfg;
    cfg.replicates = 20;
    cfg.seed = 5;
    const auto j = to_json(run_test(x, cfg));
    EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
    EXPECT_EQ(j["software_version"], kSoftwareVersion);
    EXPECT_EQ(j["command"], "test");
    EXPECT_EQ(j["bootstrap"]["seed"], 5u);
    EXPECT_EQ(j["bootstrap"]["replicate_stats"].size(), 20u);
    EXPECT_EQ(j["model"]["estimator"], "yule-walker");
    EXPECT_EQ(j["model"]["aic_scale"], "whittle");
    EXPECT_EQ(j["grid"]["T"], 64u);
    EXPECT_EQ(j["sup_matrix"].size(), 2u);
    EXPECT_TRUE(j["centering"]["centered"].get<bool>());
}

TEST(Report, RoundTripIsUnchanged) {
    const auto x = center(oracle::gaussian(64, 3, 2));
    BootstrapConfig cfg;
    cfg.replicates = 20;
    const std::string text = dump(to_json(run_test(x, cfg)));
    EXPECT_EQ(dump(nlohmann::json::parse(text)), text);
    const auto field = deviation_field(x, build_grid(64));
    const std::string id = dump(to_json(identify(x, field), SupSummary{field.sup_matrix, field.statistic},
                                        summarize(field.grid)));
    EXPECT_EQ(dump(nlohmann::json::parse(id)), id);
}

TEST(Report, NumbersRoundTripExactly) {
    const auto x = center(oracle::gaussian(32, 1, 3));
    BootstrapConfig cfg;
    cfg.replicates = 10;
    const auto r = run_test(x, cfg);
    const auto j = nlohmann::json::parse(dump(to_json(r)));
    EXPECT_EQ(j["statistic"].get<double>(), r.statistic);
    EXPECT_EQ(j["bootstrap"]["replicate_stats"].get<std::vector<double>>(), r.replicate_stats);
}

TEST(Report, OrderSelectionMarksFailedFits) {
    OrderSelection sel;
    sel.p_min = 1;
    sel.order = 1;
    sel.aic = {0.5, std::nullopt};
    sel.model.order = 1;
    sel.model.coeffs = {Eigen::MatrixXd::Zero(1, 1)};
    sel.model.sigma = Eigen::MatrixXd::Identity(1, 1);
    const auto j = to_json(sel, 100, Estimator::yule_walker, AicPenalty::order);
    EXPECT_EQ(j["aic"][0]["order"], 1u);
    EXPECT_TRUE(j["aic"][1]["aic"].is_null());
}

TEST(Report, FieldCsv) {
    const auto x = oracle::gaussian(8, 2, 1);
    const auto field = deviation_field(x, build_grid(8));
    std::ostringstream out;
    write_field_csv(out, field);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "v,omega,a,b,modulus");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    std::size_t expected = 0;
    for (const auto& s : field.slices) expected += 4 * s.omegas.size();
    EXPECT_EQ(rows, expected);
}
