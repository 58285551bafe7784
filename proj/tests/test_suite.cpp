#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "swlab/suite.hpp"

using namespace swlab;

namespace {

SuiteConfig parse(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

}  // namespace

TEST(Config, Defaults) {
    SuiteConfig c = parse("");
    EXPECT_EQ(c.grids, std::vector<int>{8});
    EXPECT_EQ(c.seed, 1u);
    EXPECT_EQ(c.threads, 1);
    EXPECT_TRUE(c.suites.empty());
}

TEST(Config, ParsesKeysAndComments) {
    SuiteConfig c = parse(
        "# study\n"
        "grids = 6, 8 # two levels\n"
        "epsilons = 0.1, 0.05\n"
        "seed = 42\n"
        "\n"
        "suites = clifford, adjoint\n"
        "threads = 2\n"
        "tol.adjoint-flat = 1e-9\n");
    EXPECT_EQ(c.grids, (std::vector<int>{6, 8}));
    EXPECT_EQ(c.epsilons, (std::vector<double>{0.1, 0.05}));
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(c.suites, (std::vector<std::string>{"clifford", "adjoint"}));
    EXPECT_EQ(c.threads, 2);
    EXPECT_EQ(c.tolerances.at("adjoint-flat"), 1e-9);
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse("grids = 7"), std::invalid_argument);
    EXPECT_THROW(parse("grids = 2"), std::invalid_argument);
    EXPECT_THROW(parse("grids ="), std::invalid_argument);
    EXPECT_THROW(parse("epsilons = 0.1, 0.2"), std::invalid_argument);
    EXPECT_THROW(parse("epsilons = 0.1, -0.2"), std::invalid_argument);
    EXPECT_THROW(parse("suites = nonsense"), std::invalid_argument);
    EXPECT_THROW(parse("seed = -1"), std::invalid_argument);
    EXPECT_THROW(parse("seed = 1.5"), std::invalid_argument);
    EXPECT_THROW(parse("threads = 0"), std::invalid_argument);
    EXPECT_THROW(parse("colour = red"), std::invalid_argument);
    EXPECT_THROW(parse("grids 8"), std::invalid_argument);
    EXPECT_THROW(load_config("/nonexistent/swlab.conf"), std::invalid_argument);
}

TEST(Config, SuiteNames) {
    for (const auto& s : suite_names()) {
        SuiteConfig c;
        c.suites = {s};
        EXPECT_NO_THROW(c.validate()) << s;
    }
}

TEST(Report, EmptySuiteList) {
    SuiteConfig c;
    auto checks = run_suite(c);
    EXPECT_TRUE(checks.empty());
    auto j = nlohmann::json::parse(report_json(c, checks));
    EXPECT_EQ(j.at("seed"), 1);
    EXPECT_TRUE(j.at("checks").empty());
}

TEST(Report, DeterministicAcrossRunsAndThreads) {
    SuiteConfig c;
    c.grids = {6};
    c.suites = {"clifford", "metric", "calculus"};
    std::string first = report_json(c, run_suite(c));
    EXPECT_EQ(first, report_json(c, run_suite(c)));
    c.threads = 3;
    EXPECT_EQ(first, report_json(c, run_suite(c)));
    auto j = nlohmann::json::parse(first);
    ASSERT_FALSE(j.at("checks").empty());
    for (const auto& ch : j.at("checks")) {
        EXPECT_TRUE(ch.at("pass").get<bool>()) << ch.dump();
        EXPECT_FALSE(ch.contains("runtime"));
    }
}

TEST(Report, TimingIsOptIn) {
    SuiteConfig c;
    c.suites = {"clifford"};
    auto checks = run_suite(c);
    auto j = nlohmann::json::parse(report_json(c, checks, true));
    for (const auto& ch : j.at("checks")) EXPECT_TRUE(ch.contains("runtime"));
}

TEST(Report, ToleranceOverrideCanFail) {
    SuiteConfig c;
    c.suites = {"clifford"};
    auto base = run_suite(c);
    ASSERT_FALSE(base.empty());
    const CheckReport& first = base.front();
    ASSERT_EQ(first.comparison, "le");
    c.tolerances[first.name] = -1.0;
    auto strict = run_suite(c);
    EXPECT_EQ(strict.front().name, first.name);
    EXPECT_FALSE(strict.front().pass);
    EXPECT_EQ(strict.front().threshold, -1.0);
}

TEST(LogLogFit, SyntheticPowerLaw) {
    std::vector<double> h{0.4, 0.2, 0.1, 0.05}, e;
    for (double x : h) e.push_back(3.0 * x * x);
    auto [slope, res] = loglog_fit(h, e);
    EXPECT_NEAR(slope, 2.0, 1e-12);
    EXPECT_NEAR(res, 0.0, 1e-12);
    EXPECT_THROW(loglog_fit({1.0}, {1.0}), std::invalid_argument);
    EXPECT_THROW(loglog_fit({1.0, 2.0}, {1.0}), std::invalid_argument);
}

TEST(Study, Validation) {
    EXPECT_THROW(convergence_study("lc-variation", {1e-2, 5e-3}), std::invalid_argument);
    EXPECT_THROW(convergence_study("nonsense", {1e-2, 5e-3, 2.5e-3}), std::invalid_argument);
    EXPECT_THROW(convergence_study("adjoint-flat", {6, 8.5, 10}), std::invalid_argument);
    EXPECT_THROW(convergence_study("lc-variation", {1e-2, 0, 2.5e-3}), std::invalid_argument);
    EXPECT_EQ(study_names().size(), 5u);
}

TEST(Study, LcVariationIsSecondOrder) {
    StudyResult r = convergence_study("lc-variation", {4e-3, 2e-3, 1e-3});
    EXPECT_NEAR(r.slope, 2.0, 0.1);
    EXPECT_TRUE(r.monotone);
    EXPECT_FALSE(r.saturated);
}

TEST(Study, FlatAdjointIsSaturated) {
    StudyResult r = convergence_study("adjoint-flat", {4, 6, 8});
    EXPECT_TRUE(r.saturated);
    EXPECT_EQ(r.levels.size(), 3u);
    EXPECT_NEAR(r.levels[0], 2 * M_PI / 4, 1e-15);
}
