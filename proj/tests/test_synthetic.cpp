#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "mineroi/error.hpp"
#include "mineroi/roi.hpp"
#include "mineroi/synthetic.hpp"

using namespace mineroi;
using testutil::d;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("scenario validation") {
    synth::ScenarioConfig cfg = testutil::basic_scenario();
    SUBCASE("valid config passes") { CHECK_NOTHROW(cfg.validate()); }
    SUBCASE("regimes must cover the range") {
        cfg.regimes.front().range.start = d("2018-06-01");
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }
    SUBCASE("regimes must be contiguous") {
        cfg.regimes = {{{d("2018-01-01"), d("2018-06-01")}, 0.0, 0.01},
                       {{d("2018-07-01"), d("2020-01-01")}, 0.0, 0.01}};
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }
    SUBCASE("halving calendar is required") {
        cfg.halving_dates.clear();
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }
}

TEST_CASE("same seed gives byte-identical CSV output") {
    const synth::ScenarioConfig cfg = testutil::basic_scenario(77);
    testutil::TempDir dir_a("synth_a");
    testutil::TempDir dir_b("synth_b");
    synth::write_csvs(synth::generate(cfg), cfg, dir_a.path());
    synth::write_csvs(synth::generate(cfg), cfg, dir_b.path());
    for (const char* name : {"chain.csv", "energy.csv", "machines.csv", "machine_specs.csv"}) {
        CHECK(slurp(dir_a.path() / name) == slurp(dir_b.path() / name));
        CHECK(!slurp(dir_a.path() / name).empty());
    }

    synth::ScenarioConfig other = cfg;
    other.seed = 78;
    testutil::TempDir dir_c("synth_c");
    synth::write_csvs(synth::generate(other), other, dir_c.path());
    CHECK(slurp(dir_a.path() / "chain.csv") != slurp(dir_c.path() / "chain.csv"));
}

TEST_CASE("generated series satisfy the market invariants") {
    const synth::Scenario s = synth::generate(testutil::basic_scenario(13));
    for (const auto& day : s.market.days()) CHECK_NOTHROW(day.validate());
    CHECK(s.market.size() == 730);
    for (const auto& m : s.machines) {
        CHECK(m.hashrate_ths > 0.0);
        CHECK(!m.price_series.empty());
    }
}

TEST_CASE("zero-volatility scenario: series are piecewise-linear per regime") {
    synth::ScenarioConfig cfg;
    cfg.n_machines = 1;
    cfg.range = {d("2019-01-01"), d("2019-07-01")};
    cfg.regimes = {{{d("2019-01-01"), d("2019-04-01")}, 0.002, 0.0},
                   {{d("2019-04-01"), d("2019-07-01")}, -0.001, 0.0}};
    cfg.halving_dates = {d("2016-07-09")};
    cfg.seed = 3;

    const synth::Scenario s = synth::generate(cfg);
    auto check_linear = [&](auto getter, const DateRange& range) {
        // second differences vanish on a linear segment
        for (Date day = range.start + 2; day < range.end; ++day) {
            const double a = getter(s.market.at(day - 2));
            const double b = getter(s.market.at(day - 1));
            const double c = getter(s.market.at(day));
            CHECK(std::abs((c - b) - (b - a)) < 1e-6 * std::max(1.0, std::abs(b)));
        }
    };
    for (const auto& regime : cfg.regimes) {
        check_linear([](const MarketDay& m) { return m.btc_price_usd; }, regime.range);
        check_linear([](const MarketDay& m) { return m.network_hashrate_ths; }, regime.range);
        check_linear([](const MarketDay& m) { return m.difficulty; }, regime.range);
        check_linear([](const MarketDay& m) { return m.transaction_fees_btc; }, regime.range);
        check_linear([](const MarketDay& m) { return m.network_revenue_usd; }, regime.range);
    }
}

TEST_CASE("strong revenue drift with cheap power labels mostly profitable") {
    synth::ScenarioConfig cfg;
    cfg.n_machines = 3;
    cfg.range = {d("2019-01-01"), d("2021-06-01")};
    cfg.regimes = {{{d("2019-01-01"), d("2020-01-01")}, 0.0, 0.004},
                   {{d("2020-01-01"), d("2021-06-01")}, 0.012, 0.003}};
    cfg.electricity_rate = 0.001;
    cfg.halving_dates = {d("2016-07-09")};
    cfg.machine_price_scale = 0.25;
    cfg.seed = 21;

    const synth::Scenario s = synth::generate(cfg);
    const DateRange window{d("2020-01-01"), d("2020-06-01")};
    int profitable = 0;
    int total = 0;
    for (const auto& m : s.machines) {
        for (Date day = window.start; day < window.end; ++day) {
            if (!m.has_price(day)) continue;
            const RoiResult r = roi(m, day, 365, s.market, cfg.region);
            ++total;
            profitable += r.label == 2 ? 1 : 0;
        }
    }
    REQUIRE(total > 100);
    CHECK(static_cast<double>(profitable) / total > 0.6);
}

TEST_CASE("oracle roi on degenerate machines") {
    const Date start = d("2019-01-01");
    const MarketSeries market = testutil::flat_market(start, 400, 1000.0, 10000.0, 0.05, "r");

    SUBCASE("one-day horizon is a single proportional share") {
        MachineSpec m = testutil::simple_machine("m", 100.0, 3000.0, start, 10, 500.0);
        const RoiResult r = synth::oracle_roi(m, start, 1, market, "r");
        CHECK(r.revenue_total == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(r.op_cost_total == doctest::Approx(3.6).epsilon(1e-12));
    }

    SUBCASE("zero-hashrate machine loses exactly its power bill") {
        MachineSpec m = testutil::simple_machine("m", 0.0, 1000.0, start, 400, 2000.0);
        const RoiResult r = synth::oracle_roi(m, start, 365, market, "r");
        CHECK(r.revenue_total == 0.0);
        CHECK(r.roi == doctest::Approx(-r.op_cost_total / 2000.0).epsilon(1e-12));
        CHECK(r.label == 0);
    }
}

TEST_CASE("separable dataset") {
    const auto samples = synth::separable_dataset(8, 4, 25, 2024);

    SUBCASE("class counts are exact and dates interleave") {
        REQUIRE(samples.size() == 75);
        int counts[3] = {0, 0, 0};
        for (const auto& s : samples) ++counts[s.label];
        CHECK(counts[0] == 25);
        CHECK(counts[1] == 25);
        CHECK(counts[2] == 25);
        CHECK(samples[0].end_date + 1 == samples[1].end_date);
    }

    SUBCASE("seed determinism") {
        const auto again = synth::separable_dataset(8, 4, 25, 2024);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            CHECK(samples[i].x == again[i].x);
            CHECK(samples[i].label == again[i].label);
        }
        const auto different = synth::separable_dataset(8, 4, 25, 2025);
        CHECK(samples[0].x != different[0].x);
    }

    SUBCASE("nearest-class-mean classifier is near-perfect on a held-out draw") {
        // estimate class means on one draw, classify a fresh draw
        const auto train_set = synth::separable_dataset(8, 4, 50, 1);
        const auto test_set = synth::separable_dataset(8, 4, 50, 2);
        Eigen::MatrixXd means[3];
        int counts[3] = {0, 0, 0};
        for (int c = 0; c < 3; ++c) means[c] = Eigen::MatrixXd::Zero(8, 4);
        for (const auto& s : train_set) {
            means[s.label] += s.x;
            ++counts[s.label];
        }
        for (int c = 0; c < 3; ++c) means[c] /= counts[c];

        int correct = 0;
        for (const auto& s : test_set) {
            int best = -1;
            double best_dist = 1e300;
            for (int c = 0; c < 3; ++c) {
                const double dist = (s.x - means[c]).squaredNorm();
                if (dist < best_dist) {
                    best_dist = dist;
                    best = c;
                }
            }
            correct += best == s.label ? 1 : 0;
        }
        CHECK(static_cast<double>(correct) / test_set.size() >= 0.99);
    }
}
