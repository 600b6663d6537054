#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "mineroi/market.hpp"
#include "mineroi/synthetic.hpp"

namespace testutil {

// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("mineroi_" + tag + "_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline mineroi::Date d(const char* iso) { return mineroi::Date::parse(iso); }

// Two-year single-regime scenario with three machines.
inline mineroi::synth::ScenarioConfig basic_scenario(std::uint64_t seed = 7) {
    mineroi::synth::ScenarioConfig cfg;
    cfg.n_machines = 3;
    cfg.range = {d("2018-01-01"), d("2020-01-01")};
    cfg.regimes = {{{d("2018-01-01"), d("2020-01-01")}, 0.0005, 0.02}};
    cfg.electricity_rate = 0.05;
    cfg.region = "synthia";
    cfg.halving_dates = {d("2016-07-09")};
    cfg.seed = seed;
    return cfg;
}

// Flat market: every day identical, easy to reason about by hand.
inline mineroi::MarketSeries flat_market(mineroi::Date start, int days, double network_revenue,
                                         double network_hashrate, double rate,
                                         const std::string& region = "r") {
    std::vector<mineroi::MarketDay> v;
    for (int i = 0; i < days; ++i) {
        mineroi::MarketDay day;
        day.date = start + i;
        day.btc_price_usd = 30000.0;
        day.difficulty = 1.0e13;
        day.network_hashrate_ths = network_hashrate;
        day.network_revenue_usd = network_revenue;
        day.block_reward_btc = 3.125;
        day.transaction_fees_btc = 15.0;
        day.electricity_rates[region] = rate;
        v.push_back(day);
    }
    return mineroi::MarketSeries(std::move(v));
}

inline mineroi::MachineSpec simple_machine(const std::string& id, double hashrate, double power,
                                           mineroi::Date release, int price_days, double price) {
    mineroi::MachineSpec m;
    m.id = id;
    m.hashrate_ths = hashrate;
    m.power_w = power;
    m.efficiency_jth = power / hashrate;
    m.release_date = release;
    for (int i = 0; i < price_days; ++i) m.price_series[release + i] = price;
    return m;
}

}  // namespace testutil
