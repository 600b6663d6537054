#include "mineroi/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "mineroi/csv.hpp"
#include "mineroi/error.hpp"
#include "mineroi/rng.hpp"

namespace mineroi::synth {

void ScenarioConfig::validate() const {
    if (n_machines < 1) throw ConfigError("scenario: n_machines must be >= 1");
    if (range.end <= range.start) throw ConfigError("scenario: empty date range");
    if (regimes.empty()) throw ConfigError("scenario: at least one regime required");
    if (regimes.front().range.start != range.start || regimes.back().range.end != range.end) {
        throw ConfigError("scenario: regimes must cover the full date range");
    }
    for (std::size_t i = 0; i < regimes.size(); ++i) {
        if (regimes[i].range.end <= regimes[i].range.start) {
            throw ConfigError("scenario: regime " + std::to_string(i) + " has an empty range");
        }
        if (i > 0 && regimes[i].range.start != regimes[i - 1].range.end) {
            throw ConfigError("scenario: regimes must be contiguous and non-overlapping");
        }
        if (regimes[i].volatility < 0.0) {
            throw ConfigError("scenario: regime volatility must be non-negative");
        }
    }
    if (electricity_rate < 0.0) throw ConfigError("scenario: negative electricity rate");
    if (halving_dates.empty()) throw ConfigError("scenario: halving calendar required");
}

namespace {

double block_reward_at(Date d, const std::vector<Date>& halvings) {
    int n = 0;
    for (const Date h : halvings) {
        if (h <= d) ++n;
    }
    // synthetic chain starts at 50 BTC and halves per calendar entry
    return 50.0 / std::pow(2.0, n);
}

}  // namespace

namespace {

// Piecewise-linear trend re-anchored at each regime boundary, with optional
// multiplicative log-noise scaled by the regime volatility. A zero-volatility
// regime yields an exactly linear segment.
class RegimePath {
public:
    explicit RegimePath(double start_value) : anchor_(start_value) {}

    double step(const RegimeSegment& regime, bool regime_changed, Rng& rng) {
        if (regime_changed) {
            anchor_ = last_;
            k_ = 0;
            walk_ = 0.0;
        }
        ++k_;
        walk_ += regime.volatility * rng.normal();
        const double trend = std::max(0.05, 1.0 + regime.drift * k_);
        last_ = anchor_ * trend * std::exp(walk_);
        return last_;
    }

private:
    double anchor_;
    double last_ = 0.0;
    int k_ = 0;
    double walk_ = 0.0;
};

}  // namespace

Scenario generate(const ScenarioConfig& config) {
    config.validate();
    Rng rng(config.seed);

    Scenario out;
    const int n_days = config.range.length_days();

    RegimePath price_path(5000.0 * std::exp(rng.normal(0.0, 0.25)));
    RegimePath hashrate_path(5.0e7 * std::exp(rng.normal(0.0, 0.25)));
    RegimePath fee_path(20.0 * std::exp(rng.normal(0.0, 0.25)));

    std::vector<MarketDay> days;
    days.reserve(static_cast<std::size_t>(n_days));
    std::size_t regime_idx = 0;
    for (int i = 0; i < n_days; ++i) {
        const Date d = config.range.start + i;
        const std::size_t prev_idx = regime_idx;
        while (!config.regimes[regime_idx].range.contains(d)) ++regime_idx;
        const bool changed = i > 0 && regime_idx != prev_idx;
        const RegimeSegment& regime = config.regimes[regime_idx];

        MarketDay day;
        day.date = d;
        day.btc_price_usd = price_path.step(regime, changed, rng);
        // the network grows on its own mild trend; fees hold level at zero vol
        const RegimeSegment hashrate_regime{regime.range, 0.0008, regime.volatility * 0.5};
        const RegimeSegment fee_regime{regime.range, 0.0, regime.volatility};
        day.network_hashrate_ths = hashrate_path.step(hashrate_regime, changed, rng);
        day.difficulty = day.network_hashrate_ths * 1.0e12 * 600.0 / 4294967296.0;
        day.block_reward_btc = block_reward_at(d, config.halving_dates);
        day.transaction_fees_btc = fee_path.step(fee_regime, changed, rng);
        day.network_revenue_usd =
            (day.block_reward_btc * 144.0 + day.transaction_fees_btc) * day.btc_price_usd;
        day.electricity_rates[config.region] = config.electricity_rate;
        day.validate();
        days.push_back(std::move(day));
    }
    out.market = MarketSeries(std::move(days));

    for (int m = 0; m < config.n_machines; ++m) {
        MachineSpec spec;
        spec.id = "synth-" + std::to_string(m);
        spec.hashrate_ths = rng.uniform(10.0, 250.0);
        spec.efficiency_jth = rng.uniform(20.0, 100.0);
        spec.power_w = spec.hashrate_ths * spec.efficiency_jth;  // J/TH * TH/s = W
        // stagger releases across the first quarter of the range
        const int offset =
            static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, n_days / 4))));
        spec.release_date = config.range.start + offset;

        const double base_price =
            spec.hashrate_ths * rng.uniform(15.0, 60.0) * config.machine_price_scale;
        const double depreciation = rng.uniform(-0.0012, -0.0002);  // per day, linear
        double walk = 0.0;
        std::size_t ridx = 0;
        for (Date d = spec.release_date; d < config.range.end; ++d) {
            while (!config.regimes[ridx].range.contains(d)) ++ridx;
            const int k = d - spec.release_date;
            walk += 0.5 * config.regimes[ridx].volatility * rng.normal();
            const double trend = std::max(0.05, 1.0 + depreciation * k);
            spec.price_series[d] = base_price * trend * std::exp(walk);
        }
        const std::string warning = spec.validate();
        (void)warning;  // synthetic specs are constructed consistent
        out.machines.push_back(std::move(spec));
    }
    return out;
}

void write_csvs(const Scenario& scenario, const ScenarioConfig& config,
                const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    {
        CsvWriter w(dir / "chain.csv");
        w.row({"date", "btc_price_usd", "difficulty", "network_hashrate_ths", "network_revenue_usd",
               "block_reward_btc", "transaction_fees_btc"});
        for (const auto& d : scenario.market.days()) {
            w.row({d.date.to_string(), format_double(d.btc_price_usd), format_double(d.difficulty),
                   format_double(d.network_hashrate_ths), format_double(d.network_revenue_usd),
                   format_double(d.block_reward_btc), format_double(d.transaction_fees_btc)});
        }
    }
    {
        CsvWriter w(dir / "energy.csv");
        w.row({"date", "region", "rate_usd_per_kwh"});
        for (const auto& d : scenario.market.days()) {
            w.row({d.date.to_string(), config.region, format_double(config.electricity_rate)});
        }
    }
    {
        CsvWriter w(dir / "machine_specs.csv");
        w.row({"machine_id", "hashrate_ths", "power_w", "efficiency_jth", "release_date"});
        for (const auto& m : scenario.machines) {
            w.row({m.id, format_double(m.hashrate_ths), format_double(m.power_w),
                   format_double(m.efficiency_jth), m.release_date.to_string()});
        }
    }
    {
        CsvWriter w(dir / "machines.csv");
        w.row({"machine_id", "date", "price_usd"});
        for (const auto& m : scenario.machines) {
            for (const auto& [d, p] : m.price_series) {
                w.row({m.id, d.to_string(), format_double(p)});
            }
        }
    }
}

RoiResult oracle_roi(const MachineSpec& machine, Date purchase_date, int horizon_days,
                     const MarketSeries& market, const std::string& region) {
    // deliberately naive: raw loops, no shared helpers
    double capital = 0.0;
    bool have_capital = false;
    for (const auto& [d, p] : machine.price_series) {
        if (d == purchase_date) {
            capital = p;
            have_capital = true;
            break;
        }
    }
    if (!have_capital) {
        throw CoverageError("oracle: machine " + machine.id + ": no price at " +
                            purchase_date.to_string());
    }

    double revenue = 0.0;
    double cost = 0.0;
    for (int k = 0; k < horizon_days; ++k) {
        const Date d = purchase_date + k;
        const MarketDay* day = nullptr;
        for (const auto& candidate : market.days()) {
            if (candidate.date == d) {
                day = &candidate;
                break;
            }
        }
        if (!day) throw CoverageError("oracle: no market data for " + d.to_string());
        revenue += machine.hashrate_ths / day->network_hashrate_ths * day->network_revenue_usd;
        auto it = day->electricity_rates.find(region);
        if (it == day->electricity_rates.end()) {
            throw CoverageError("oracle: no rate for region '" + region + "' on " + d.to_string());
        }
        cost += machine.power_w * 24.0 / 1000.0 * it->second;
    }

    RoiResult r;
    r.capital = capital;
    r.revenue_total = revenue;
    r.op_cost_total = cost;
    r.roi = (revenue - cost) / capital;
    r.label = r.roi <= 0.0 ? 0 : (r.roi >= 1.0 ? 2 : 1);
    return r;
}

std::vector<std::complex<double>> oracle_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> spectrum(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) *
                                 static_cast<double>(t) / static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        spectrum[k] = acc;
    }
    return spectrum;
}

std::vector<std::complex<double>> oracle_idft(const std::vector<std::complex<double>>& spectrum) {
    const std::size_t n = spectrum.size();
    std::vector<std::complex<double>> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) *
                                 static_cast<double>(t) / static_cast<double>(n);
            acc += spectrum[k] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        x[t] = acc / static_cast<double>(n);
    }
    return x;
}

std::vector<double> oracle_spectral_filter(const std::vector<double>& x,
                                           const std::vector<std::complex<double>>& bin_weights) {
    const std::size_t n = x.size();
    const std::size_t bins = n / 2 + 1;
    if (bin_weights.size() != bins) throw LogicError("oracle_spectral_filter: weight count mismatch");

    std::vector<std::complex<double>> spectrum = oracle_dft(x);
    std::vector<std::complex<double>> weighted(n);
    for (std::size_t k = 0; k < bins; ++k) weighted[k] = spectrum[k] * bin_weights[k];
    for (std::size_t k = bins; k < n; ++k) weighted[k] = std::conj(weighted[n - k]);

    std::vector<std::complex<double>> series = oracle_idft(weighted);
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = series[t].real();
    return out;
}

std::vector<WindowSample> separable_dataset(int lookback, int features, int n_per_class,
                                            std::uint64_t seed) {
    if (n_per_class < 1) throw DomainError("separable_dataset: n_per_class must be >= 1");

    constexpr double kPatternAmp = 0.3;
    constexpr double kNoiseStd = 0.15;

    // class patterns depend only on the shape, so different seeds draw fresh
    // samples from the same three populations
    Rng pattern_rng(0x5eedfab1e00ull + static_cast<std::uint64_t>(lookback) * 1000003ull +
                    static_cast<std::uint64_t>(features));
    std::array<Eigen::MatrixXd, 3> patterns;
    for (auto& p : patterns) {
        p.resize(lookback, features);
        for (int t = 0; t < lookback; ++t) {
            for (int f = 0; f < features; ++f) {
                p(t, f) = pattern_rng.uniform() < 0.5 ? -kPatternAmp : kPatternAmp;
            }
        }
    }

    Rng rng(seed);

    std::vector<WindowSample> samples;
    samples.reserve(static_cast<std::size_t>(3 * n_per_class));
    const Date base = Date::from_ymd(2000, 1, 1);
    for (int i = 0; i < 3 * n_per_class; ++i) {
        const int cls = i % 3;
        WindowSample s;
        s.machine_id = "planted";
        s.end_date = base + i;
        s.label = cls;
        s.x.resize(lookback, features);
        for (int t = 0; t < lookback; ++t) {
            for (int f = 0; f < features; ++f) {
                s.x(t, f) = 0.5 + patterns[static_cast<std::size_t>(cls)](t, f) +
                            kNoiseStd * rng.normal();
            }
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace mineroi::synth
