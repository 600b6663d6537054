#include "mineroi/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mineroi/csv.hpp"
#include "mineroi/error.hpp"
#include "mineroi/roi.hpp"

namespace mineroi {

const std::array<const char*, kFeatureCount> kCanonicalFeatureNames = {
    "hashrate",        "power",         "efficiency",       "days_since_release",
    "machine_price",   "btc_price",     "difficulty",       "network_hashrate",
    "network_revenue", "block_reward",  "transaction_fees", "electricity_rate",
    "days_since_halving", "daily_revenue_potential",
};

FeatureOrder FeatureOrder::canonical() {
    FeatureOrder o;
    o.names_.assign(kCanonicalFeatureNames.begin(), kCanonicalFeatureNames.end());
    o.canonical_idx_.resize(kFeatureCount);
    for (int i = 0; i < kFeatureCount; ++i) o.canonical_idx_[static_cast<std::size_t>(i)] = i;
    return o;
}

FeatureOrder FeatureOrder::from_names(const std::vector<std::string>& names) {
    std::set<std::string> canonical(kCanonicalFeatureNames.begin(), kCanonicalFeatureNames.end());
    std::set<std::string> given(names.begin(), names.end());
    if (names.size() != kFeatureCount || given != canonical) {
        throw ConfigError("feature order must be a permutation of the " +
                          std::to_string(kFeatureCount) + " canonical feature names");
    }
    FeatureOrder o;
    o.names_ = names;
    for (const auto& name : names) {
        for (int j = 0; j < kFeatureCount; ++j) {
            if (name == kCanonicalFeatureNames[static_cast<std::size_t>(j)]) {
                o.canonical_idx_.push_back(j);
                break;
            }
        }
    }
    return o;
}

int FeatureOrder::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return static_cast<int>(i);
    }
    throw ConfigError("unknown feature name '" + name + "'");
}

Scaler::Scaler(Eigen::VectorXd min, Eigen::VectorXd max) : min_(std::move(min)), max_(std::move(max)) {
    if (min_.size() != max_.size()) throw LogicError("scaler min/max size mismatch");
    for (Eigen::Index i = 0; i < min_.size(); ++i) {
        if (min_[i] > max_[i]) throw LogicError("scaler min > max at feature " + std::to_string(i));
    }
}

Scaler Scaler::fit(const std::vector<FeatureRow>& rows) {
    if (rows.empty()) throw InputError("fit_scaler: empty training set");
    Eigen::VectorXd mn = rows.front().features;
    Eigen::VectorXd mx = rows.front().features;
    for (const auto& r : rows) {
        mn = mn.cwiseMin(r.features);
        mx = mx.cwiseMax(r.features);
    }
    return Scaler(std::move(mn), std::move(mx));
}

Scaler Scaler::fit_windows(const std::vector<WindowSample>& samples) {
    if (samples.empty()) throw InputError("fit_scaler: empty training set");
    Eigen::VectorXd mn = samples.front().x.colwise().minCoeff();
    Eigen::VectorXd mx = samples.front().x.colwise().maxCoeff();
    for (const auto& s : samples) {
        mn = mn.cwiseMin(s.x.colwise().minCoeff().transpose());
        mx = mx.cwiseMax(s.x.colwise().maxCoeff().transpose());
    }
    return Scaler(std::move(mn), std::move(mx));
}

Eigen::VectorXd Scaler::transform(const Eigen::VectorXd& row) const {
    if (row.size() != min_.size()) throw LogicError("scaler: feature count mismatch");
    Eigen::VectorXd out(row.size());
    for (Eigen::Index i = 0; i < row.size(); ++i) {
        const double span = max_[i] - min_[i];
        out[i] = span == 0.0 ? 0.0 : (row[i] - min_[i]) / span;
    }
    return out;
}

Eigen::MatrixXd Scaler::transform_window(const Eigen::MatrixXd& x) const {
    if (x.cols() != min_.size()) throw LogicError("scaler: feature count mismatch");
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double span = max_[j] - min_[j];
        if (span == 0.0) {
            out.col(j).setZero();
        } else {
            out.col(j) = (x.col(j).array() - min_[j]) / span;
        }
    }
    return out;
}

void SplitPlan::validate() const {
    for (const auto& s : splits) {
        if (s.train.end <= s.train.start || s.eval.end <= s.eval.start) {
            throw ConfigError("split '" + s.name + "': empty range");
        }
        if (s.train.end > s.eval.start) {
            throw ConfigError("split '" + s.name + "': train range must precede its eval range");
        }
    }
    for (std::size_t i = 1; i < splits.size(); ++i) {
        const auto& prev = splits[i - 1].train;
        const auto& cur = splits[i].train;
        if (cur.start > prev.start || cur.end < prev.end) {
            throw ConfigError("split '" + splits[i].name +
                              "': train ranges must expand (nest) over split '" + splits[i - 1].name + "'");
        }
    }
    if (final_test.end <= final_test.start || final_train.end <= final_train.start) {
        throw ConfigError("final train/test ranges must be non-empty");
    }
    if (final_train.end > final_test.start) {
        throw ConfigError("final test range must start at or after the final training range ends");
    }
    for (const auto& s : splits) {
        if (s.train.end > final_test.start) {
            throw ConfigError("final test range overlaps training data of split '" + s.name + "'");
        }
    }
}

SampleStore::SampleStore(std::vector<WindowSample> samples)
    : samples_(std::move(samples)), counts_(samples_.size(), 0) {}

std::vector<std::size_t> SampleStore::indices_in(const DateRange& range) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (range.contains(samples_[i].end_date)) out.push_back(i);
    }
    return out;
}

const WindowSample& SampleStore::get(std::size_t i) const {
    ++counts_[i];
    return samples_[i];
}

Eigen::Vector3d class_weights(const std::vector<int>& labels) {
    std::array<long, 3> counts = {0, 0, 0};
    for (int y : labels) {
        if (y < 0 || y > 2) throw DomainError("class_weights: label outside {0,1,2}");
        ++counts[static_cast<std::size_t>(y)];
    }
    Eigen::Vector3d w;
    const double n = static_cast<double>(labels.size());
    for (int c = 0; c < 3; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
            throw InputError("class_weights: class " + std::to_string(c) +
                             " has no samples; audit the labels or the split calendar");
        }
        w[c] = n / (3.0 * static_cast<double>(counts[static_cast<std::size_t>(c)]));
    }
    return w;
}

namespace {

// Fills gaps of at most `max_gap` days by repeating the previous value.
// Returns one value per day of [dates.front(), dates.back()].
template <typename T>
std::vector<T> forward_fill(const std::vector<Date>& dates, const std::vector<T>& values,
                            int max_gap, const std::string& what,
                            std::vector<std::string>& warnings) {
    std::vector<T> out;
    out.push_back(values.front());
    for (std::size_t i = 1; i < dates.size(); ++i) {
        const int gap = dates[i] - dates[i - 1] - 1;
        if (gap > max_gap) {
            throw CoverageError(what + ": gap of " + std::to_string(gap) + " days after " +
                                dates[i - 1].to_string());
        }
        if (gap > 0) {
            warnings.push_back(what + ": forward-filled " + std::to_string(gap) + " day(s) after " +
                               dates[i - 1].to_string());
            for (int k = 0; k < gap; ++k) out.push_back(values[i - 1]);
        }
        out.push_back(values[i]);
    }
    return out;
}

constexpr int kMaxFillGapDays = 7;

}  // namespace

IngestResult ingest(const IngestPaths& paths) {
    IngestResult result;

    // --- machine specs ---
    CsvTable specs = read_csv(paths.machine_spec_csv);
    require_columns(specs, {"machine_id", "hashrate_ths", "power_w", "efficiency_jth", "release_date"});
    std::map<std::string, MachineSpec> machines;
    std::vector<std::string> machine_order;
    for (std::size_t i = 0; i < specs.rows.size(); ++i) {
        MachineSpec m;
        m.id = specs.rows[i][0];
        m.hashrate_ths = parse_double_field(specs, i, 1);
        m.power_w = parse_double_field(specs, i, 2);
        m.efficiency_jth = parse_double_field(specs, i, 3);
        m.release_date = parse_date_field(specs, i, 4);
        if (machines.count(m.id)) {
            throw InputError(paths.machine_spec_csv.string() + ": duplicate machine_id '" + m.id + "'");
        }
        machines[m.id] = std::move(m);
        machine_order.push_back(specs.rows[i][0]);
    }

    // --- machine prices (sparse quotes, interpolated to daily) ---
    std::map<std::string, std::map<Date, double>> quotes;
    for (const auto& path : paths.machine_price_csvs) {
        CsvTable prices = read_csv(path);
        require_columns(prices, {"machine_id", "date", "price_usd"});
        for (std::size_t i = 0; i < prices.rows.size(); ++i) {
            const std::string& id = prices.rows[i][0];
            if (!machines.count(id)) {
                throw InputError(path.string() + ":" + std::to_string(prices.line_numbers[i]) +
                                 ": price row for unknown machine '" + id + "'");
            }
            const Date d = parse_date_field(prices, i, 1);
            const double p = parse_double_field(prices, i, 2);
            if (!(p > 0.0)) {
                throw InputError(path.string() + ":" + std::to_string(prices.line_numbers[i]) +
                                 ": non-positive price for '" + id + "'");
            }
            quotes[id][d] = p;
        }
    }
    for (const auto& id : machine_order) {
        auto& m = machines[id];
        auto it = quotes.find(id);
        if (it == quotes.end() || it->second.empty()) {
            result.warnings.push_back("machine " + id + ": no price quotes; it will yield no samples");
            continue;
        }
        // linear interpolation between consecutive quotes, no extrapolation
        const auto& q = it->second;
        auto prev = q.begin();
        m.price_series[prev->first] = prev->second;
        for (auto cur = std::next(q.begin()); cur != q.end(); ++cur) {
            const int span = cur->first - prev->first;
            for (int k = 1; k < span; ++k) {
                const double t = static_cast<double>(k) / span;
                m.price_series[prev->first + k] = prev->second + t * (cur->second - prev->second);
            }
            m.price_series[cur->first] = cur->second;
            prev = cur;
        }
        const std::string warning = m.validate();
        if (!warning.empty()) result.warnings.push_back(warning);
    }

    // --- chain series ---
    CsvTable chain = read_csv(paths.chain_csv);
    require_columns(chain, {"date", "btc_price_usd", "difficulty", "network_hashrate_ths",
                            "network_revenue_usd", "block_reward_btc", "transaction_fees_btc"});
    std::vector<Date> chain_dates;
    std::vector<MarketDay> chain_days;
    for (std::size_t i = 0; i < chain.rows.size(); ++i) {
        MarketDay day;
        day.date = parse_date_field(chain, i, 0);
        day.btc_price_usd = parse_double_field(chain, i, 1);
        day.difficulty = parse_double_field(chain, i, 2);
        day.network_hashrate_ths = parse_double_field(chain, i, 3);
        day.network_revenue_usd = parse_double_field(chain, i, 4);
        day.block_reward_btc = parse_double_field(chain, i, 5);
        day.transaction_fees_btc = parse_double_field(chain, i, 6);
        chain_dates.push_back(day.date);
        chain_days.push_back(std::move(day));
    }
    if (chain_days.empty()) throw InputError(paths.chain_csv.string() + ": no data rows");
    if (!std::is_sorted(chain_dates.begin(), chain_dates.end())) {
        throw InputError(paths.chain_csv.string() + ": rows must be sorted by date");
    }
    if (std::adjacent_find(chain_dates.begin(), chain_dates.end()) != chain_dates.end()) {
        throw InputError(paths.chain_csv.string() + ": duplicate dates");
    }
    std::vector<MarketDay> filled = forward_fill(chain_dates, chain_days, kMaxFillGapDays,
                                                 "chain series", result.warnings);
    for (std::size_t i = 0; i < filled.size(); ++i) {
        filled[i].date = chain_dates.front() + static_cast<int>(i);
    }

    // --- energy series, one per region ---
    CsvTable energy = read_csv(paths.energy_csv);
    require_columns(energy, {"date", "region", "rate_usd_per_kwh"});
    std::map<std::string, std::map<Date, double>> region_rates;
    for (std::size_t i = 0; i < energy.rows.size(); ++i) {
        const Date d = parse_date_field(energy, i, 0);
        const std::string& region = energy.rows[i][1];
        const double rate = parse_double_field(energy, i, 2);
        if (rate < 0.0) {
            throw InputError(paths.energy_csv.string() + ":" + std::to_string(energy.line_numbers[i]) +
                             ": negative electricity rate");
        }
        region_rates[region][d] = rate;
    }
    for (const auto& [region, series] : region_rates) {
        std::vector<Date> dates;
        std::vector<double> rates;
        for (const auto& [d, r] : series) {
            dates.push_back(d);
            rates.push_back(r);
        }
        std::vector<double> daily = forward_fill(dates, rates, kMaxFillGapDays,
                                                 "energy series (" + region + ")", result.warnings);
        for (std::size_t i = 0; i < daily.size(); ++i) {
            const Date d = dates.front() + static_cast<int>(i);
            if (d < chain_dates.front() || d > chain_dates.back()) continue;
            filled[static_cast<std::size_t>(d - chain_dates.front())].electricity_rates[region] = daily[i];
        }
    }

    for (const auto& day : filled) day.validate();
    result.market = MarketSeries(std::move(filled));
    for (const auto& id : machine_order) result.machines.push_back(std::move(machines[id]));
    return result;
}

FeatureRow feature_row(const MachineSpec& machine, const MarketDay& day, const std::string& region,
                       const std::vector<Date>& halving_dates, const FeatureOrder& order) {
    if (day.date < machine.release_date) {
        throw PreconditionError("feature_row: " + day.date.to_string() + " precedes release of " +
                                machine.id);
    }
    const double price = machine.price_at(day.date);
    const double rate = day.rate_for(region);
    const double revenue = daily_machine_revenue(machine.hashrate_ths, day.network_hashrate_ths,
                                                 day.network_revenue_usd);
    const double cost = daily_energy_cost(machine.power_w, rate);

    std::array<double, kFeatureCount> canonical = {
        machine.hashrate_ths,
        machine.power_w,
        machine.efficiency_jth,
        static_cast<double>(day.date - machine.release_date),
        price,
        day.btc_price_usd,
        day.difficulty,
        day.network_hashrate_ths,
        day.network_revenue_usd,
        day.block_reward_btc,
        day.transaction_fees_btc,
        rate,
        static_cast<double>(days_since_halving(day.date, halving_dates)),
        revenue - cost,
    };

    FeatureRow row;
    row.machine_id = machine.id;
    row.date = day.date;
    row.features.resize(kFeatureCount);
    for (int i = 0; i < kFeatureCount; ++i) {
        row.features[i] = canonical[static_cast<std::size_t>(order.canonical_index(i))];
        if (!std::isfinite(row.features[i])) {
            throw DomainError("feature_row: non-finite feature '" + order.names()[static_cast<std::size_t>(i)] +
                              "' for " + machine.id + " at " + day.date.to_string());
        }
    }
    return row;
}

std::vector<FeatureRow> machine_feature_rows(const MachineSpec& machine, const MarketSeries& market,
                                             const std::string& region,
                                             const std::vector<Date>& halving_dates,
                                             const FeatureOrder& order) {
    std::vector<FeatureRow> rows;
    if (machine.price_series.empty() || market.empty()) return rows;

    Date start = std::max({machine.price_series.begin()->first, machine.release_date, market.start()});
    const Date last_price = machine.price_series.rbegin()->first;
    // skip leading days where the region has no rate yet
    while (start <= last_price && market.covers(start) &&
           !market.at(start).electricity_rates.count(region)) {
        ++start;
    }
    // one maximal contiguous span; stops at the first day any source is missing
    for (Date d = start; d <= last_price && market.covers(d); ++d) {
        const MarketDay& day = market.at(d);
        if (!day.electricity_rates.count(region)) break;
        rows.push_back(feature_row(machine, day, region, halving_dates, order));
    }
    return rows;
}

std::vector<WindowSample> make_windows(const std::vector<FeatureRow>& rows, int lookback,
                                       int horizon, const MachineSpec& machine,
                                       const MarketSeries& market, const std::string& region) {
    if (lookback < 1) throw ConfigError("make_windows: lookback must be >= 1");
    if (horizon < 1) throw ConfigError("make_windows: horizon must be >= 1");

    std::vector<WindowSample> samples;
    const int n = static_cast<int>(rows.size());
    if (n < lookback + horizon) return samples;

    for (int i = 1; i < n; ++i) {
        if (rows[static_cast<std::size_t>(i)].date - rows[static_cast<std::size_t>(i - 1)].date != 1) {
            throw LogicError("make_windows: rows are not contiguous for machine " + machine.id);
        }
    }

    const int features = static_cast<int>(rows.front().features.size());
    // last end index such that the horizon stays inside the row span
    for (int end = lookback - 1; end + horizon <= n; ++end) {
        WindowSample s;
        s.machine_id = machine.id;
        s.end_date = rows[static_cast<std::size_t>(end)].date;
        s.x.resize(lookback, features);
        for (int t = 0; t < lookback; ++t) {
            s.x.row(t) = rows[static_cast<std::size_t>(end - lookback + 1 + t)].features.transpose();
        }
        s.label = roi(machine, s.end_date, horizon, market, region).label;
        samples.push_back(std::move(s));
    }
    return samples;
}

namespace {

SplitData materialize_split(const SampleStore& store, const std::string& name,
                            const DateRange& train_range, const DateRange& eval_range) {
    SplitData data;
    data.name = name;
    data.train_range = train_range;
    data.eval_range = eval_range;

    std::vector<WindowSample> raw_train;
    for (std::size_t i : store.indices_in(train_range)) raw_train.push_back(store.get(i));
    std::vector<WindowSample> raw_eval;
    for (std::size_t i : store.indices_in(eval_range)) raw_eval.push_back(store.get(i));

    if (raw_train.empty()) throw InputError("split '" + name + "': empty training set");
    if (raw_eval.empty()) throw InputError("split '" + name + "': empty evaluation set");

    data.scaler = Scaler::fit_windows(raw_train);
    std::vector<int> labels;
    for (const auto& s : raw_train) labels.push_back(s.label);
    data.class_weights = class_weights(labels);

    auto normalize = [&](std::vector<WindowSample>& dst, std::vector<WindowSample>& src) {
        dst.reserve(src.size());
        for (auto& s : src) {
            WindowSample t = std::move(s);
            t.x = data.scaler.transform_window(t.x);
            dst.push_back(std::move(t));
        }
    };
    normalize(data.train, raw_train);
    normalize(data.eval, raw_eval);
    return data;
}

}  // namespace

std::vector<SplitData> build_splits(const SampleStore& store, const SplitPlan& plan) {
    plan.validate();
    std::vector<SplitData> out;
    out.reserve(plan.splits.size());
    for (const auto& spec : plan.splits) {
        out.push_back(materialize_split(store, spec.name, spec.train, spec.eval));
    }
    return out;
}

SplitData build_final_split(const SampleStore& store, const SplitPlan& plan) {
    plan.validate();
    return materialize_split(store, "final", plan.final_train, plan.final_test);
}

}  // namespace mineroi
