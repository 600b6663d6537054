#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mineroi/market.hpp"

namespace mineroi {

constexpr int kFeatureCount = 14;

// Canonical feature order. `daily_revenue_potential` is the machine's daily
// proportional revenue minus its daily energy cost, both at the row's date.
extern const std::array<const char*, kFeatureCount> kCanonicalFeatureNames;

// A (possibly reordered) permutation of the canonical feature names.
class FeatureOrder {
public:
    static FeatureOrder canonical();
    // Validates that `names` is a permutation of the canonical set.
    static FeatureOrder from_names(const std::vector<std::string>& names);

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    int index_of(const std::string& name) const;  // throws ConfigError when absent
    // canonical-array index of the feature emitted at position i
    int canonical_index(int i) const { return canonical_idx_[static_cast<std::size_t>(i)]; }

private:
    std::vector<std::string> names_;
    std::vector<int> canonical_idx_;
};

struct FeatureRow {
    std::string machine_id;
    Date date;
    Eigen::VectorXd features;  // length kFeatureCount, finite
};

// L consecutive daily feature rows ending at end_date, plus the ROI class of
// a purchase made on end_date. The matrix is raw (unnormalized); scaling is
// applied per split from its own training data.
struct WindowSample {
    std::string machine_id;
    Date end_date;
    Eigen::MatrixXd x;  // L x F, rows oldest -> newest
    int label = 0;
};

// Per-feature min-max scaler. transform maps x -> (x - min) / (max - min);
// constant features (min == max) map to 0. Values outside the fitted range
// are not clamped.
class Scaler {
public:
    Scaler() = default;
    Scaler(Eigen::VectorXd min, Eigen::VectorXd max);

    static Scaler fit(const std::vector<FeatureRow>& rows);
    // Fits over every row of every window.
    static Scaler fit_windows(const std::vector<WindowSample>& samples);

    Eigen::VectorXd transform(const Eigen::VectorXd& row) const;
    Eigen::MatrixXd transform_window(const Eigen::MatrixXd& x) const;

    const Eigen::VectorXd& min() const { return min_; }
    const Eigen::VectorXd& max() const { return max_; }

private:
    Eigen::VectorXd min_, max_;
};

struct SplitSpec {
    std::string name;
    DateRange train;
    DateRange eval;
};

// Expanding-window split calendar: nested train ranges, each strictly before
// its evaluation range, and a final test range after all training data.
// Membership is decided by a sample's end date under half-open intervals.
struct SplitPlan {
    std::vector<SplitSpec> splits;
    DateRange final_train;
    DateRange final_test;

    void validate() const;  // throws ConfigError
};

// Raw labeled samples with access accounting. Range queries touch only the
// end-date metadata; get() counts as reading the sample's contents, which is
// what the no-test-set-peeking assertion audits.
class SampleStore {
public:
    SampleStore() = default;
    explicit SampleStore(std::vector<WindowSample> samples);

    std::size_t size() const { return samples_.size(); }
    Date end_date(std::size_t i) const { return samples_[i].end_date; }
    std::vector<std::size_t> indices_in(const DateRange& range) const;

    const WindowSample& get(std::size_t i) const;
    std::uint64_t access_count(std::size_t i) const { return counts_[i]; }

private:
    std::vector<WindowSample> samples_;
    mutable std::vector<std::uint64_t> counts_;
};

// One split's materialized data: normalized copies of train/eval samples plus
// the scaler and class weights fitted on the train set only.
struct SplitData {
    std::string name;
    DateRange train_range;
    DateRange eval_range;
    std::vector<WindowSample> train;
    std::vector<WindowSample> eval;
    Scaler scaler;
    Eigen::Vector3d class_weights;
};

// w_c = N / (3 * n_c). Every class must be present.
Eigen::Vector3d class_weights(const std::vector<int>& labels);

struct IngestPaths {
    std::vector<std::filesystem::path> machine_price_csvs;
    std::filesystem::path machine_spec_csv;
    std::filesystem::path chain_csv;
    std::filesystem::path energy_csv;
};

struct IngestResult {
    std::vector<MachineSpec> machines;
    MarketSeries market;
    std::vector<std::string> warnings;
};

// Reads the three CSV sources. Chain and energy series are forward-filled
// over gaps of at most 7 days (with a warning); longer gaps are coverage
// errors. Machine prices are interpolated linearly between quotes, never
// extrapolated.
IngestResult ingest(const IngestPaths& paths);

FeatureRow feature_row(const MachineSpec& machine, const MarketDay& day, const std::string& region,
                       const std::vector<Date>& halving_dates, const FeatureOrder& order);

// All feature rows for one machine: consecutive days where the machine has a
// price, the market covers the day, and the region has a rate.
std::vector<FeatureRow> machine_feature_rows(const MachineSpec& machine, const MarketSeries& market,
                                             const std::string& region,
                                             const std::vector<Date>& halving_dates,
                                             const FeatureOrder& order);

// One sample per end date d where the window's L days and the label's
// `horizon` future days all lie inside the machine's row span. Machines with
// insufficient span yield zero samples.
std::vector<WindowSample> make_windows(const std::vector<FeatureRow>& rows, int lookback,
                                       int horizon, const MachineSpec& machine,
                                       const MarketSeries& market, const std::string& region);

std::vector<SplitData> build_splits(const SampleStore& store, const SplitPlan& plan);

// Same construction for the final train/test ranges.
SplitData build_final_split(const SampleStore& store, const SplitPlan& plan);

}  // namespace mineroi
