#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mineroi {

// 3x3 counts, rows = true class, columns = predicted class.
struct ConfusionMatrix {
    std::array<std::array<long, 3>, 3> counts{};

    long total() const;
    long diagonal() const;
    long row_total(int c) const;  // true-class totals
    long col_total(int c) const;  // predicted-class totals
};

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted);

// Per-class precision/recall/F1 with 0/0 fractions reported as 0 and flagged.
struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool degenerate = false;  // some 0/0 fraction was involved
};

struct MetricsSummary {
    double accuracy = 0.0;
    std::array<ClassMetrics, 3> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
};

MetricsSummary metrics(const ConfusionMatrix& cm);  // throws on an empty matrix

// One-vs-rest AUC per class from per-sample probability rows, rank-based with
// midranks on ties. A class with no positives or no negatives has no defined
// AUC: with allow_degenerate it is reported as 0 and flagged, otherwise it is
// an error.
struct AucResult {
    std::array<double, 3> per_class{};
    std::array<bool, 3> degenerate{};
    double macro = 0.0;
};

AucResult auc_ovr(const Eigen::MatrixXd& probs, const std::vector<int>& truth,
                  bool allow_degenerate = false);

struct EvalReport {
    std::uint64_t seed = 0;
    ConfusionMatrix cm;
    MetricsSummary summary;
    AucResult auc;
};

// Builds the full report from truth and probability rows (argmax predictions).
EvalReport evaluate_predictions(const std::vector<int>& truth, const Eigen::MatrixXd& probs,
                                std::uint64_t seed);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // sample (n-1) standard deviation
};

MeanStd mean_std(const std::vector<double>& values);  // needs >= 2 values

// Mean +- std per metric over seed runs (needs >= 2 reports).
struct AggregateReport {
    MeanStd accuracy;
    MeanStd macro_precision, macro_recall, macro_f1, macro_auc;
    std::array<MeanStd, 3> precision, recall, f1, auc;
};

AggregateReport aggregate_seeds(const std::vector<EvalReport>& reports);

// Report serialization helpers (fixed column layout).
std::vector<std::string> report_csv_header();
std::vector<std::string> report_csv_row(const std::string& split, const EvalReport& report);
std::string confusion_csv_block(const ConfusionMatrix& cm);
std::string format_metric(double v);

}  // namespace mineroi
