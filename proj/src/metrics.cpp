#include "mineroi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "mineroi/error.hpp"

namespace mineroi {

long ConfusionMatrix::total() const {
    long n = 0;
    for (const auto& row : counts) {
        for (long v : row) n += v;
    }
    return n;
}

long ConfusionMatrix::diagonal() const {
    return counts[0][0] + counts[1][1] + counts[2][2];
}

long ConfusionMatrix::row_total(int c) const {
    const auto& row = counts[static_cast<std::size_t>(c)];
    return row[0] + row[1] + row[2];
}

long ConfusionMatrix::col_total(int c) const {
    return counts[0][static_cast<std::size_t>(c)] + counts[1][static_cast<std::size_t>(c)] +
           counts[2][static_cast<std::size_t>(c)];
}

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size()) throw LogicError("confusion: length mismatch");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || truth[i] > 2 || predicted[i] < 0 || predicted[i] > 2) {
            throw DomainError("confusion: label outside {0,1,2} at index " + std::to_string(i));
        }
        ++cm.counts[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
    }
    return cm;
}

MetricsSummary metrics(const ConfusionMatrix& cm) {
    const long n = cm.total();
    if (n == 0) throw DomainError("metrics: empty confusion matrix");

    MetricsSummary out;
    out.accuracy = static_cast<double>(cm.diagonal()) / static_cast<double>(n);

    for (int c = 0; c < 3; ++c) {
        const long tp = cm.counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        const long tpfp = cm.col_total(c);
        const long tpfn = cm.row_total(c);
        auto& m = out.per_class[static_cast<std::size_t>(c)];
        if (tpfp == 0) {
            m.precision = 0.0;
            m.degenerate = true;
        } else {
            m.precision = static_cast<double>(tp) / static_cast<double>(tpfp);
        }
        if (tpfn == 0) {
            m.recall = 0.0;
            m.degenerate = true;
        } else {
            m.recall = static_cast<double>(tp) / static_cast<double>(tpfn);
        }
        if (m.precision + m.recall == 0.0) {
            m.f1 = 0.0;
        } else {
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        }
        out.macro_precision += m.precision / 3.0;
        out.macro_recall += m.recall / 3.0;
        out.macro_f1 += m.f1 / 3.0;
    }
    return out;
}

AucResult auc_ovr(const Eigen::MatrixXd& probs, const std::vector<int>& truth,
                  bool allow_degenerate) {
    if (probs.rows() != static_cast<Eigen::Index>(truth.size()) || probs.cols() != 3) {
        throw LogicError("auc_ovr: shape mismatch");
    }
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        if (std::abs(probs.row(i).sum() - 1.0) > 1e-6) {
            throw DomainError("auc_ovr: probability row " + std::to_string(i) + " does not sum to 1");
        }
    }

    AucResult result;
    int defined = 0;
    for (int c = 0; c < 3; ++c) {
        long positives = 0;
        for (int y : truth) positives += (y == c) ? 1 : 0;
        const long negatives = static_cast<long>(truth.size()) - positives;
        if (positives == 0 || negatives == 0) {
            if (!allow_degenerate) {
                throw DomainError("auc_ovr: class " + std::to_string(c) +
                                  " has no positive or no negative samples");
            }
            result.degenerate[static_cast<std::size_t>(c)] = true;
            continue;
        }

        // midrank formulation; ties contribute 1/2 per pair
        std::vector<std::size_t> order(truth.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return probs(static_cast<Eigen::Index>(a), c) < probs(static_cast<Eigen::Index>(b), c);
        });

        double rank_sum_pos = 0.0;
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() &&
                   probs(static_cast<Eigen::Index>(order[j + 1]), c) ==
                       probs(static_cast<Eigen::Index>(order[i]), c)) {
                ++j;
            }
            // 1-based midrank of the tie group [i, j]
            const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t k = i; k <= j; ++k) {
                if (truth[order[k]] == c) rank_sum_pos += midrank;
            }
            i = j + 1;
        }

        const double p = static_cast<double>(positives);
        const double q = static_cast<double>(negatives);
        result.per_class[static_cast<std::size_t>(c)] = (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * q);
        ++defined;
    }
    double macro = 0.0;
    for (int c = 0; c < 3; ++c) macro += result.per_class[static_cast<std::size_t>(c)];
    result.macro = macro / 3.0;
    (void)defined;
    return result;
}

EvalReport evaluate_predictions(const std::vector<int>& truth, const Eigen::MatrixXd& probs,
                                std::uint64_t seed) {
    std::vector<int> preds(truth.size());
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        int arg = 0;
        probs.row(i).maxCoeff(&arg);
        preds[static_cast<std::size_t>(i)] = arg;
    }
    EvalReport report;
    report.seed = seed;
    report.cm = confusion(truth, preds);
    report.summary = metrics(report.cm);
    report.auc = auc_ovr(probs, truth, /*allow_degenerate=*/true);
    return report;
}

MeanStd mean_std(const std::vector<double>& values) {
    if (values.size() < 2) throw DomainError("mean_std: need at least 2 values");
    // centered on the first value so identical inputs give exactly std 0
    const double anchor = values.front();
    double shift_sum = 0.0;
    for (double v : values) shift_sum += v - anchor;
    MeanStd out;
    out.mean = anchor + shift_sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return out;
}

AggregateReport aggregate_seeds(const std::vector<EvalReport>& reports) {
    if (reports.size() < 2) throw DomainError("aggregate_seeds: need at least 2 reports");
    auto collect = [&](auto getter) {
        std::vector<double> v;
        v.reserve(reports.size());
        for (const auto& r : reports) v.push_back(getter(r));
        return mean_std(v);
    };

    AggregateReport agg;
    agg.accuracy = collect([](const EvalReport& r) { return r.summary.accuracy; });
    agg.macro_precision = collect([](const EvalReport& r) { return r.summary.macro_precision; });
    agg.macro_recall = collect([](const EvalReport& r) { return r.summary.macro_recall; });
    agg.macro_f1 = collect([](const EvalReport& r) { return r.summary.macro_f1; });
    agg.macro_auc = collect([](const EvalReport& r) { return r.auc.macro; });
    for (int c = 0; c < 3; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        agg.precision[ci] = collect([=](const EvalReport& r) { return r.summary.per_class[ci].precision; });
        agg.recall[ci] = collect([=](const EvalReport& r) { return r.summary.per_class[ci].recall; });
        agg.f1[ci] = collect([=](const EvalReport& r) { return r.summary.per_class[ci].f1; });
        agg.auc[ci] = collect([=](const EvalReport& r) { return r.auc.per_class[ci]; });
    }
    return agg;
}

std::string format_metric(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<std::string> report_csv_header() {
    return {"split", "seed",   "accuracy", "macro_f1", "prec_0", "prec_1", "prec_2", "rec_0",
            "rec_1", "rec_2",  "f1_0",     "f1_1",     "f1_2",   "auc_0",  "auc_1",  "auc_2"};
}

std::vector<std::string> report_csv_row(const std::string& split, const EvalReport& r) {
    std::vector<std::string> row = {split, std::to_string(r.seed),
                                    format_metric(r.summary.accuracy),
                                    format_metric(r.summary.macro_f1)};
    for (int c = 0; c < 3; ++c) {
        row.push_back(format_metric(r.summary.per_class[static_cast<std::size_t>(c)].precision));
    }
    for (int c = 0; c < 3; ++c) {
        row.push_back(format_metric(r.summary.per_class[static_cast<std::size_t>(c)].recall));
    }
    for (int c = 0; c < 3; ++c) {
        row.push_back(format_metric(r.summary.per_class[static_cast<std::size_t>(c)].f1));
    }
    for (int c = 0; c < 3; ++c) {
        row.push_back(format_metric(r.auc.per_class[static_cast<std::size_t>(c)]));
    }
    return row;
}

std::string confusion_csv_block(const ConfusionMatrix& cm) {
    std::string out;
    for (int t = 0; t < 3; ++t) {
        for (int p = 0; p < 3; ++p) {
            if (p) out += ',';
            out += std::to_string(cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace mineroi
