#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mineroi/error.hpp"
#include "mineroi/metrics.hpp"
#include "mineroi/oracles.hpp"
#include "mineroi/rng.hpp"

using namespace mineroi;

namespace {

std::vector<int> random_labels(std::size_t n, Rng& rng) {
    std::vector<int> out(n);
    for (auto& v : out) v = static_cast<int>(rng.below(3));
    return out;
}

Eigen::MatrixXd random_probs(std::size_t n, Rng& rng, int decimals = -1) {
    Eigen::MatrixXd probs(static_cast<Eigen::Index>(n), 3);
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        double a = rng.uniform(0.01, 1.0);
        double b = rng.uniform(0.01, 1.0);
        double c = rng.uniform(0.01, 1.0);
        if (decimals > 0) {
            // coarse grid to force ties
            const double q = std::pow(10.0, decimals);
            a = std::round(a * q) / q + 0.001;
            b = std::round(b * q) / q + 0.001;
            c = std::round(c * q) / q + 0.001;
        }
        const double s = a + b + c;
        probs.row(i) << a / s, b / s, c / s;
    }
    return probs;
}

}  // namespace

TEST_CASE("confusion matrix") {
    SUBCASE("perfect predictions are diagonal") {
        const std::vector<int> y = {0, 1, 2, 0, 1, 2, 2};
        const ConfusionMatrix cm = confusion(y, y);
        CHECK(cm.diagonal() == 7);
        CHECK(cm.total() == 7);
    }
    SUBCASE("constant prediction fills a single column") {
        const std::vector<int> truth = {0, 1, 2, 0, 2};
        const std::vector<int> pred(5, 1);
        const ConfusionMatrix cm = confusion(truth, pred);
        for (int t = 0; t < 3; ++t) {
            CHECK(cm.counts[static_cast<std::size_t>(t)][0] == 0);
            CHECK(cm.counts[static_cast<std::size_t>(t)][2] == 0);
        }
        CHECK(cm.col_total(1) == 5);
    }
    SUBCASE("random fixture matches the naive double-loop count") {
        Rng rng(3);
        const auto truth = random_labels(200, rng);
        const auto pred = random_labels(200, rng);
        const ConfusionMatrix cm = confusion(truth, pred);
        const auto expected = synth::oracle_confusion(truth, pred);
        for (int t = 0; t < 3; ++t) {
            for (int p = 0; p < 3; ++p) {
                CHECK(cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] ==
                      expected[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);
            }
        }
    }
    SUBCASE("labels outside {0,1,2} are rejected") {
        CHECK_THROWS_AS(confusion({0, 3}, {0, 0}), DomainError);
        CHECK_THROWS_AS(confusion({0, 0}, {-1, 0}), DomainError);
    }
}

TEST_CASE("metrics from a confusion matrix") {
    SUBCASE("diagonal matrix: everything is 1") {
        ConfusionMatrix cm;
        cm.counts = {{{5, 0, 0}, {0, 7, 0}, {0, 0, 9}}};
        const MetricsSummary m = metrics(cm);
        CHECK(m.accuracy == 1.0);
        for (int c = 0; c < 3; ++c) {
            CHECK(m.per_class[static_cast<std::size_t>(c)].precision == 1.0);
            CHECK(m.per_class[static_cast<std::size_t>(c)].recall == 1.0);
            CHECK(m.per_class[static_cast<std::size_t>(c)].f1 == 1.0);
        }
        CHECK(m.macro_f1 == 1.0);
    }

    SUBCASE("hand-computed fixture") {
        // truth totals (10,10,10), diagonal (8,9,7)
        ConfusionMatrix cm;
        cm.counts = {{{8, 1, 1}, {0, 9, 1}, {2, 1, 7}}};
        const MetricsSummary m = metrics(cm);
        CHECK(m.accuracy == doctest::Approx(24.0 / 30.0).epsilon(1e-12));
        CHECK(m.per_class[0].precision == doctest::Approx(8.0 / 10.0).epsilon(1e-12));
        CHECK(m.per_class[0].recall == doctest::Approx(8.0 / 10.0).epsilon(1e-12));
        CHECK(m.per_class[1].precision == doctest::Approx(9.0 / 11.0).epsilon(1e-12));
        CHECK(m.per_class[1].recall == doctest::Approx(9.0 / 10.0).epsilon(1e-12));
        CHECK(m.per_class[2].precision == doctest::Approx(7.0 / 9.0).epsilon(1e-12));
        CHECK(m.per_class[2].recall == doctest::Approx(7.0 / 10.0).epsilon(1e-12));
        const double f1_0 = 2.0 * 0.8 * 0.8 / 1.6;
        const double f1_1 = 2.0 * (9.0 / 11.0) * 0.9 / ((9.0 / 11.0) + 0.9);
        const double f1_2 = 2.0 * (7.0 / 9.0) * 0.7 / ((7.0 / 9.0) + 0.7);
        CHECK(m.macro_f1 == doctest::Approx((f1_0 + f1_1 + f1_2) / 3.0).epsilon(1e-12));
    }

    SUBCASE("never-predicted, never-true class: flagged zeros") {
        ConfusionMatrix cm;
        cm.counts = {{{4, 1, 0}, {2, 3, 0}, {0, 0, 0}}};
        const MetricsSummary m = metrics(cm);
        CHECK(m.per_class[2].precision == 0.0);
        CHECK(m.per_class[2].recall == 0.0);
        CHECK(m.per_class[2].f1 == 0.0);
        CHECK(m.per_class[2].degenerate);
        CHECK_FALSE(m.per_class[0].degenerate);
    }

    SUBCASE("accuracy equals trace over total, exactly") {
        Rng rng(17);
        const auto truth = random_labels(137, rng);
        const auto pred = random_labels(137, rng);
        const ConfusionMatrix cm = confusion(truth, pred);
        CHECK(metrics(cm).accuracy ==
              static_cast<double>(cm.diagonal()) / static_cast<double>(cm.total()));
    }

    SUBCASE("macro F1 is invariant to a consistent class permutation") {
        Rng rng(23);
        const auto truth = random_labels(150, rng);
        const auto pred = random_labels(150, rng);
        const int perm[3] = {2, 0, 1};
        std::vector<int> truth_p(truth.size()), pred_p(pred.size());
        for (std::size_t i = 0; i < truth.size(); ++i) {
            truth_p[i] = perm[truth[i]];
            pred_p[i] = perm[pred[i]];
        }
        const double original = metrics(confusion(truth, pred)).macro_f1;
        const double permuted = metrics(confusion(truth_p, pred_p)).macro_f1;
        CHECK(std::abs(original - permuted) < 1e-12);
    }

    SUBCASE("empty matrix is rejected") {
        CHECK_THROWS_AS(metrics(ConfusionMatrix{}), DomainError);
    }
}

TEST_CASE("one-vs-rest AUC") {
    SUBCASE("perfect separation gives 1") {
        Eigen::MatrixXd probs(6, 3);
        probs << 0.8, 0.1, 0.1, 0.7, 0.2, 0.1, 0.9, 0.05, 0.05,
                 0.1, 0.8, 0.1, 0.2, 0.4, 0.4, 0.1, 0.1, 0.8;
        const std::vector<int> truth = {0, 0, 0, 1, 1, 2};
        const AucResult a = auc_ovr(probs, truth);
        CHECK(a.per_class[0] == 1.0);
    }

    SUBCASE("constant scores give 0.5 via the tie rule") {
        Eigen::MatrixXd probs = Eigen::MatrixXd::Constant(10, 3, 1.0 / 3.0);
        Rng rng(5);
        std::vector<int> truth = {0, 1, 2, 0, 1, 2, 0, 1, 2, 0};
        const AucResult a = auc_ovr(probs, truth);
        for (int c = 0; c < 3; ++c) CHECK(a.per_class[static_cast<std::size_t>(c)] == 0.5);
        CHECK(a.macro == 0.5);
    }

    SUBCASE("matches the O(n^2) pairwise oracle exactly, ties included") {
        Rng rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const auto truth = random_labels(50, rng);
            if (std::count(truth.begin(), truth.end(), 0) == 0 ||
                std::count(truth.begin(), truth.end(), 1) == 0 ||
                std::count(truth.begin(), truth.end(), 2) == 0) {
                continue;
            }
            // decimals=1 forces plenty of exact ties
            const Eigen::MatrixXd probs = random_probs(50, rng, trial % 2 ? 1 : -1);
            const AucResult a = auc_ovr(probs, truth);
            for (int c = 0; c < 3; ++c) {
                std::vector<double> scores(truth.size());
                for (std::size_t i = 0; i < truth.size(); ++i) {
                    scores[i] = probs(static_cast<Eigen::Index>(i), c);
                }
                CHECK(a.per_class[static_cast<std::size_t>(c)] ==
                      synth::oracle_auc_pairwise(scores, truth, c));
            }
        }
    }

    SUBCASE("AUC is invariant to strictly monotone score transforms (oracle route)") {
        Rng rng(11);
        const auto truth = random_labels(40, rng);
        std::vector<double> scores(truth.size());
        for (auto& s : scores) s = rng.uniform(0.0, 1.0);
        const double base = synth::oracle_auc_pairwise(scores, truth, 0);
        std::vector<double> squashed(scores.size()), scaled(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) {
            squashed[i] = 1.0 / (1.0 + std::exp(-6.0 * scores[i]));
            scaled[i] = 100.0 * scores[i] - 3.0;
        }
        CHECK(synth::oracle_auc_pairwise(squashed, truth, 0) == base);
        CHECK(synth::oracle_auc_pairwise(scaled, truth, 0) == base);
    }

    SUBCASE("single-class truth: error unless degenerate values are allowed") {
        Eigen::MatrixXd probs = Eigen::MatrixXd::Constant(4, 3, 1.0 / 3.0);
        const std::vector<int> truth = {1, 1, 1, 1};
        CHECK_THROWS_AS(auc_ovr(probs, truth), DomainError);
        const AucResult a = auc_ovr(probs, truth, /*allow_degenerate=*/true);
        CHECK(a.degenerate[0]);
        CHECK(a.degenerate[1]);
        CHECK(a.degenerate[2]);
    }

    SUBCASE("rows must sum to 1") {
        Eigen::MatrixXd probs = Eigen::MatrixXd::Constant(3, 3, 0.5);
        CHECK_THROWS_AS(auc_ovr(probs, {0, 1, 2}), DomainError);
    }
}

TEST_CASE("seed aggregation") {
    auto make_report = [](double acc, double f1) {
        EvalReport r;
        r.summary.accuracy = acc;
        r.summary.macro_f1 = f1;
        return r;
    };

    SUBCASE("identical reports aggregate to std 0") {
        const std::vector<EvalReport> rs = {make_report(0.7, 0.6), make_report(0.7, 0.6),
                                            make_report(0.7, 0.6)};
        const AggregateReport agg = aggregate_seeds(rs);
        CHECK(agg.accuracy.mean == doctest::Approx(0.7).epsilon(1e-15));
        CHECK(agg.accuracy.stddev == 0.0);
    }

    SUBCASE("two-point formula") {
        const MeanStd ms = mean_std({0.8, 0.9});
        CHECK(ms.mean == doctest::Approx(0.85).epsilon(1e-12));
        CHECK(ms.stddev == doctest::Approx(0.070710678118654752).epsilon(1e-9));
    }

    SUBCASE("five values match the direct formula at 1e-12") {
        Rng rng(31);
        std::vector<double> values;
        for (int i = 0; i < 5; ++i) values.push_back(rng.uniform(0.0, 1.0));
        const MeanStd ms = mean_std(values);
        double mean = 0.0, stddev = 0.0;
        synth::oracle_mean_std(values, mean, stddev);
        CHECK(std::abs(ms.mean - mean) < 1e-12);
        CHECK(std::abs(ms.stddev - stddev) < 1e-12);
    }

    SUBCASE("fewer than two reports is an error") {
        CHECK_THROWS_AS(aggregate_seeds({make_report(0.5, 0.5)}), DomainError);
        CHECK_THROWS_AS(mean_std({1.0}), DomainError);
    }
}

TEST_CASE("report CSV layout") {
    const auto header = report_csv_header();
    CHECK(header.size() == 16);
    CHECK(header[0] == "split");
    CHECK(header[15] == "auc_2");

    EvalReport r;
    r.seed = 42;
    r.summary.accuracy = 0.875;
    const auto row = report_csv_row("final", r);
    CHECK(row.size() == 16);
    CHECK(row[0] == "final");
    CHECK(row[1] == "42");
    CHECK(row[2] == "0.875000");

    ConfusionMatrix cm;
    cm.counts = {{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}};
    CHECK(confusion_csv_block(cm) == "1,2,3\n4,5,6\n7,8,9\n");
}
