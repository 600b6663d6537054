#include "mineroi/oracles.hpp"

#include <cmath>

#include "mineroi/error.hpp"

namespace mineroi::synth {

std::array<std::array<long, 3>, 3> oracle_confusion(const std::vector<int>& truth,
                                                    const std::vector<int>& pred) {
    std::array<std::array<long, 3>, 3> cm{};
    for (int t = 0; t < 3; ++t) {
        for (int p = 0; p < 3; ++p) {
            long count = 0;
            for (std::size_t i = 0; i < truth.size(); ++i) {
                if (truth[i] == t && pred[i] == p) ++count;
            }
            cm[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] = count;
        }
    }
    return cm;
}

double oracle_accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
    long correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == pred[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

OracleClassMetrics oracle_class_metrics(const std::vector<int>& truth, const std::vector<int>& pred,
                                        int cls) {
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (pred[i] == cls && truth[i] == cls) ++tp;
        if (pred[i] == cls && truth[i] != cls) ++fp;
        if (pred[i] != cls && truth[i] == cls) ++fn;
    }
    OracleClassMetrics m;
    m.precision = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    m.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    m.f1 = (m.precision + m.recall) == 0.0 ? 0.0
                                           : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

double oracle_auc_pairwise(const std::vector<double>& scores, const std::vector<int>& truth,
                           int positive_class) {
    double wins = 0.0;
    long pairs = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] != positive_class) continue;
        for (std::size_t j = 0; j < truth.size(); ++j) {
            if (truth[j] == positive_class) continue;
            ++pairs;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    if (pairs == 0) throw DomainError("oracle_auc_pairwise: degenerate label set");
    return wins / static_cast<double>(pairs);
}

void oracle_mean_std(const std::vector<double>& values, double& mean, double& std_dev) {
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    std_dev = values.size() < 2 ? 0.0 : std::sqrt(ss / (n - 1.0));
}

}  // namespace mineroi::synth
