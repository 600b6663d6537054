#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

namespace mineroi::synth {

// Naive metric re-derivations (double loops, direct formulas). Companion
// oracles to the ones in synthetic.hpp; the evaluation module never calls
// these.

std::array<std::array<long, 3>, 3> oracle_confusion(const std::vector<int>& truth,
                                                    const std::vector<int>& pred);

struct OracleClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

double oracle_accuracy(const std::vector<int>& truth, const std::vector<int>& pred);
OracleClassMetrics oracle_class_metrics(const std::vector<int>& truth, const std::vector<int>& pred,
                                        int cls);

// Pairwise one-vs-rest AUC: every (positive, negative) pair scores 1, 0 or
// 1/2 on ties.
double oracle_auc_pairwise(const std::vector<double>& scores, const std::vector<int>& truth,
                           int positive_class);

// Direct two-pass mean and sample standard deviation.
void oracle_mean_std(const std::vector<double>& values, double& mean, double& std_dev);

}  // namespace mineroi::synth
