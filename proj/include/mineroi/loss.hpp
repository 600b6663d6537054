#pragma once

#include <Eigen/Core>

namespace mineroi {

// (1 - eps) * y + eps / 3 for a one-hot 3-vector y. Entries sum to 1.
Eigen::Vector3d smooth_labels(const Eigen::Vector3d& one_hot, double epsilon);

Eigen::Vector3d one_hot3(int label);

// Weighted cross-entropy with smoothed targets, averaged over the batch and
// computed through log-sum-exp:
//   -(1/B) sum_i sum_c w_c t_{i,c} log softmax(logits_i)_c
// When d_logits is non-null it receives the gradient (same shape as logits).
double weighted_cross_entropy(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& targets,
                              const Eigen::Vector3d& class_weights,
                              Eigen::MatrixXd* d_logits = nullptr);

}  // namespace mineroi
