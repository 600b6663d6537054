#include "mineroi/loss.hpp"

#include <cmath>

#include "mineroi/error.hpp"

namespace mineroi {

Eigen::Vector3d one_hot3(int label) {
    if (label < 0 || label > 2) throw DomainError("one_hot3: label outside {0,1,2}");
    Eigen::Vector3d y = Eigen::Vector3d::Zero();
    y[label] = 1.0;
    return y;
}

Eigen::Vector3d smooth_labels(const Eigen::Vector3d& one_hot, double epsilon) {
    if (epsilon < 0.0 || epsilon >= 1.0) throw DomainError("smooth_labels: epsilon must be in [0, 1)");
    int ones = 0;
    for (int c = 0; c < 3; ++c) {
        if (one_hot[c] == 1.0) {
            ++ones;
        } else if (one_hot[c] != 0.0) {
            throw DomainError("smooth_labels: input is not one-hot");
        }
    }
    if (ones != 1) throw DomainError("smooth_labels: input is not one-hot");
    return (1.0 - epsilon) * one_hot + Eigen::Vector3d::Constant(epsilon / 3.0);
}

double weighted_cross_entropy(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& targets,
                              const Eigen::Vector3d& class_weights, Eigen::MatrixXd* d_logits) {
    if (logits.cols() != 3 || targets.cols() != 3 || logits.rows() != targets.rows()) {
        throw LogicError("weighted_cross_entropy: shape mismatch");
    }
    if (logits.rows() == 0) throw DomainError("weighted_cross_entropy: empty batch");
    if (!logits.allFinite()) throw DomainError("weighted_cross_entropy: non-finite logits");

    const Eigen::Index batch = logits.rows();
    if (d_logits) d_logits->resize(batch, 3);

    double total = 0.0;
    for (Eigen::Index i = 0; i < batch; ++i) {
        const Eigen::Vector3d row = logits.row(i).transpose();
        const double mx = row.maxCoeff();
        const Eigen::Vector3d shifted = row.array() - mx;
        const double lse = mx + std::log(shifted.array().exp().sum());

        double sample = 0.0;
        double weight_mass = 0.0;
        for (int c = 0; c < 3; ++c) {
            const double wt = class_weights[c] * targets(i, c);
            sample -= wt * (row[c] - lse);
            weight_mass += wt;
        }
        total += sample;

        if (d_logits) {
            const Eigen::Vector3d probs = (shifted.array() - std::log(shifted.array().exp().sum()))
                                              .exp();
            for (int c = 0; c < 3; ++c) {
                (*d_logits)(i, c) = (weight_mass * probs[c] - class_weights[c] * targets(i, c)) /
                                    static_cast<double>(batch);
            }
        }
    }
    return total / static_cast<double>(batch);
}

}  // namespace mineroi
