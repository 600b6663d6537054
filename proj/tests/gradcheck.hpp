#pragma once

#include <string>
#include <vector>

#include "mineroi/loss.hpp"
#include "mineroi/rng.hpp"
#include "mineroi/trainer.hpp"

namespace testutil {

struct GradCheckResult {
    double worst_rel_err = 0.0;
    std::string worst_param;
    long entries_checked = 0;
};

// Central finite differences (h = 1e-4) against the analytic gradients of the
// weighted cross-entropy loss, every entry of every parameter. Relative error
// uses an absolute floor so gradient-dead parameters (both sides ~ 0) pass.
inline GradCheckResult gradient_check(mineroi::Network& net,
                                      const std::vector<Eigen::MatrixXd>& batch,
                                      const std::vector<int>& labels,
                                      const Eigen::Vector3d& class_weights,
                                      double label_smoothing = 0.1, double h = 1e-4) {
    using namespace mineroi;

    Eigen::MatrixXd targets(static_cast<Eigen::Index>(labels.size()), 3);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        targets.row(static_cast<Eigen::Index>(i)) =
            smooth_labels(one_hot3(labels[i]), label_smoothing).transpose();
    }

    auto loss_at = [&]() {
        const Eigen::MatrixXd logits = net.forward_logits(batch, /*training=*/false, nullptr);
        return weighted_cross_entropy(logits, targets, class_weights);
    };

    // analytic pass
    net.params().zero_grads();
    const Eigen::MatrixXd logits = net.forward_logits(batch, false, nullptr);
    Eigen::MatrixXd d_logits;
    (void)weighted_cross_entropy(logits, targets, class_weights, &d_logits);
    net.backward_logits(d_logits);

    GradCheckResult result;
    ParamSet& params = net.params();
    for (std::size_t p = 0; p < params.size(); ++p) {
        Param& param = params.at(p);
        for (Eigen::Index j = 0; j < param.value.cols(); ++j) {
            for (Eigen::Index i = 0; i < param.value.rows(); ++i) {
                const double saved = param.value(i, j);
                param.value(i, j) = saved + h;
                const double up = loss_at();
                param.value(i, j) = saved - h;
                const double down = loss_at();
                param.value(i, j) = saved;

                const double fd = (up - down) / (2.0 * h);
                const double analytic = param.grad(i, j);
                const double denom = std::max({1e-6, std::abs(fd), std::abs(analytic)});
                const double rel = std::abs(fd - analytic) / denom;
                ++result.entries_checked;
                if (rel > result.worst_rel_err) {
                    result.worst_rel_err = rel;
                    result.worst_param = param.name + "(" + std::to_string(i) + "," +
                                         std::to_string(j) + ")";
                }
            }
        }
    }
    return result;
}

inline std::vector<Eigen::MatrixXd> random_batch(int batch, int lookback, int features,
                                                 std::uint64_t seed) {
    mineroi::Rng rng(seed);
    std::vector<Eigen::MatrixXd> out;
    for (int b = 0; b < batch; ++b) {
        Eigen::MatrixXd x(lookback, features);
        for (int f = 0; f < features; ++f) {
            for (int t = 0; t < lookback; ++t) x(t, f) = rng.uniform(-1.0, 1.0);
        }
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace testutil
