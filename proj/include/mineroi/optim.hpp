#pragma once

#include <Eigen/Core>
#include <vector>

#include "mineroi/params.hpp"

namespace mineroi {

struct AdamWConfig {
    double learning_rate = 1e-4;
    double weight_decay = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// AdamW with decoupled weight decay: the decay shrinks the parameter by
// lr * wd independently of the gradient, then the bias-corrected moment
// update is applied.
class AdamW {
public:
    explicit AdamW(AdamWConfig config) : config_(config) {}

    void step(ParamSet& params);
    void reset();

    long steps_taken() const { return t_; }
    const AdamWConfig& config() const { return config_; }

private:
    struct Moments {
        Eigen::MatrixXd m, v;
    };
    AdamWConfig config_;
    std::vector<Moments> state_;
    long t_ = 0;
};

}  // namespace mineroi
