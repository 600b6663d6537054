#include "mineroi/optim.hpp"

#include <cmath>

#include "mineroi/error.hpp"

namespace mineroi {

void AdamW::step(ParamSet& params) {
    if (state_.empty()) {
        state_.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            const auto& p = params.at(i);
            state_[i].m = Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols());
            state_[i].v = Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols());
        }
    }
    if (state_.size() != params.size()) throw LogicError("AdamW: parameter count changed");

    ++t_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));

    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& p = params.at(i);
        auto& s = state_[i];
        if (s.m.rows() != p.value.rows() || s.m.cols() != p.value.cols()) {
            throw LogicError("AdamW: shape mismatch for parameter " + p.name);
        }

        // decoupled decay on the pre-update value
        p.value *= (1.0 - config_.learning_rate * config_.weight_decay);

        s.m = config_.beta1 * s.m + (1.0 - config_.beta1) * p.grad;
        s.v = config_.beta2 * s.v + (1.0 - config_.beta2) * p.grad.cwiseProduct(p.grad);
        const Eigen::MatrixXd m_hat = s.m / bc1;
        const Eigen::MatrixXd v_hat = s.v / bc2;
        p.value.array() -=
            config_.learning_rate * m_hat.array() / (v_hat.array().sqrt() + config_.eps);
    }
}

void AdamW::reset() {
    state_.clear();
    t_ = 0;
}

}  // namespace mineroi
