#include "mineroi/params.hpp"

#include <cmath>

#include "mineroi/error.hpp"

namespace mineroi {

ParamSet::ParamSet(const ParamSet& other) {
    params_.reserve(other.params_.size());
    for (const auto& p : other.params_) params_.push_back(std::make_unique<Param>(*p));
}

ParamSet& ParamSet::operator=(const ParamSet& other) {
    if (this == &other) return *this;
    params_.clear();
    params_.reserve(other.params_.size());
    for (const auto& p : other.params_) params_.push_back(std::make_unique<Param>(*p));
    return *this;
}

Param* ParamSet::add(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    if (find(name)) throw LogicError("duplicate parameter name: " + name);
    params_.push_back(std::make_unique<Param>(name, rows, cols));
    return params_.back().get();
}

Param* ParamSet::find(const std::string& name) {
    for (auto& p : params_) {
        if (p->name == name) return p.get();
    }
    return nullptr;
}

const Param* ParamSet::find(const std::string& name) const {
    for (const auto& p : params_) {
        if (p->name == name) return p.get();
    }
    return nullptr;
}

std::size_t ParamSet::scalar_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
    return n;
}

void ParamSet::zero_grads() {
    for (auto& p : params_) p->grad.setZero();
}

void ParamSet::copy_values_from(const ParamSet& other) {
    if (other.size() != size()) throw LogicError("copy_values_from: parameter count mismatch");
    for (std::size_t i = 0; i < size(); ++i) {
        Param& dst = *params_[i];
        const Param& src = *other.params_[i];
        if (dst.name != src.name || dst.value.rows() != src.value.rows() ||
            dst.value.cols() != src.value.cols()) {
            throw LogicError("copy_values_from: mismatch at parameter " + dst.name);
        }
        dst.value = src.value;
    }
}

void ParamSet::uniform_fan_in(Param& p, Eigen::Index fan_in, Rng& rng) {
    const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
    for (Eigen::Index j = 0; j < p.value.cols(); ++j) {
        for (Eigen::Index i = 0; i < p.value.rows(); ++i) {
            p.value(i, j) = rng.uniform(-bound, bound);
        }
    }
}

}  // namespace mineroi
