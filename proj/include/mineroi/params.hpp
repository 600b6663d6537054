#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "mineroi/rng.hpp"

namespace mineroi {

// One named learnable tensor with its gradient accumulator. Complex weights
// are stored as two Params ("...re" / "...im").
struct Param {
    std::string name;
    Eigen::MatrixXd value;
    Eigen::MatrixXd grad;

    Param(std::string n, Eigen::Index rows, Eigen::Index cols)
        : name(std::move(n)), value(Eigen::MatrixXd::Zero(rows, cols)),
          grad(Eigen::MatrixXd::Zero(rows, cols)) {}
};

// Ordered, stable-address collection of parameters. Construction order fixes
// checkpoint layout and optimizer state indexing.
class ParamSet {
public:
    ParamSet() = default;
    ParamSet(const ParamSet& other);
    ParamSet& operator=(const ParamSet& other);
    ParamSet(ParamSet&&) = default;
    ParamSet& operator=(ParamSet&&) = default;

    Param* add(const std::string& name, Eigen::Index rows, Eigen::Index cols);
    Param* find(const std::string& name);              // nullptr when absent
    const Param* find(const std::string& name) const;

    std::size_t size() const { return params_.size(); }
    Param& at(std::size_t i) { return *params_[i]; }
    const Param& at(std::size_t i) const { return *params_[i]; }

    std::size_t scalar_count() const;
    void zero_grads();

    // In-place value copy (names and shapes must match). This is the safe way
    // to restore a snapshot into a live network, whose layers hold pointers
    // into this set.
    void copy_values_from(const ParamSet& other);

    // Init helpers used by the model constructors.
    static void uniform_fan_in(Param& p, Eigen::Index fan_in, Rng& rng);

private:
    std::vector<std::unique_ptr<Param>> params_;
};

}  // namespace mineroi
