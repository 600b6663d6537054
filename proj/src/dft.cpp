#include "mineroi/dft.hpp"

#include <cmath>
#include <numbers>

#include "mineroi/error.hpp"

namespace mineroi {

DftPlan::DftPlan(int length) : length_(length), bins_(length / 2 + 1) {
    if (length < 2) throw DomainError("DftPlan: length must be >= 2");

    cos_.resize(length_, bins_);
    sin_.resize(length_, bins_);
    for (int t = 0; t < length_; ++t) {
        for (int k = 0; k < bins_; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) *
                                 static_cast<double>(k) / static_cast<double>(length_);
            cos_(t, k) = std::cos(angle);
            sin_(t, k) = std::sin(angle);
        }
    }

    full_cos_.resize(length_, length_);
    full_sin_.resize(length_, length_);
    for (int t = 0; t < length_; ++t) {
        for (int k = 0; k < length_; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) *
                                 static_cast<double>(k) / static_cast<double>(length_);
            full_cos_(t, k) = std::cos(angle);
            full_sin_(t, k) = std::sin(angle);
        }
    }

    fold_.resize(bins_);
    for (int k = 0; k < bins_; ++k) {
        const bool self_conjugate = (k == 0) || (length_ % 2 == 0 && k == length_ / 2);
        fold_[k] = self_conjugate ? 1.0 : 2.0;
    }
}

void DftPlan::rfft(const Eigen::MatrixXd& x, Eigen::MatrixXd& re, Eigen::MatrixXd& im) const {
    if (x.rows() != length_) throw LogicError("rfft: series length mismatch");
    // X[k] = sum_t x[t] e^{-i 2 pi k t / L}
    re.noalias() = cos_.transpose() * x;
    im.noalias() = -(sin_.transpose() * x);
}

Eigen::MatrixXd DftPlan::irfft(const Eigen::MatrixXd& re, const Eigen::MatrixXd& im) const {
    if (re.rows() != bins_ || im.rows() != bins_) throw LogicError("irfft: bin count mismatch");
    // x[t] = (1/L) sum_k fold_k (Re X[k] cos - Im X[k] sin)
    Eigen::MatrixXd out(length_, re.cols());
    out.noalias() = cos_ * (fold_.asDiagonal() * re);
    out.noalias() -= sin_ * (fold_.asDiagonal() * im);
    out /= static_cast<double>(length_);
    return out;
}

void DftPlan::irfft_adjoint(const Eigen::MatrixXd& g, Eigen::MatrixXd& d_re,
                            Eigen::MatrixXd& d_im) const {
    if (g.rows() != length_) throw LogicError("irfft_adjoint: series length mismatch");
    d_re.noalias() = fold_.asDiagonal() * (cos_.transpose() * g);
    d_re /= static_cast<double>(length_);
    d_im.noalias() = fold_.asDiagonal() * (sin_.transpose() * g);
    d_im /= -static_cast<double>(length_);
}

Eigen::MatrixXd DftPlan::rfft_adjoint(const Eigen::MatrixXd& d_re, const Eigen::MatrixXd& d_im) const {
    if (d_re.rows() != bins_ || d_im.rows() != bins_) throw LogicError("rfft_adjoint: bin count mismatch");
    Eigen::MatrixXd dx(length_, d_re.cols());
    dx.noalias() = cos_ * d_re;
    dx.noalias() -= sin_ * d_im;
    return dx;
}

void DftPlan::roundtrip(const Eigen::MatrixXd& x, Eigen::MatrixXd& re, Eigen::MatrixXd& im) const {
    if (x.rows() != length_) throw LogicError("roundtrip: series length mismatch");
    // full spectrum of real input
    const Eigen::MatrixXd spec_re = full_cos_.transpose() * x;
    const Eigen::MatrixXd spec_im = -(full_sin_.transpose() * x);
    // inverse transform, keeping the (numerically tiny) imaginary residue
    re.noalias() = full_cos_ * spec_re;
    re.noalias() -= full_sin_ * spec_im;
    re /= static_cast<double>(length_);
    im.noalias() = full_sin_ * spec_re;
    im.noalias() += full_cos_ * spec_im;
    im /= static_cast<double>(length_);
}

}  // namespace mineroi
