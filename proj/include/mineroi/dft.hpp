#pragma once

#include <Eigen/Core>

namespace mineroi {

// Dense discrete Fourier transform for one fixed length, built on cached
// twiddle tables so each transform is a small matrix product. Lengths here
// are 30 or 60 (not powers of two); a dense plan keeps bin semantics exact
// with no padding.
class DftPlan {
public:
    explicit DftPlan(int length);

    int length() const { return length_; }
    // number of non-negative frequency bins, floor(L/2)+1
    int bins() const { return bins_; }

    // Real-input transform of each column of x (length L): spectra of the
    // non-negative bins. re/im come back as bins x cols.
    void rfft(const Eigen::MatrixXd& x, Eigen::MatrixXd& re, Eigen::MatrixXd& im) const;

    // Hermitian-symmetric inverse: treats (re, im) as the non-negative bins
    // of a spectrum whose negative bins are their conjugates, returns the
    // real series per column (L x cols).
    Eigen::MatrixXd irfft(const Eigen::MatrixXd& re, const Eigen::MatrixXd& im) const;

    // Full complex round trip idft(dft(x)) for real input, kept as separate
    // real and imaginary parts (each L x cols). The imaginary part is zero up
    // to rounding; the literal spectral mode consumes both.
    void roundtrip(const Eigen::MatrixXd& x, Eigen::MatrixXd& re, Eigen::MatrixXd& im) const;

    // Adjoints of the two maps above (both are linear), used by backprop.
    // Given d(out)/d(irfft result) per column, returns gradients w.r.t. the
    // non-negative-bin spectrum.
    void irfft_adjoint(const Eigen::MatrixXd& g, Eigen::MatrixXd& d_re, Eigen::MatrixXd& d_im) const;
    // Given gradients w.r.t. the rfft spectrum, returns d/d(input series).
    Eigen::MatrixXd rfft_adjoint(const Eigen::MatrixXd& d_re, const Eigen::MatrixXd& d_im) const;

    // fold factor per bin: 1 for DC (and Nyquist when L is even), else 2
    const Eigen::VectorXd& fold() const { return fold_; }

private:
    int length_;
    int bins_;
    Eigen::MatrixXd cos_, sin_;            // L x bins
    Eigen::MatrixXd full_cos_, full_sin_;  // L x L
    Eigen::VectorXd fold_;
};

}  // namespace mineroi
