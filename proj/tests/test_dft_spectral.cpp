#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <complex>

#include "doctest.h"
#include "mineroi/dft.hpp"
#include "mineroi/error.hpp"
#include "mineroi/model.hpp"
#include "mineroi/rng.hpp"
#include "mineroi/synthetic.hpp"

using namespace mineroi;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) m(i, j) = rng.uniform(lo, hi);
    }
    return m;
}

struct FrontFixture {
    ParamSet params;
    SpectralChannelMix front;

    FrontFixture(int lookback, int features, SpectralMode mode)
        : front(lookback, features, 4, mode, params) {
        Rng rng(5);
        front.init(rng);
    }

    Param& w_re() { return *params.find("spectral.w_re"); }
    Param& w_im() { return *params.find("spectral.w_im"); }
};

}  // namespace

TEST_CASE("dft round trip restores random real series (lengths 30 and 60)") {
    Rng rng(17);
    for (int length : {30, 60}) {
        DftPlan plan(length);
        const Eigen::MatrixXd x = random_matrix(length, 5, rng, -2.0, 2.0);
        Eigen::MatrixXd re, im;
        plan.rfft(x, re, im);
        const Eigen::MatrixXd back = plan.irfft(re, im);
        CHECK((back - x).cwiseAbs().maxCoeff() < 1e-9);

        Eigen::MatrixXd rt_re, rt_im;
        plan.roundtrip(x, rt_re, rt_im);
        CHECK((rt_re - x).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(rt_im.cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("dft matches the naive O(L^2) oracle") {
    Rng rng(29);
    for (int length : {8, 30, 60}) {
        DftPlan plan(length);
        std::vector<double> series(static_cast<std::size_t>(length));
        Eigen::MatrixXd x(length, 1);
        for (int t = 0; t < length; ++t) {
            series[static_cast<std::size_t>(t)] = rng.uniform(-1.0, 1.0);
            x(t, 0) = series[static_cast<std::size_t>(t)];
        }
        Eigen::MatrixXd re, im;
        plan.rfft(x, re, im);
        const auto oracle = synth::oracle_dft(series);
        for (int k = 0; k < plan.bins(); ++k) {
            CHECK(re(k, 0) == doctest::Approx(oracle[static_cast<std::size_t>(k)].real()).epsilon(1e-9));
            CHECK(im(k, 0) == doctest::Approx(oracle[static_cast<std::size_t>(k)].imag()).epsilon(1e-9));
        }
    }
}

TEST_CASE("literal mode with unit weights is the identity") {
    Rng rng(31);
    for (int length : {8, 30, 60}) {
        FrontFixture fx(length, 4, SpectralMode::Literal);
        const Eigen::MatrixXd x = random_matrix(length, 4, rng);
        const Eigen::MatrixXd out = fx.front.spectral_forward(x);
        CHECK((out - x).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("literal mode with a real scalar weight scales the series") {
    Rng rng(37);
    FrontFixture fx(30, 3, SpectralMode::Literal);
    fx.w_re().value.setConstant(-1.75);
    const Eigen::MatrixXd x = random_matrix(30, 3, rng);
    const Eigen::MatrixXd out = fx.front.spectral_forward(x);
    CHECK((out - (-1.75 * x)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("per-bin DC-only filter yields the per-series mean") {
    Rng rng(41);
    const int length = 30;
    const int features = 4;
    FrontFixture fx(length, features, SpectralMode::PerBin);
    fx.w_re().value.setZero();
    fx.w_im().value.setZero();
    fx.w_re().value.col(0).setOnes();  // keep only the DC bin

    const Eigen::MatrixXd x = random_matrix(length, features, rng);
    const Eigen::MatrixXd out = fx.front.spectral_forward(x);
    for (int f = 0; f < features; ++f) {
        const double mean = x.col(f).mean();
        for (int t = 0; t < length; ++t) {
            CHECK(out(t, f) == doctest::Approx(mean).epsilon(1e-9));
        }
    }
}

TEST_CASE("per-bin filtering matches the naive spectral oracle") {
    Rng rng(43);
    for (int length : {30, 60}) {
        const int features = 3;
        FrontFixture fx(length, features, SpectralMode::PerBin);
        const int bins = length / 2 + 1;
        for (int f = 0; f < features; ++f) {
            for (int k = 0; k < bins; ++k) {
                fx.w_re().value(f, k) = rng.uniform(-1.0, 1.0);
                fx.w_im().value(f, k) = rng.uniform(-1.0, 1.0);
            }
        }

        const Eigen::MatrixXd x = random_matrix(length, features, rng);
        const Eigen::MatrixXd out = fx.front.spectral_forward(x);

        for (int f = 0; f < features; ++f) {
            std::vector<double> series(static_cast<std::size_t>(length));
            for (int t = 0; t < length; ++t) series[static_cast<std::size_t>(t)] = x(t, f);
            std::vector<std::complex<double>> weights(static_cast<std::size_t>(bins));
            for (int k = 0; k < bins; ++k) {
                weights[static_cast<std::size_t>(k)] = {fx.w_re().value(f, k), fx.w_im().value(f, k)};
            }
            const std::vector<double> expected = synth::oracle_spectral_filter(series, weights);
            for (int t = 0; t < length; ++t) {
                CHECK(out(t, f) ==
                      doctest::Approx(expected[static_cast<std::size_t>(t)]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("spectral transform is linear in its input") {
    Rng rng(47);
    const int length = 30;
    const int features = 4;
    FrontFixture fx(length, features, SpectralMode::PerBin);
    for (int f = 0; f < features; ++f) {
        for (int k = 0; k < fx.w_re().value.cols(); ++k) {
            fx.w_re().value(f, k) = rng.uniform(-1.0, 1.0);
            fx.w_im().value(f, k) = rng.uniform(-1.0, 1.0);
        }
    }
    const Eigen::MatrixXd x = random_matrix(length, features, rng);
    const Eigen::MatrixXd y = random_matrix(length, features, rng);
    const double a = 0.7;
    const double b = -2.3;
    const Eigen::MatrixXd lhs = fx.front.spectral_forward(a * x + b * y);
    const Eigen::MatrixXd rhs = a * fx.front.spectral_forward(x) + b * fx.front.spectral_forward(y);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("spectral rejects non-finite input") {
    FrontFixture fx(8, 2, SpectralMode::PerBin);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(8, 2);
    x(3, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fx.front.spectral_forward(x), DomainError);
}
