#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "gradcheck.hpp"
#include "mineroi/error.hpp"
#include "mineroi/loss.hpp"
#include "mineroi/optim.hpp"
#include "mineroi/synthetic.hpp"
#include "mineroi/trainer.hpp"

using namespace mineroi;

TEST_CASE("label smoothing") {
    SUBCASE("class 2 with eps 0.1 gives (1/30, 1/30, 28/30)") {
        const Eigen::Vector3d t = smooth_labels(one_hot3(2), 0.1);
        CHECK(std::abs(t[0] - 1.0 / 30.0) < 1e-12);
        CHECK(std::abs(t[1] - 1.0 / 30.0) < 1e-12);
        CHECK(std::abs(t[2] - 28.0 / 30.0) < 1e-12);
    }
    SUBCASE("eps 0 keeps the one-hot") {
        CHECK(smooth_labels(one_hot3(1), 0.0) == one_hot3(1));
    }
    SUBCASE("entries sum to 1 for any class and eps") {
        for (int cls = 0; cls < 3; ++cls) {
            for (double eps : {0.0, 0.05, 0.1, 0.42, 0.9}) {
                CHECK(std::abs(smooth_labels(one_hot3(cls), eps).sum() - 1.0) < 1e-15);
            }
        }
    }
    SUBCASE("rejects non-one-hot input") {
        CHECK_THROWS_AS(smooth_labels(Eigen::Vector3d(0.5, 0.5, 0.0), 0.1), DomainError);
        CHECK_THROWS_AS(smooth_labels(Eigen::Vector3d(1.0, 1.0, 0.0), 0.1), DomainError);
        CHECK_THROWS_AS(smooth_labels(Eigen::Vector3d::Zero(), 0.1), DomainError);
    }
}

TEST_CASE("weighted cross entropy") {
    const Eigen::Vector3d unit = Eigen::Vector3d::Ones();

    SUBCASE("uniform logits give ln 3") {
        Eigen::MatrixXd logits = Eigen::MatrixXd::Zero(4, 3);
        Eigen::MatrixXd targets(4, 3);
        for (int i = 0; i < 4; ++i) targets.row(i) = one_hot3(i % 3).transpose();
        CHECK(std::abs(weighted_cross_entropy(logits, targets, unit) - std::log(3.0)) < 1e-12);
    }

    SUBCASE("huge logit on the true class: loss ~ 0, no overflow") {
        Eigen::MatrixXd logits(1, 3);
        logits << 1000.0, 0.0, 0.0;
        Eigen::MatrixXd targets(1, 3);
        targets.row(0) = one_hot3(0).transpose();
        const double loss = weighted_cross_entropy(logits, targets, unit);
        CHECK(std::isfinite(loss));
        CHECK(loss < 1e-12);
    }

    SUBCASE("matches the naive direct formula on random batches") {
        Rng rng(13);
        Eigen::MatrixXd logits(16, 3);
        Eigen::MatrixXd targets(16, 3);
        for (int i = 0; i < 16; ++i) {
            for (int c = 0; c < 3; ++c) logits(i, c) = rng.uniform(-4.0, 4.0);
            targets.row(i) = smooth_labels(one_hot3(static_cast<int>(rng.below(3))), 0.1).transpose();
        }
        const Eigen::Vector3d w(0.84, 1.21, 1.02);

        // naive: explicit softmax then -sum w t log p
        double naive = 0.0;
        for (int i = 0; i < 16; ++i) {
            double denom = 0.0;
            for (int c = 0; c < 3; ++c) denom += std::exp(logits(i, c));
            for (int c = 0; c < 3; ++c) {
                naive -= w[c] * targets(i, c) * std::log(std::exp(logits(i, c)) / denom);
            }
        }
        naive /= 16.0;
        CHECK(std::abs(weighted_cross_entropy(logits, targets, w) - naive) < 1e-10);
    }

    SUBCASE("loss is non-negative for any non-negative weights") {
        Rng rng(29);
        for (int trial = 0; trial < 50; ++trial) {
            Eigen::MatrixXd logits(4, 3);
            Eigen::MatrixXd targets(4, 3);
            for (int i = 0; i < 4; ++i) {
                for (int c = 0; c < 3; ++c) logits(i, c) = rng.uniform(-6.0, 6.0);
                targets.row(i) =
                    smooth_labels(one_hot3(static_cast<int>(rng.below(3))), rng.uniform(0.0, 0.5))
                        .transpose();
            }
            const Eigen::Vector3d w(rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0));
            CHECK(weighted_cross_entropy(logits, targets, w) >= 0.0);
        }
    }

    SUBCASE("gradient matches finite differences") {
        Rng rng(31);
        Eigen::MatrixXd logits(5, 3);
        Eigen::MatrixXd targets(5, 3);
        for (int i = 0; i < 5; ++i) {
            for (int c = 0; c < 3; ++c) logits(i, c) = rng.uniform(-3.0, 3.0);
            targets.row(i) = smooth_labels(one_hot3(static_cast<int>(rng.below(3))), 0.1).transpose();
        }
        const Eigen::Vector3d w(1.3, 0.7, 1.0);
        Eigen::MatrixXd grad;
        (void)weighted_cross_entropy(logits, targets, w, &grad);

        const double h = 1e-6;
        for (int i = 0; i < 5; ++i) {
            for (int c = 0; c < 3; ++c) {
                Eigen::MatrixXd up = logits, down = logits;
                up(i, c) += h;
                down(i, c) -= h;
                const double fd = (weighted_cross_entropy(up, targets, w) -
                                   weighted_cross_entropy(down, targets, w)) /
                                  (2.0 * h);
                CHECK(std::abs(fd - grad(i, c)) / std::max({1e-8, std::abs(fd), std::abs(grad(i, c))}) <
                      1e-6);
            }
        }
    }

    SUBCASE("non-finite logits are rejected") {
        Eigen::MatrixXd logits(1, 3);
        logits << 1.0, std::nan(""), 0.0;
        Eigen::MatrixXd targets(1, 3);
        targets.row(0) = one_hot3(0).transpose();
        CHECK_THROWS_AS(weighted_cross_entropy(logits, targets, unit), DomainError);
    }
}

TEST_CASE("adamw steps") {
    SUBCASE("zero gradient, zero decay: parameters unchanged") {
        ParamSet ps;
        Param* p = ps.add("w", 2, 2);
        p->value << 1.0, -2.0, 3.0, 0.5;
        const Eigen::MatrixXd before = p->value;
        AdamW opt({0.1, 0.0, 0.9, 0.999, 1e-8});
        for (int i = 0; i < 3; ++i) opt.step(ps);
        CHECK(p->value == before);
    }

    SUBCASE("zero gradient with decay: exact multiplicative shrink per step") {
        ParamSet ps;
        Param* p = ps.add("w", 1, 1);
        p->value(0, 0) = 2.0;
        const double lr = 0.05;
        const double wd = 0.01;
        AdamW opt({lr, wd, 0.9, 0.999, 1e-8});
        double expected = 2.0;
        for (int i = 0; i < 4; ++i) {
            opt.step(ps);
            expected *= (1.0 - lr * wd);
            CHECK(std::abs(p->value(0, 0) - expected) < 1e-12);
        }
    }

    SUBCASE("two hand-stepped iterations on a scalar parameter") {
        ParamSet ps;
        Param* p = ps.add("w", 1, 1);
        p->value(0, 0) = 1.0;
        const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
        AdamW opt({lr, 0.0, b1, b2, eps});

        // hand arithmetic, written out step by step
        double x = 1.0, m = 0.0, v = 0.0;
        const double g1 = 0.5;
        m = b1 * m + (1 - b1) * g1;
        v = b2 * v + (1 - b2) * g1 * g1;
        double mh = m / (1 - b1);
        double vh = v / (1 - b2);
        x -= lr * mh / (std::sqrt(vh) + eps);

        p->grad(0, 0) = g1;
        opt.step(ps);
        CHECK(std::abs(p->value(0, 0) - x) < 1e-12);

        const double g2 = -0.25;
        m = b1 * m + (1 - b1) * g2;
        v = b2 * v + (1 - b2) * g2 * g2;
        mh = m / (1 - b1 * b1);
        vh = v / (1 - b2 * b2);
        x -= lr * mh / (std::sqrt(vh) + eps);

        p->grad(0, 0) = g2;
        opt.step(ps);
        CHECK(std::abs(p->value(0, 0) - x) < 1e-12);
    }

    SUBCASE("shape change is rejected") {
        ParamSet ps;
        ps.add("w", 2, 2);
        AdamW opt({0.1, 0.0, 0.9, 0.999, 1e-8});
        opt.step(ps);
        ParamSet other;
        other.add("w", 3, 3);
        CHECK_THROWS_AS(opt.step(other), LogicError);
    }
}

namespace {

TrainConfig quick_train_config(std::uint64_t seed) {
    TrainConfig cfg;
    cfg.batch_size = 16;
    cfg.max_epochs = 5;
    cfg.learning_rate = 1e-3;
    cfg.weight_decay = 1e-5;
    cfg.label_smoothing = 0.1;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("training on separable data: loss strictly decreases over the first epochs") {
    const auto samples = synth::separable_dataset(8, 3, 30, 1234);
    ModelConfig mc;
    mc.lookback = 8;
    mc.features = 3;
    mc.d_model = 8;
    mc.n_heads = 2;
    mc.n_layers = 1;
    mc.d_ff = 16;
    mc.dropout = 0.0;
    mc.head_hidden = 4;

    auto net = make_mineroi_network(mc, 42);
    const TrainResult r = train(*net, quick_train_config(42), samples, {});
    REQUIRE(r.history.epochs() == 5);
    for (int e = 1; e < 5; ++e) {
        CHECK(r.history.train_loss[static_cast<std::size_t>(e)] <
              r.history.train_loss[static_cast<std::size_t>(e - 1)]);
    }
    CHECK(r.history.selected_epoch == 4);  // no validation set: final epoch
}

TEST_CASE("same seed twice: identical training history") {
    const auto samples = synth::separable_dataset(8, 3, 20, 99);
    ModelConfig mc;
    mc.lookback = 8;
    mc.features = 3;
    mc.d_model = 8;
    mc.n_heads = 2;
    mc.n_layers = 1;
    mc.d_ff = 16;
    mc.dropout = 0.1;
    mc.head_hidden = 4;

    std::vector<WindowSample> train_set(samples.begin(), samples.begin() + 45);
    std::vector<WindowSample> val_set(samples.begin() + 45, samples.end());

    auto net1 = make_mineroi_network(mc, 7);
    auto net2 = make_mineroi_network(mc, 7);
    const TrainResult r1 = train(*net1, quick_train_config(7), train_set, val_set);
    const TrainResult r2 = train(*net2, quick_train_config(7), train_set, val_set);

    CHECK(r1.history.train_loss == r2.history.train_loss);
    CHECK(r1.history.val_loss == r2.history.val_loss);
    CHECK(r1.history.val_acc == r2.history.val_acc);
    CHECK(r1.history.val_macro_f1 == r2.history.val_macro_f1);
    CHECK(r1.history.selected_epoch == r2.history.selected_epoch);

    // checkpoint-determining state: identical parameter values, bit for bit
    for (std::size_t i = 0; i < r1.best_params.size(); ++i) {
        CHECK(r1.best_params.at(i).value == r2.best_params.at(i).value);
    }
}

TEST_CASE("empty training set is rejected") {
    ModelConfig mc;
    mc.lookback = 8;
    mc.features = 3;
    mc.d_model = 8;
    mc.n_heads = 2;
    mc.n_layers = 1;
    mc.d_ff = 16;
    auto net = make_mineroi_network(mc, 1);
    CHECK_THROWS_AS(train(*net, quick_train_config(1), {}, {}), InputError);
}
