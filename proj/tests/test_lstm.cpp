#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "gradcheck.hpp"
#include "mineroi/error.hpp"
#include "mineroi/lstm.hpp"

using namespace mineroi;

namespace {

LstmConfig tiny_config() {
    LstmConfig c;
    c.lookback = 8;
    c.features = 3;
    c.hidden_size = 4;
    c.n_layers = 2;
    c.dropout = 0.0;
    c.reduction = 4;
    return c;
}

}  // namespace

TEST_CASE("zero input with zero biases gives logits equal to the head bias") {
    LstmNet net(tiny_config(), 3);
    net.params().find("head.b")->value << 0.3, -0.2, 0.1;

    std::vector<Eigen::MatrixXd> batch = {Eigen::MatrixXd::Zero(8, 3)};
    const LstmForwardTrace t = net.forward(batch, false, nullptr);
    CHECK(t.logits(0, 0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(t.logits(0, 1) == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(t.logits(0, 2) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("fixed seed, dropout off: bit-stable outputs") {
    LstmNet a(tiny_config(), 21);
    LstmNet b(tiny_config(), 21);
    const auto batch = testutil::random_batch(2, 8, 3, 33);
    const auto ta = a.forward(batch, false, nullptr);
    const auto tb = b.forward(batch, false, nullptr);
    CHECK(ta.logits == tb.logits);
    CHECK(ta.logits == a.forward(batch, false, nullptr).logits);
}

TEST_CASE("per-sample independence: batch permutation leaves logits unchanged") {
    LstmNet net(tiny_config(), 5);
    const auto batch = testutil::random_batch(3, 8, 3, 44);
    std::vector<Eigen::MatrixXd> permuted = {batch[2], batch[0], batch[1]};
    const auto t1 = net.forward(batch, false, nullptr);
    const auto t2 = net.forward(permuted, false, nullptr);
    CHECK(t1.logits.row(0) == t2.logits.row(1));
    CHECK(t1.logits.row(1) == t2.logits.row(2));
    CHECK(t1.logits.row(2) == t2.logits.row(0));
}

TEST_CASE("saturated forget gate and closed input gate freeze the cell state") {
    LstmNet net(tiny_config(), 9);
    // bias injection: forget gate wide open, input gate closed
    net.params().find("lstm0.f.b")->value.setConstant(50.0);
    net.params().find("lstm0.i.b")->value.setConstant(-50.0);

    const auto batch = testutil::random_batch(1, 8, 3, 55);
    const LstmForwardTrace t = net.forward(batch, false, nullptr);
    const Eigen::MatrixXd& cell = t.samples[0].layers[0].cell;
    for (int step = 1; step < cell.rows(); ++step) {
        CHECK((cell.row(step) - cell.row(0)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("gradient check on the tiny configuration") {
    auto net = make_lstm_network(tiny_config(), 61);
    const auto batch = testutil::random_batch(3, 8, 3, 66);
    const auto result =
        testutil::gradient_check(*net, batch, {2, 1, 0}, Eigen::Vector3d(0.8, 1.2, 1.0));
    CAPTURE(result.worst_param);
    CHECK(result.worst_rel_err < 1e-4);
    CHECK(result.entries_checked == static_cast<long>(net->params().scalar_count()));
}

TEST_CASE("zero upstream gradient produces zero parameter gradients") {
    LstmNet net(tiny_config(), 71);
    const auto batch = testutil::random_batch(2, 8, 3, 77);
    const auto trace = net.forward(batch, false, nullptr);
    net.params().zero_grads();
    net.backward(trace, Eigen::MatrixXd::Zero(2, 3));
    for (std::size_t i = 0; i < net.params().size(); ++i) {
        CHECK(net.params().at(i).grad.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("inter-layer dropout is active only in training mode") {
    LstmConfig cfg = tiny_config();
    cfg.dropout = 0.5;
    LstmNet net(cfg, 81);
    const auto batch = testutil::random_batch(1, 8, 3, 88);
    CHECK_THROWS_AS(net.forward(batch, true, nullptr), LogicError);
    Rng rng(3);
    const auto dropped = net.forward(batch, true, &rng);
    const auto clean = net.forward(batch, false, nullptr);
    CHECK(dropped.logits != clean.logits);
}

TEST_CASE("backward without a trace is rejected") {
    LstmNet net(tiny_config(), 91);
    LstmForwardTrace empty;
    CHECK_THROWS_AS(net.backward(empty, Eigen::MatrixXd::Zero(1, 3)), LogicError);
}
