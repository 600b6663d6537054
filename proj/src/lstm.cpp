#include "mineroi/lstm.hpp"

#include <cmath>

#include "mineroi/error.hpp"

namespace mineroi {

void LstmConfig::validate() const {
    if (lookback < 2) throw ConfigError("lstm: lookback must be >= 2");
    if (features < 1) throw ConfigError("lstm: features must be >= 1");
    if (hidden_size < 1) throw ConfigError("lstm: hidden_size must be >= 1");
    if (n_layers < 1) throw ConfigError("lstm: n_layers must be >= 1");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("lstm: dropout must be in [0, 1)");
    if (reduction < 1) throw ConfigError("lstm: reduction must be >= 1");
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

LstmConfig validated(LstmConfig c) {
    c.validate();
    return c;
}

}  // namespace

LstmNet::LstmNet(const LstmConfig& config, std::uint64_t init_seed)
    : config_(validated(config)),
      front_(config_.lookback, config_.features, config_.reduction, config_.spectral_mode,
             params_) {
    const int hid = config_.hidden_size;
    layers_.resize(static_cast<std::size_t>(config_.n_layers));
    for (int l = 0; l < config_.n_layers; ++l) {
        const int in_dim = l == 0 ? config_.features : hid;
        const std::string p = "lstm" + std::to_string(l) + ".";
        auto gate = [&](const char* g) {
            GateParams gp;
            gp.w_x = params_.add(p + g + std::string(".w_x"), in_dim, hid);
            gp.w_h = params_.add(p + g + std::string(".w_h"), hid, hid);
            gp.b = params_.add(p + g + std::string(".b"), hid, 1);
            return gp;
        };
        auto& lp = layers_[static_cast<std::size_t>(l)];
        lp.input_gate = gate("i");
        lp.forget_gate = gate("f");
        lp.cell_gate = gate("g");
        lp.output_gate = gate("o");
    }
    head_w_ = params_.add("head.w", hid, 3);
    head_b_ = params_.add("head.b", 3, 1);

    Rng rng(init_seed);
    front_.init(rng);
    for (int l = 0; l < config_.n_layers; ++l) {
        const int in_dim = l == 0 ? config_.features : hid;
        auto& lp = layers_[static_cast<std::size_t>(l)];
        for (GateParams* gp : {&lp.input_gate, &lp.forget_gate, &lp.cell_gate, &lp.output_gate}) {
            ParamSet::uniform_fan_in(*gp->w_x, in_dim, rng);
            ParamSet::uniform_fan_in(*gp->w_h, hid, rng);
        }
    }
    ParamSet::uniform_fan_in(*head_w_, hid, rng);
}

void LstmNet::forward_sample(const Eigen::MatrixXd& x, bool training, Rng* rng,
                             LstmSampleTrace& t) const {
    const int L = config_.lookback;
    const int hid = config_.hidden_size;
    const double p = config_.dropout;
    const bool drop = training && p > 0.0 && config_.n_layers > 1;
    if (drop && !rng) throw LogicError("lstm forward: dropout enabled but no RNG supplied");

    front_.forward(x, t.front);

    Eigen::MatrixXd layer_in = t.front.x_mixed;  // L x F
    t.layers.resize(static_cast<std::size_t>(config_.n_layers));
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& lp = layers_[l];
        auto& lt = t.layers[l];

        if (l > 0 && drop) {
            lt.drop_mask.resize(layer_in.rows(), layer_in.cols());
            const double keep = 1.0 - p;
            for (Eigen::Index j = 0; j < layer_in.cols(); ++j) {
                for (Eigen::Index i = 0; i < layer_in.rows(); ++i) {
                    lt.drop_mask(i, j) = rng->uniform() < p ? 0.0 : 1.0 / keep;
                }
            }
            layer_in = layer_in.cwiseProduct(lt.drop_mask);
        }
        lt.input = layer_in;

        lt.gate_i.resize(L, hid);
        lt.gate_f.resize(L, hid);
        lt.gate_g.resize(L, hid);
        lt.gate_o.resize(L, hid);
        lt.cell.resize(L, hid);
        lt.cell_tanh.resize(L, hid);
        lt.hidden.resize(L, hid);

        Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(hid);
        Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(hid);
        for (int step = 0; step < L; ++step) {
            const Eigen::VectorXd xt = lt.input.row(step).transpose();
            auto pre = [&](const GateParams& g) -> Eigen::VectorXd {
                return g.w_x->value.transpose() * xt + g.w_h->value.transpose() * h_prev +
                       g.b->value.col(0);
            };
            Eigen::VectorXd ai = pre(lp.input_gate);
            Eigen::VectorXd af = pre(lp.forget_gate);
            Eigen::VectorXd ag = pre(lp.cell_gate);
            Eigen::VectorXd ao = pre(lp.output_gate);
            for (int j = 0; j < hid; ++j) {
                ai[j] = sigmoid(ai[j]);
                af[j] = sigmoid(af[j]);
                ag[j] = std::tanh(ag[j]);
                ao[j] = sigmoid(ao[j]);
            }
            const Eigen::VectorXd c = af.cwiseProduct(c_prev) + ai.cwiseProduct(ag);
            const Eigen::VectorXd ct = c.array().tanh().matrix();
            const Eigen::VectorXd h = ao.cwiseProduct(ct);

            lt.gate_i.row(step) = ai.transpose();
            lt.gate_f.row(step) = af.transpose();
            lt.gate_g.row(step) = ag.transpose();
            lt.gate_o.row(step) = ao.transpose();
            lt.cell.row(step) = c.transpose();
            lt.cell_tanh.row(step) = ct.transpose();
            lt.hidden.row(step) = h.transpose();
            h_prev = h;
            c_prev = c;
        }
        layer_in = lt.hidden;
    }

    const Eigen::VectorXd last = t.layers.back().hidden.row(L - 1).transpose();
    t.logits = head_w_->value.transpose() * last + head_b_->value.col(0);
    const double mx = t.logits.maxCoeff();
    Eigen::Vector3d e = (t.logits.array() - mx).exp();
    t.probs = e / e.sum();
}

LstmForwardTrace LstmNet::forward(const std::vector<Eigen::MatrixXd>& batch, bool training,
                                  Rng* dropout_rng) const {
    LstmForwardTrace trace;
    trace.training = training;
    trace.samples.resize(batch.size());
    trace.logits.resize(static_cast<Eigen::Index>(batch.size()), 3);
    trace.probs.resize(static_cast<Eigen::Index>(batch.size()), 3);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        forward_sample(batch[i], training, dropout_rng, trace.samples[i]);
        trace.logits.row(static_cast<Eigen::Index>(i)) = trace.samples[i].logits.transpose();
        trace.probs.row(static_cast<Eigen::Index>(i)) = trace.samples[i].probs.transpose();
    }
    return trace;
}

void LstmNet::backward_sample(const LstmSampleTrace& t, const Eigen::Vector3d& dlogits) {
    const int L = config_.lookback;
    const int hid = config_.hidden_size;

    const Eigen::VectorXd last = t.layers.back().hidden.row(L - 1).transpose();
    head_w_->grad.noalias() += last * dlogits.transpose();
    head_b_->grad.col(0) += dlogits;

    // gradient flowing into each layer's hidden sequence (starts with the
    // head contribution at the last step of the top layer)
    Eigen::MatrixXd d_hidden_seq = Eigen::MatrixXd::Zero(L, hid);
    d_hidden_seq.row(L - 1) = (head_w_->value * dlogits).transpose();

    for (std::size_t l = layers_.size(); l-- > 0;) {
        const auto& lp = layers_[l];
        const auto& lt = t.layers[l];
        const int in_dim = static_cast<int>(lt.input.cols());

        Eigen::MatrixXd d_input_seq = Eigen::MatrixXd::Zero(L, in_dim);
        Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(hid);
        Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(hid);

        for (int step = L - 1; step >= 0; --step) {
            const Eigen::VectorXd dh =
                d_hidden_seq.row(step).transpose() + dh_next;
            const Eigen::ArrayXd i = lt.gate_i.row(step).transpose().array();
            const Eigen::ArrayXd f = lt.gate_f.row(step).transpose().array();
            const Eigen::ArrayXd g = lt.gate_g.row(step).transpose().array();
            const Eigen::ArrayXd o = lt.gate_o.row(step).transpose().array();
            const Eigen::ArrayXd ct = lt.cell_tanh.row(step).transpose().array();

            const Eigen::ArrayXd d_o = dh.array() * ct;
            Eigen::ArrayXd dc = dh.array() * o * (1.0 - ct.square()) + dc_next.array();

            Eigen::ArrayXd c_prev = Eigen::ArrayXd::Zero(hid);
            if (step > 0) c_prev = lt.cell.row(step - 1).transpose().array();
            const Eigen::ArrayXd d_i = dc * g;
            const Eigen::ArrayXd d_g = dc * i;
            const Eigen::ArrayXd d_f = dc * c_prev;
            dc_next = (dc * f).matrix();

            // pre-activation gradients
            const Eigen::VectorXd da_i = (d_i * i * (1.0 - i)).matrix();
            const Eigen::VectorXd da_f = (d_f * f * (1.0 - f)).matrix();
            const Eigen::VectorXd da_g = (d_g * (1.0 - g.square())).matrix();
            const Eigen::VectorXd da_o = (d_o * o * (1.0 - o)).matrix();

            const Eigen::VectorXd xt = lt.input.row(step).transpose();
            Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(hid);
            if (step > 0) h_prev = lt.hidden.row(step - 1).transpose();

            auto accumulate = [&](const GateParams& gp, const Eigen::VectorXd& da) {
                gp.w_x->grad.noalias() += xt * da.transpose();
                gp.w_h->grad.noalias() += h_prev * da.transpose();
                gp.b->grad.col(0) += da;
            };
            accumulate(lp.input_gate, da_i);
            accumulate(lp.forget_gate, da_f);
            accumulate(lp.cell_gate, da_g);
            accumulate(lp.output_gate, da_o);

            d_input_seq.row(step) =
                (lp.input_gate.w_x->value * da_i + lp.forget_gate.w_x->value * da_f +
                 lp.cell_gate.w_x->value * da_g + lp.output_gate.w_x->value * da_o)
                    .transpose();
            dh_next = lp.input_gate.w_h->value * da_i + lp.forget_gate.w_h->value * da_f +
                      lp.cell_gate.w_h->value * da_g + lp.output_gate.w_h->value * da_o;
        }

        if (lt.drop_mask.size()) d_input_seq = d_input_seq.cwiseProduct(lt.drop_mask);
        d_hidden_seq = std::move(d_input_seq);
    }

    // d_hidden_seq now holds the gradient w.r.t. x_mixed
    front_.backward(d_hidden_seq, t.front, nullptr);
}

void LstmNet::backward(const LstmForwardTrace& trace, const Eigen::MatrixXd& d_logits) {
    if (trace.samples.empty()) throw LogicError("lstm backward: no retained forward trace");
    if (d_logits.rows() != static_cast<Eigen::Index>(trace.samples.size()) || d_logits.cols() != 3) {
        throw LogicError("lstm backward: d_logits shape mismatch");
    }
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        backward_sample(trace.samples[i], d_logits.row(static_cast<Eigen::Index>(i)).transpose());
    }
}

}  // namespace mineroi
