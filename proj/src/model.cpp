#include "mineroi/model.hpp"

#include <cmath>
#include <numbers>

#include "mineroi/error.hpp"

namespace mineroi {

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_grad(double x) {
    const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    return cdf + x * pdf;
}

std::string to_string(SpectralMode mode) {
    return mode == SpectralMode::PerBin ? "per_bin" : "literal";
}

SpectralMode spectral_mode_from_string(const std::string& s) {
    if (s == "per_bin") return SpectralMode::PerBin;
    if (s == "literal") return SpectralMode::Literal;
    throw ConfigError("unknown spectral_mode '" + s + "' (expected per_bin or literal)");
}

void ModelConfig::validate() const {
    if (lookback < 2) throw ConfigError("model: lookback must be >= 2");
    if (features < 1) throw ConfigError("model: features must be >= 1");
    if (d_model < 1 || n_heads < 1 || n_layers < 1 || d_ff < 1) {
        throw ConfigError("model: dimensions must be positive");
    }
    if (d_model % n_heads != 0) {
        throw ConfigError("model: d_model (" + std::to_string(d_model) +
                          ") must be divisible by n_heads (" + std::to_string(n_heads) + ")");
    }
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("model: dropout must be in [0, 1)");
    if (reduction < 1) throw ConfigError("model: reduction must be >= 1");
    if (head_hidden < 0) throw ConfigError("model: head_hidden must be >= 0");
}

namespace {

// Inverted dropout mask; scale kept in the mask so apply/backward are plain
// elementwise products.
Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng) {
    const double keep = 1.0 - p;
    Eigen::MatrixXd mask(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            mask(i, j) = rng.uniform() < p ? 0.0 : 1.0 / keep;
        }
    }
    return mask;
}

void softmax_rows(Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double mx = m.row(i).maxCoeff();
        m.row(i) = (m.row(i).array() - mx).exp();
        m.row(i) /= m.row(i).sum();
    }
}

struct LayerNormResult {
    Eigen::MatrixXd out;
};

constexpr double kLayerNormEps = 1e-5;

Eigen::MatrixXd layer_norm(const Eigen::MatrixXd& x, const Param& gain, const Param& bias,
                           LayerNormTrace& trace) {
    const Eigen::Index d = x.cols();
    trace.xhat.resize(x.rows(), d);
    trace.inv_std.resize(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double mean = x.row(i).mean();
        const double var = (x.row(i).array() - mean).square().sum() / static_cast<double>(d);
        const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
        trace.inv_std[i] = inv;
        trace.xhat.row(i) = (x.row(i).array() - mean) * inv;
    }
    return (trace.xhat.array().rowwise() * gain.value.col(0).transpose().array()).matrix().rowwise() +
           bias.value.col(0).transpose();
}

// Backward through y = xhat * gain + bias; returns dx and accumulates dgain/dbias.
Eigen::MatrixXd layer_norm_backward(const Eigen::MatrixXd& dy, const LayerNormTrace& trace,
                                    Param& gain, Param& bias) {
    const Eigen::Index d = trace.xhat.cols();
    gain.grad.col(0) += (dy.array() * trace.xhat.array()).colwise().sum().transpose().matrix();
    bias.grad.col(0) += dy.colwise().sum().transpose();

    Eigen::MatrixXd dx(dy.rows(), d);
    for (Eigen::Index i = 0; i < dy.rows(); ++i) {
        const Eigen::ArrayXd dxhat = dy.row(i).transpose().array() * gain.value.col(0).array();
        const double mean_dxhat = dxhat.mean();
        const double mean_dxhat_xhat = (dxhat * trace.xhat.row(i).transpose().array()).mean();
        dx.row(i) = (trace.inv_std[i] *
                     (dxhat - mean_dxhat - trace.xhat.row(i).transpose().array() * mean_dxhat_xhat))
                        .transpose();
    }
    return dx;
}

}  // namespace

// ---------------------------------------------------------------------------
// front end

SpectralChannelMix::SpectralChannelMix(int lookback, int features, int reduction,
                                       SpectralMode mode, ParamSet& params,
                                       const std::string& prefix)
    : lookback_(lookback), features_(features), mode_(mode), plan_(lookback) {
    const int weight_cols = mode == SpectralMode::PerBin ? plan_.bins() : 1;
    w_re_ = params.add(prefix + "spectral.w_re", features, weight_cols);
    w_im_ = params.add(prefix + "spectral.w_im", features, weight_cols);
    const int bottleneck = std::max(1, features / reduction);
    mix_w1_ = params.add(prefix + "mix.w1", bottleneck, features);
    mix_w2_ = params.add(prefix + "mix.w2", features, bottleneck);
}

void SpectralChannelMix::init(Rng& rng) {
    w_re_->value.setOnes();  // identity filter at start
    w_im_->value.setZero();
    ParamSet::uniform_fan_in(*mix_w1_, features_, rng);
    ParamSet::uniform_fan_in(*mix_w2_, mix_w1_->value.rows(), rng);
}

void SpectralChannelMix::forward(const Eigen::MatrixXd& x, FrontEndTrace& t) const {
    if (x.rows() != lookback_ || x.cols() != features_) {
        throw LogicError("front end: window shape mismatch");
    }
    if (!x.allFinite()) throw DomainError("front end: non-finite input");
    t.x = x;

    if (mode_ == SpectralMode::PerBin) {
        plan_.rfft(x, t.spec_re, t.spec_im);  // bins x F
        const Eigen::MatrixXd wre = w_re_->value.transpose();  // bins x F
        const Eigen::MatrixXd wim = w_im_->value.transpose();
        const Eigen::MatrixXd yre =
            (wre.array() * t.spec_re.array() - wim.array() * t.spec_im.array()).matrix();
        const Eigen::MatrixXd yim =
            (wre.array() * t.spec_im.array() + wim.array() * t.spec_re.array()).matrix();
        t.x_spectral = plan_.irfft(yre, yim);
    } else {
        // one weight per feature broadcast over every bin of the full
        // transform: IFFT(W .* FFT(x)) == W .* (IFFT(FFT(x))), then Re(.)
        plan_.roundtrip(x, t.spec_re, t.spec_im);  // L x F each
        t.x_spectral =
            (t.spec_re.array().rowwise() * w_re_->value.col(0).transpose().array()).matrix() -
            (t.spec_im.array().rowwise() * w_im_->value.col(0).transpose().array()).matrix();
    }

    // squeeze to the temporal mean, re-weight features through the bottleneck
    t.z = t.x_spectral.colwise().mean();
    t.mix_pre = mix_w1_->value * t.z;
    t.mix_hidden.resize(t.mix_pre.size());
    for (Eigen::Index i = 0; i < t.mix_pre.size(); ++i) t.mix_hidden[i] = gelu(t.mix_pre[i]);
    t.s = mix_w2_->value * t.mix_hidden;
    t.x_mixed = (t.x_spectral.array().rowwise() * t.s.transpose().array()).matrix();
}

void SpectralChannelMix::backward(const Eigen::MatrixXd& d_x_mixed, const FrontEndTrace& t,
                                  Eigen::MatrixXd* dx) const {
    // channel mixing
    const Eigen::VectorXd ds =
        (d_x_mixed.array() * t.x_spectral.array()).colwise().sum().transpose();
    Eigen::MatrixXd d_spectral =
        (d_x_mixed.array().rowwise() * t.s.transpose().array()).matrix();

    mix_w2_->grad.noalias() += ds * t.mix_hidden.transpose();
    Eigen::VectorXd d_hidden = mix_w2_->value.transpose() * ds;
    for (Eigen::Index i = 0; i < d_hidden.size(); ++i) d_hidden[i] *= gelu_grad(t.mix_pre[i]);
    mix_w1_->grad.noalias() += d_hidden * t.z.transpose();
    const Eigen::VectorXd dz = mix_w1_->value.transpose() * d_hidden;
    d_spectral.rowwise() += dz.transpose() / static_cast<double>(lookback_);

    // spectral filter
    if (mode_ == SpectralMode::PerBin) {
        Eigen::MatrixXd u, v;  // gradients w.r.t. the weighted spectrum, bins x F
        plan_.irfft_adjoint(d_spectral, u, v);
        const Eigen::MatrixXd wre = w_re_->value.transpose();
        const Eigen::MatrixXd wim = w_im_->value.transpose();
        w_re_->grad +=
            (u.array() * t.spec_re.array() + v.array() * t.spec_im.array()).matrix().transpose();
        w_im_->grad +=
            (v.array() * t.spec_re.array() - u.array() * t.spec_im.array()).matrix().transpose();
        if (dx) {
            const Eigen::MatrixXd d_sre =
                (u.array() * wre.array() + v.array() * wim.array()).matrix();
            const Eigen::MatrixXd d_sim =
                (v.array() * wre.array() - u.array() * wim.array()).matrix();
            *dx = plan_.rfft_adjoint(d_sre, d_sim);
        }
    } else {
        w_re_->grad.col(0) +=
            (d_spectral.array() * t.spec_re.array()).colwise().sum().transpose().matrix();
        w_im_->grad.col(0) -=
            (d_spectral.array() * t.spec_im.array()).colwise().sum().transpose().matrix();
        if (dx) {
            // the full-transform round trip is the identity, so the input
            // gradient is just the real weight applied to the upstream one
            *dx = (d_spectral.array().rowwise() * w_re_->value.col(0).transpose().array()).matrix();
        }
    }
}

Eigen::MatrixXd SpectralChannelMix::spectral_forward(const Eigen::MatrixXd& x) const {
    FrontEndTrace t;
    forward(x, t);
    return t.x_spectral;
}

// ---------------------------------------------------------------------------
// MineROI-Net

namespace {
ModelConfig validated(ModelConfig c) {
    c.validate();
    return c;
}
}  // namespace

MineroiNet::MineroiNet(const ModelConfig& config, std::uint64_t init_seed)
    : config_(validated(config)),
      front_(config_.lookback, config_.features, config_.reduction, config_.spectral_mode,
             params_) {
    const int d = config_.d_model;
    const int hh = config_.head_hidden_dim();

    proj_w_ = params_.add("proj.w", config_.features, d);
    proj_b_ = params_.add("proj.b", d, 1);

    layers_.resize(static_cast<std::size_t>(config_.n_layers));
    for (int l = 0; l < config_.n_layers; ++l) {
        const std::string p = "enc" + std::to_string(l) + ".";
        auto& lp = layers_[static_cast<std::size_t>(l)];
        lp.wq = params_.add(p + "attn.wq", d, d);
        lp.bq = params_.add(p + "attn.bq", d, 1);
        lp.wk = params_.add(p + "attn.wk", d, d);
        lp.bk = params_.add(p + "attn.bk", d, 1);
        lp.wv = params_.add(p + "attn.wv", d, d);
        lp.bv = params_.add(p + "attn.bv", d, 1);
        lp.wo = params_.add(p + "attn.wo", d, d);
        lp.bo = params_.add(p + "attn.bo", d, 1);
        lp.ln1_g = params_.add(p + "ln1.gain", d, 1);
        lp.ln1_b = params_.add(p + "ln1.bias", d, 1);
        lp.ffn_w1 = params_.add(p + "ffn.w1", d, config_.d_ff);
        lp.ffn_b1 = params_.add(p + "ffn.b1", config_.d_ff, 1);
        lp.ffn_w2 = params_.add(p + "ffn.w2", config_.d_ff, d);
        lp.ffn_b2 = params_.add(p + "ffn.b2", d, 1);
        lp.ln2_g = params_.add(p + "ln2.gain", d, 1);
        lp.ln2_b = params_.add(p + "ln2.bias", d, 1);
    }

    head_w1_ = params_.add("head.w1", d, hh);
    head_b1_ = params_.add("head.b1", hh, 1);
    head_w2_ = params_.add("head.w2", hh, 3);
    head_b2_ = params_.add("head.b2", 3, 1);

    // sinusoidal positional table
    pe_.resize(config_.lookback, d);
    for (int t = 0; t < config_.lookback; ++t) {
        for (int i = 0; i < d; ++i) {
            const double exponent = static_cast<double>(2 * (i / 2)) / static_cast<double>(d);
            const double angle = static_cast<double>(t) / std::pow(10000.0, exponent);
            pe_(t, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
        }
    }

    // deterministic init: weights uniform +-sqrt(1/fan_in), biases zero,
    // LayerNorm gain 1, spectral filter starts as the identity
    Rng rng(init_seed);
    front_.init(rng);
    ParamSet::uniform_fan_in(*proj_w_, config_.features, rng);
    for (auto& lp : layers_) {
        ParamSet::uniform_fan_in(*lp.wq, d, rng);
        ParamSet::uniform_fan_in(*lp.wk, d, rng);
        ParamSet::uniform_fan_in(*lp.wv, d, rng);
        ParamSet::uniform_fan_in(*lp.wo, d, rng);
        lp.ln1_g->value.setOnes();
        lp.ln2_g->value.setOnes();
        ParamSet::uniform_fan_in(*lp.ffn_w1, d, rng);
        ParamSet::uniform_fan_in(*lp.ffn_w2, config_.d_ff, rng);
    }
    ParamSet::uniform_fan_in(*head_w1_, d, rng);
    ParamSet::uniform_fan_in(*head_w2_, hh, rng);
}

void MineroiNet::forward_sample(const Eigen::MatrixXd& x, bool training, Rng* rng,
                                SampleTrace& t) const {
    const int d = config_.d_model;
    const int heads = config_.n_heads;
    const int dh = d / heads;
    const double p = config_.dropout;
    const bool drop = training && p > 0.0;
    if (drop && !rng) throw LogicError("forward: dropout enabled but no RNG supplied");

    front_.forward(x, t.front);

    // projection + positional encoding
    t.z0 = t.front.x_mixed * proj_w_->value;
    t.z0.rowwise() += proj_b_->value.col(0).transpose();
    t.z0 += pe_;
    if (drop) {
        t.z0_mask = dropout_mask(t.z0.rows(), t.z0.cols(), p, *rng);
        t.z0 = t.z0.cwiseProduct(t.z0_mask);
    }

    Eigen::MatrixXd z = t.z0;
    t.layers.resize(static_cast<std::size_t>(config_.n_layers));
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& lp = layers_[l];
        auto& lt = t.layers[l];
        lt.input = z;

        lt.q = z * lp.wq->value;
        lt.q.rowwise() += lp.bq->value.col(0).transpose();
        lt.k = z * lp.wk->value;
        lt.k.rowwise() += lp.bk->value.col(0).transpose();
        lt.v = z * lp.wv->value;
        lt.v.rowwise() += lp.bv->value.col(0).transpose();

        lt.ctx.resize(z.rows(), d);
        lt.attn.resize(static_cast<std::size_t>(heads));
        const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
        for (int h = 0; h < heads; ++h) {
            const auto qh = lt.q.middleCols(h * dh, dh);
            const auto kh = lt.k.middleCols(h * dh, dh);
            const auto vh = lt.v.middleCols(h * dh, dh);
            Eigen::MatrixXd scores = qh * kh.transpose() * scale;
            softmax_rows(scores);
            lt.attn[static_cast<std::size_t>(h)] = scores;
            lt.ctx.middleCols(h * dh, dh).noalias() = scores * vh;
        }

        lt.attn_out = lt.ctx * lp.wo->value;
        lt.attn_out.rowwise() += lp.bo->value.col(0).transpose();
        if (drop) {
            lt.attn_mask = dropout_mask(lt.attn_out.rows(), lt.attn_out.cols(), p, *rng);
            lt.attn_out = lt.attn_out.cwiseProduct(lt.attn_mask);
        }

        lt.ln1_out = layer_norm(z + lt.attn_out, *lp.ln1_g, *lp.ln1_b, lt.ln1);

        lt.ffn_pre = lt.ln1_out * lp.ffn_w1->value;
        lt.ffn_pre.rowwise() += lp.ffn_b1->value.col(0).transpose();
        lt.ffn_act = lt.ffn_pre.cwiseMax(0.0);
        if (drop) {
            lt.ffn_mask = dropout_mask(lt.ffn_act.rows(), lt.ffn_act.cols(), p, *rng);
            lt.ffn_act = lt.ffn_act.cwiseProduct(lt.ffn_mask);
        }
        Eigen::MatrixXd ffn_out = lt.ffn_act * lp.ffn_w2->value;
        ffn_out.rowwise() += lp.ffn_b2->value.col(0).transpose();

        lt.ln2_out = layer_norm(lt.ln1_out + ffn_out, *lp.ln2_g, *lp.ln2_b, lt.ln2);
        z = lt.ln2_out;
    }

    // mean pooling over time, then the two-layer head
    t.pooled = z.colwise().mean().transpose();
    t.head_pre = head_w1_->value.transpose() * t.pooled + head_b1_->value.col(0);
    t.head_hidden.resize(t.head_pre.size());
    for (Eigen::Index i = 0; i < t.head_pre.size(); ++i) t.head_hidden[i] = gelu(t.head_pre[i]);
    if (drop) {
        t.head_mask = dropout_mask(t.head_hidden.size(), 1, p, *rng).col(0);
        t.head_hidden = t.head_hidden.cwiseProduct(t.head_mask);
    }
    t.logits = head_w2_->value.transpose() * t.head_hidden + head_b2_->value.col(0);

    const double mx = t.logits.maxCoeff();
    Eigen::Vector3d e = (t.logits.array() - mx).exp();
    t.probs = e / e.sum();
}

ForwardTrace MineroiNet::forward(const std::vector<Eigen::MatrixXd>& batch, bool training,
                                 Rng* dropout_rng) const {
    ForwardTrace trace;
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

void MineroiNet::backward_sample(const SampleTrace& t, const Eigen::Vector3d& dlogits,
                                 Eigen::MatrixXd* dx) const {
    const int d = config_.d_model;
    const int heads = config_.n_heads;
    const int dh = d / heads;
    const int L = config_.lookback;

    // head
    head_w2_->grad.noalias() += t.head_hidden * dlogits.transpose();
    head_b2_->grad.col(0) += dlogits;
    Eigen::VectorXd d_hidden = head_w2_->value * dlogits;
    if (t.head_mask.size()) d_hidden = d_hidden.cwiseProduct(t.head_mask);
    for (Eigen::Index i = 0; i < d_hidden.size(); ++i) d_hidden[i] *= gelu_grad(t.head_pre[i]);
    head_w1_->grad.noalias() += t.pooled * d_hidden.transpose();
    head_b1_->grad.col(0) += d_hidden;
    const Eigen::VectorXd d_pooled = head_w1_->value * d_hidden;

    Eigen::MatrixXd dz(L, d);
    dz.rowwise() = d_pooled.transpose() / static_cast<double>(L);

    for (std::size_t li = layers_.size(); li-- > 0;) {
        const auto& lp = layers_[li];
        const auto& lt = t.layers[li];

        // ln2
        Eigen::MatrixXd d_res2 = layer_norm_backward(dz, lt.ln2, *lp.ln2_g, *lp.ln2_b);
        // res2 = ln1_out + ffn_out
        Eigen::MatrixXd d_ffn_out = d_res2;
        Eigen::MatrixXd d_ln1_out = d_res2;

        // ffn
        lp.ffn_w2->grad.noalias() += lt.ffn_act.transpose() * d_ffn_out;
        lp.ffn_b2->grad.col(0) += d_ffn_out.colwise().sum().transpose();
        Eigen::MatrixXd d_act = d_ffn_out * lp.ffn_w2->value.transpose();
        if (lt.ffn_mask.size()) d_act = d_act.cwiseProduct(lt.ffn_mask);
        Eigen::MatrixXd d_pre =
            (d_act.array() * (lt.ffn_pre.array() > 0.0).cast<double>()).matrix();
        lp.ffn_w1->grad.noalias() += lt.ln1_out.transpose() * d_pre;
        lp.ffn_b1->grad.col(0) += d_pre.colwise().sum().transpose();
        d_ln1_out.noalias() += d_pre * lp.ffn_w1->value.transpose();

        // ln1
        Eigen::MatrixXd d_res1 = layer_norm_backward(d_ln1_out, lt.ln1, *lp.ln1_g, *lp.ln1_b);
        // res1 = input + attn_out
        Eigen::MatrixXd d_attn_out = d_res1;
        Eigen::MatrixXd d_input = d_res1;

        if (lt.attn_mask.size()) d_attn_out = d_attn_out.cwiseProduct(lt.attn_mask);
        lp.wo->grad.noalias() += lt.ctx.transpose() * d_attn_out;
        lp.bo->grad.col(0) += d_attn_out.colwise().sum().transpose();
        Eigen::MatrixXd d_ctx = d_attn_out * lp.wo->value.transpose();

        Eigen::MatrixXd dq(L, d), dk(L, d), dv(L, d);
        const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
        for (int h = 0; h < heads; ++h) {
            const Eigen::MatrixXd& a = lt.attn[static_cast<std::size_t>(h)];
            const auto vh = lt.v.middleCols(h * dh, dh);
            const auto qh = lt.q.middleCols(h * dh, dh);
            const auto kh = lt.k.middleCols(h * dh, dh);
            const auto d_ctx_h = d_ctx.middleCols(h * dh, dh);

            Eigen::MatrixXd da = d_ctx_h * vh.transpose();  // L x L
            dv.middleCols(h * dh, dh).noalias() = a.transpose() * d_ctx_h;

            // softmax backward, row-wise
            Eigen::MatrixXd dscores(a.rows(), a.cols());
            for (Eigen::Index r = 0; r < a.rows(); ++r) {
                const double dot = da.row(r).dot(a.row(r));
                dscores.row(r) = (a.row(r).array() * (da.row(r).array() - dot)).matrix();
            }
            dscores *= scale;
            dq.middleCols(h * dh, dh).noalias() = dscores * kh;
            dk.middleCols(h * dh, dh).noalias() = dscores.transpose() * qh;
        }

        lp.wq->grad.noalias() += lt.input.transpose() * dq;
        lp.bq->grad.col(0) += dq.colwise().sum().transpose();
        lp.wk->grad.noalias() += lt.input.transpose() * dk;
        lp.bk->grad.col(0) += dk.colwise().sum().transpose();
        lp.wv->grad.noalias() += lt.input.transpose() * dv;
        lp.bv->grad.col(0) += dv.colwise().sum().transpose();

        d_input.noalias() += dq * lp.wq->value.transpose();
        d_input.noalias() += dk * lp.wk->value.transpose();
        d_input.noalias() += dv * lp.wv->value.transpose();
        dz = std::move(d_input);
    }

    // projection (+ dropout after PE)
    if (t.z0_mask.size()) dz = dz.cwiseProduct(t.z0_mask);
    proj_w_->grad.noalias() += t.front.x_mixed.transpose() * dz;
    proj_b_->grad.col(0) += dz.colwise().sum().transpose();
    Eigen::MatrixXd d_mixed = dz * proj_w_->value.transpose();

    front_.backward(d_mixed, t.front, dx);
}

void MineroiNet::backward(const ForwardTrace& trace, const Eigen::MatrixXd& d_logits) {
    if (trace.samples.empty()) throw LogicError("backward: no retained forward trace");
    if (d_logits.rows() != static_cast<Eigen::Index>(trace.samples.size()) || d_logits.cols() != 3) {
        throw LogicError("backward: d_logits shape mismatch");
    }
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        backward_sample(trace.samples[i], d_logits.row(static_cast<Eigen::Index>(i)).transpose(),
                        nullptr);
    }
}

Eigen::MatrixXd MineroiNet::spectral_forward(const Eigen::MatrixXd& x) const {
    return front_.spectral_forward(x);
}

void MineroiNet::channel_mix_forward(const Eigen::MatrixXd& x_spectral, Eigen::VectorXd& z,
                                     Eigen::VectorXd& s, Eigen::MatrixXd& x_mixed) const {
    // shares the front end's weights; replays the mixing stage only
    const Param* w1 = params_.find("mix.w1");
    const Param* w2 = params_.find("mix.w2");
    z = x_spectral.colwise().mean();
    Eigen::VectorXd pre = w1->value * z;
    Eigen::VectorXd hidden(pre.size());
    for (Eigen::Index i = 0; i < pre.size(); ++i) hidden[i] = gelu(pre[i]);
    s = w2->value * hidden;
    x_mixed = (x_spectral.array().rowwise() * s.transpose().array()).matrix();
}

Eigen::MatrixXd MineroiNet::encoder_forward(const Eigen::MatrixXd& x_mixed) const {
    const int d = config_.d_model;
    Eigen::MatrixXd z = x_mixed * proj_w_->value;
    z.rowwise() += proj_b_->value.col(0).transpose();
    z += pe_;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& lp = layers_[l];
        const int heads = config_.n_heads;
        const int dh = d / heads;
        Eigen::MatrixXd q = z * lp.wq->value;
        q.rowwise() += lp.bq->value.col(0).transpose();
        Eigen::MatrixXd k = z * lp.wk->value;
        k.rowwise() += lp.bk->value.col(0).transpose();
        Eigen::MatrixXd v = z * lp.wv->value;
        v.rowwise() += lp.bv->value.col(0).transpose();
        Eigen::MatrixXd ctx(z.rows(), d);
        const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
        for (int h = 0; h < heads; ++h) {
            Eigen::MatrixXd scores =
                q.middleCols(h * dh, dh) * k.middleCols(h * dh, dh).transpose() * scale;
            softmax_rows(scores);
            ctx.middleCols(h * dh, dh).noalias() = scores * v.middleCols(h * dh, dh);
        }
        Eigen::MatrixXd attn_out = ctx * lp.wo->value;
        attn_out.rowwise() += lp.bo->value.col(0).transpose();
        LayerNormTrace ln1;
        Eigen::MatrixXd ln1_out = layer_norm(z + attn_out, *lp.ln1_g, *lp.ln1_b, ln1);
        Eigen::MatrixXd pre = ln1_out * lp.ffn_w1->value;
        pre.rowwise() += lp.ffn_b1->value.col(0).transpose();
        Eigen::MatrixXd ffn_out = pre.cwiseMax(0.0) * lp.ffn_w2->value;
        ffn_out.rowwise() += lp.ffn_b2->value.col(0).transpose();
        LayerNormTrace ln2;
        z = layer_norm(ln1_out + ffn_out, *lp.ln2_g, *lp.ln2_b, ln2);
    }
    return z;
}

}  // namespace mineroi
