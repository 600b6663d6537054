#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "mineroi/dft.hpp"
#include "mineroi/params.hpp"
#include "mineroi/rng.hpp"

namespace mineroi {

// How the learnable complex spectral weights are shaped.
//   PerBin  — one weight per feature per non-negative frequency bin (default;
//             can suppress individual frequency components).
//   Literal — one weight per feature broadcast across all bins of the full
//             transform; algebraically collapses to Re(W_f) * x and is kept
//             for fidelity testing.
enum class SpectralMode { PerBin, Literal };

std::string to_string(SpectralMode mode);
SpectralMode spectral_mode_from_string(const std::string& s);

struct ModelConfig {
    int lookback = 30;  // L
    int features = 14;  // F
    int d_model = 64;
    int n_heads = 2;
    int n_layers = 2;
    int d_ff = 256;
    double dropout = 0.2;
    int reduction = 4;  // channel-mixing bottleneck ratio
    SpectralMode spectral_mode = SpectralMode::PerBin;
    int head_hidden = 0;  // 0 -> d_model / 2

    void validate() const;  // throws ConfigError
    int bottleneck_dim() const { return std::max(1, features / reduction); }
    int head_hidden_dim() const { return head_hidden > 0 ? head_hidden : std::max(1, d_model / 2); }
    int spectral_bins() const { return lookback / 2 + 1; }
};

// ---------------------------------------------------------------------------
// Shared spectral + channel-mixing front end (used by the Transformer model
// and the recurrent baseline alike).

struct FrontEndTrace {
    Eigen::MatrixXd x;        // input window, L x F
    Eigen::MatrixXd spec_re;  // per_bin: spectrum bins x F; literal: roundtrip real part L x F
    Eigen::MatrixXd spec_im;
    Eigen::MatrixXd x_spectral;  // L x F
    Eigen::VectorXd z;           // temporal mean, F
    Eigen::VectorXd mix_pre;     // W1 z, bottleneck
    Eigen::VectorXd mix_hidden;  // GELU(W1 z)
    Eigen::VectorXd s;           // W2 GELU(W1 z), F
    Eigen::MatrixXd x_mixed;     // L x F
};

class SpectralChannelMix {
public:
    SpectralChannelMix(int lookback, int features, int reduction, SpectralMode mode,
                       ParamSet& params, const std::string& prefix = "");

    void init(Rng& rng);  // spectral weights to 1+0i, mixing to uniform fan-in

    void forward(const Eigen::MatrixXd& x, FrontEndTrace& trace) const;
    // Accumulates parameter gradients; optionally returns the input gradient.
    void backward(const Eigen::MatrixXd& d_x_mixed, const FrontEndTrace& trace,
                  Eigen::MatrixXd* dx) const;

    // Spectral stage alone (exposed for tests and ablation).
    Eigen::MatrixXd spectral_forward(const Eigen::MatrixXd& x) const;

    SpectralMode mode() const { return mode_; }
    const DftPlan& plan() const { return plan_; }

private:
    int lookback_;
    int features_;
    SpectralMode mode_;
    DftPlan plan_;
    Param* w_re_;
    Param* w_im_;
    Param* mix_w1_;
    Param* mix_w2_;
};

// ---------------------------------------------------------------------------
// MineROI-Net: spectral filter, channel mixing, projection + positional
// encoding, post-norm Transformer encoder blocks, mean pooling and a
// two-layer classification head.

struct LayerNormTrace {
    Eigen::MatrixXd xhat;     // normalized input, L x d
    Eigen::VectorXd inv_std;  // per position
};

struct EncoderLayerTrace {
    Eigen::MatrixXd input;  // L x d
    Eigen::MatrixXd q, k, v;
    std::vector<Eigen::MatrixXd> attn;  // per head, L x L softmax rows
    Eigen::MatrixXd ctx;                // concatenated head outputs, L x d
    Eigen::MatrixXd attn_out;           // after output projection + dropout
    Eigen::MatrixXd attn_mask;          // dropout mask (empty when unused)
    LayerNormTrace ln1;
    Eigen::MatrixXd ln1_out;
    Eigen::MatrixXd ffn_pre;  // L x d_ff
    Eigen::MatrixXd ffn_act;  // after ReLU + dropout
    Eigen::MatrixXd ffn_mask;
    LayerNormTrace ln2;
    Eigen::MatrixXd ln2_out;
};

struct SampleTrace {
    FrontEndTrace front;
    Eigen::MatrixXd z0;  // projection + positional encoding (+ dropout), L x d
    Eigen::MatrixXd z0_mask;
    std::vector<EncoderLayerTrace> layers;
    Eigen::VectorXd pooled;  // d
    Eigen::VectorXd head_pre, head_hidden;  // classification head internals
    Eigen::VectorXd head_mask;
    Eigen::Vector3d logits;
    Eigen::Vector3d probs;
};

// Retained activations of one forward pass. Per-sample views carry the
// intermediate tensors (x_spectral, z, s, x_mixed, z0); batch-level logits
// and probabilities are collected as B x 3 matrices.
struct ForwardTrace {
    std::vector<SampleTrace> samples;
    Eigen::MatrixXd logits;  // B x 3
    Eigen::MatrixXd probs;   // B x 3, rows sum to 1
    bool training = false;
};

class MineroiNet {
public:
    MineroiNet(const ModelConfig& config, std::uint64_t init_seed);
    // holds pointers into its own ParamSet
    MineroiNet(const MineroiNet&) = delete;
    MineroiNet& operator=(const MineroiNet&) = delete;

    const ModelConfig& config() const { return config_; }
    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }

    ForwardTrace forward(const std::vector<Eigen::MatrixXd>& batch, bool training,
                         Rng* dropout_rng) const;
    // Accumulates gradients for every parameter. d_logits is B x 3.
    void backward(const ForwardTrace& trace, const Eigen::MatrixXd& d_logits);

    // Single-stage helpers (inference mode), mainly for tests.
    Eigen::MatrixXd spectral_forward(const Eigen::MatrixXd& x) const;
    void channel_mix_forward(const Eigen::MatrixXd& x_spectral, Eigen::VectorXd& z,
                             Eigen::VectorXd& s, Eigen::MatrixXd& x_mixed) const;
    Eigen::MatrixXd encoder_forward(const Eigen::MatrixXd& x_mixed) const;

    const Eigen::MatrixXd& positional_encoding() const { return pe_; }

private:
    void forward_sample(const Eigen::MatrixXd& x, bool training, Rng* rng, SampleTrace& t) const;
    void backward_sample(const SampleTrace& t, const Eigen::Vector3d& dlogits,
                         Eigen::MatrixXd* dx) const;

    ModelConfig config_;
    ParamSet params_;
    SpectralChannelMix front_;
    Eigen::MatrixXd pe_;  // L x d_model sinusoidal table

    Param* proj_w_;
    Param* proj_b_;
    struct LayerParams {
        Param *wq, *bq, *wk, *bk, *wv, *bv, *wo, *bo;
        Param *ln1_g, *ln1_b;
        Param *ffn_w1, *ffn_b1, *ffn_w2, *ffn_b2;
        Param *ln2_g, *ln2_b;
    };
    std::vector<LayerParams> layers_;
    Param *head_w1_, *head_b1_, *head_w2_, *head_b2_;
};

// GELU used by the channel mixer and the head (exact erf form).
double gelu(double x);
double gelu_grad(double x);

}  // namespace mineroi
