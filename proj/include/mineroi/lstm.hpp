#pragma once

#include <Eigen/Core>
#include <vector>

#include "mineroi/model.hpp"

namespace mineroi {

// Baseline classifier: the same spectral + channel-mixing front end, then
// stacked unidirectional LSTM layers read out at the last time step into a
// fully connected head.
struct LstmConfig {
    int lookback = 30;
    int features = 14;
    int hidden_size = 16;
    int n_layers = 2;
    double dropout = 0.3;  // applied between stacked layers
    int reduction = 4;
    SpectralMode spectral_mode = SpectralMode::PerBin;

    void validate() const;
};

struct LstmLayerTrace {
    Eigen::MatrixXd input;                     // L x in_dim (post inter-layer dropout)
    Eigen::MatrixXd gate_i, gate_f, gate_g, gate_o;  // L x hidden, post-activation
    Eigen::MatrixXd cell, cell_tanh, hidden;         // L x hidden
    Eigen::MatrixXd drop_mask;  // mask applied to this layer's input (empty when none)
};

struct LstmSampleTrace {
    FrontEndTrace front;
    std::vector<LstmLayerTrace> layers;
    Eigen::Vector3d logits;
    Eigen::Vector3d probs;
};

struct LstmForwardTrace {
    std::vector<LstmSampleTrace> samples;
    Eigen::MatrixXd logits;  // B x 3
    Eigen::MatrixXd probs;
    bool training = false;
};

class LstmNet {
public:
    LstmNet(const LstmConfig& config, std::uint64_t init_seed);
    LstmNet(const LstmNet&) = delete;
    LstmNet& operator=(const LstmNet&) = delete;

    const LstmConfig& config() const { return config_; }
    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }

    LstmForwardTrace forward(const std::vector<Eigen::MatrixXd>& batch, bool training,
                             Rng* dropout_rng) const;
    void backward(const LstmForwardTrace& trace, const Eigen::MatrixXd& d_logits);

private:
    void forward_sample(const Eigen::MatrixXd& x, bool training, Rng* rng,
                        LstmSampleTrace& t) const;
    void backward_sample(const LstmSampleTrace& t, const Eigen::Vector3d& dlogits);

    LstmConfig config_;
    ParamSet params_;
    SpectralChannelMix front_;

    struct GateParams {
        Param *w_x, *w_h, *b;
    };
    struct LayerParams {
        GateParams input_gate, forget_gate, cell_gate, output_gate;
    };
    std::vector<LayerParams> layers_;
    Param *head_w_, *head_b_;
};

}  // namespace mineroi
