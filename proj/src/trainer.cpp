#include "mineroi/trainer.hpp"

#include <numeric>

#include "mineroi/csv.hpp"
#include "mineroi/error.hpp"
#include "mineroi/loss.hpp"
#include "mineroi/metrics.hpp"

namespace mineroi {

std::string to_string(ModelKind kind) {
    return kind == ModelKind::MineroiNet ? "mineroi-net" : "lstm-baseline";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "mineroi-net" || s == "mineroi") return ModelKind::MineroiNet;
    if (s == "lstm-baseline" || s == "lstm") return ModelKind::LstmBaseline;
    throw ConfigError("unknown model kind '" + s + "' (expected mineroi-net or lstm-baseline)");
}

namespace {

nlohmann::json model_config_json(const ModelConfig& c) {
    return nlohmann::json{{"lookback", c.lookback},
                          {"features", c.features},
                          {"d_model", c.d_model},
                          {"n_heads", c.n_heads},
                          {"n_layers", c.n_layers},
                          {"d_ff", c.d_ff},
                          {"dropout", c.dropout},
                          {"reduction", c.reduction},
                          {"spectral_mode", to_string(c.spectral_mode)},
                          {"head_hidden", c.head_hidden}};
}

nlohmann::json lstm_config_json(const LstmConfig& c) {
    return nlohmann::json{{"lookback", c.lookback},
                          {"features", c.features},
                          {"hidden_size", c.hidden_size},
                          {"n_layers", c.n_layers},
                          {"dropout", c.dropout},
                          {"reduction", c.reduction},
                          {"spectral_mode", to_string(c.spectral_mode)}};
}

class MineroiNetwork final : public Network {
public:
    MineroiNetwork(const ModelConfig& config, std::uint64_t seed) : net_(config, seed) {}

    ParamSet& params() override { return net_.params(); }
    const ParamSet& params() const override { return net_.params(); }
    int lookback() const override { return net_.config().lookback; }
    int features() const override { return net_.config().features; }
    std::string arch_tag() const override { return "mineroi-net"; }
    nlohmann::json config_json() const override { return model_config_json(net_.config()); }

    Eigen::MatrixXd forward_logits(const std::vector<Eigen::MatrixXd>& batch, bool training,
                                   Rng* rng) override {
        trace_ = net_.forward(batch, training, rng);
        return trace_->logits;
    }

    void backward_logits(const Eigen::MatrixXd& d_logits) override {
        if (!trace_) throw LogicError("backward without a retained forward trace");
        net_.backward(*trace_, d_logits);
        trace_.reset();
    }

private:
    MineroiNet net_;
    std::optional<ForwardTrace> trace_;
};

class LstmNetwork final : public Network {
public:
    LstmNetwork(const LstmConfig& config, std::uint64_t seed) : net_(config, seed) {}

    ParamSet& params() override { return net_.params(); }
    const ParamSet& params() const override { return net_.params(); }
    int lookback() const override { return net_.config().lookback; }
    int features() const override { return net_.config().features; }
    std::string arch_tag() const override { return "lstm-baseline"; }
    nlohmann::json config_json() const override { return lstm_config_json(net_.config()); }

    Eigen::MatrixXd forward_logits(const std::vector<Eigen::MatrixXd>& batch, bool training,
                                   Rng* rng) override {
        trace_ = net_.forward(batch, training, rng);
        return trace_->logits;
    }

    void backward_logits(const Eigen::MatrixXd& d_logits) override {
        if (!trace_) throw LogicError("backward without a retained forward trace");
        net_.backward(*trace_, d_logits);
        trace_.reset();
    }

private:
    LstmNet net_;
    std::optional<LstmForwardTrace> trace_;
};

}  // namespace

std::unique_ptr<Network> make_mineroi_network(const ModelConfig& config, std::uint64_t init_seed) {
    return std::make_unique<MineroiNetwork>(config, init_seed);
}

std::unique_ptr<Network> make_lstm_network(const LstmConfig& config, std::uint64_t init_seed) {
    return std::make_unique<LstmNetwork>(config, init_seed);
}

void TrainConfig::validate() const {
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (max_epochs < 1) throw ConfigError("train: max_epochs must be >= 1");
    if (label_smoothing < 0.0 || label_smoothing >= 1.0) {
        throw ConfigError("train: label_smoothing must be in [0, 1)");
    }
    if (!(class_weights.array() > 0.0).all()) {
        throw ConfigError("train: class weights must be strictly positive");
    }
    if (selection_metric != "val_macro_f1" && selection_metric != "val_acc" &&
        selection_metric != "final") {
        throw ConfigError("train: unknown selection metric '" + selection_metric + "'");
    }
}

namespace {

struct EvalPass {
    double loss = 0.0;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
};

EvalPass evaluate_pass(Network& net, const std::vector<WindowSample>& samples,
                       const TrainConfig& cfg) {
    EvalPass out;
    std::vector<int> truth;
    std::vector<int> preds;
    double loss_sum = 0.0;

    const std::size_t n = samples.size();
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
        const std::size_t stop = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
        std::vector<Eigen::MatrixXd> xs;
        Eigen::MatrixXd targets(static_cast<Eigen::Index>(stop - start), 3);
        for (std::size_t i = start; i < stop; ++i) {
            xs.push_back(samples[i].x);
            targets.row(static_cast<Eigen::Index>(i - start)) =
                smooth_labels(one_hot3(samples[i].label), cfg.label_smoothing).transpose();
            truth.push_back(samples[i].label);
        }
        const Eigen::MatrixXd logits = net.forward_logits(xs, /*training=*/false, nullptr);
        loss_sum += weighted_cross_entropy(logits, targets, cfg.class_weights) *
                    static_cast<double>(stop - start);
        for (Eigen::Index r = 0; r < logits.rows(); ++r) {
            int arg = 0;
            logits.row(r).maxCoeff(&arg);
            preds.push_back(arg);
        }
    }

    out.loss = loss_sum / static_cast<double>(n);
    const ConfusionMatrix cm = confusion(truth, preds);
    const MetricsSummary summary = metrics(cm);
    out.accuracy = summary.accuracy;
    out.macro_f1 = summary.macro_f1;
    return out;
}

}  // namespace

TrainResult train(Network& net, const TrainConfig& config,
                  const std::vector<WindowSample>& train_samples,
                  const std::vector<WindowSample>& val_samples) {
    config.validate();
    if (train_samples.empty()) throw InputError("train: empty training set");

    Rng rng(config.seed);
    AdamW optimizer({config.learning_rate, config.weight_decay, 0.9, 0.999, 1e-8});

    TrainResult result;
    const bool has_val = !val_samples.empty();
    const bool select_best = has_val && config.selection_metric != "final";
    double best_metric = -1.0;

    std::vector<std::size_t> order(train_samples.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        rng.shuffle(order);

        double loss_sum = 0.0;
        const std::size_t n = order.size();
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t stop = std::min(n, start + static_cast<std::size_t>(config.batch_size));
            std::vector<Eigen::MatrixXd> xs;
            Eigen::MatrixXd targets(static_cast<Eigen::Index>(stop - start), 3);
            for (std::size_t i = start; i < stop; ++i) {
                const WindowSample& s = train_samples[order[i]];
                xs.push_back(s.x);
                targets.row(static_cast<Eigen::Index>(i - start)) =
                    smooth_labels(one_hot3(s.label), config.label_smoothing).transpose();
            }

            const Eigen::MatrixXd logits = net.forward_logits(xs, /*training=*/true, &rng);
            Eigen::MatrixXd d_logits;
            const double loss =
                weighted_cross_entropy(logits, targets, config.class_weights, &d_logits);
            loss_sum += loss * static_cast<double>(stop - start);

            net.params().zero_grads();
            net.backward_logits(d_logits);
            optimizer.step(net.params());
        }
        result.history.train_loss.push_back(loss_sum / static_cast<double>(n));

        if (has_val) {
            const EvalPass val = evaluate_pass(net, val_samples, config);
            result.history.val_loss.push_back(val.loss);
            result.history.val_acc.push_back(val.accuracy);
            result.history.val_macro_f1.push_back(val.macro_f1);

            if (select_best) {
                const double metric =
                    config.selection_metric == "val_acc" ? val.accuracy : val.macro_f1;
                if (metric > best_metric) {
                    best_metric = metric;
                    result.history.selected_epoch = epoch;
                    result.best_params = net.params();
                }
            }
        }
    }

    if (!select_best || result.history.selected_epoch < 0) {
        result.history.selected_epoch = config.max_epochs - 1;
        result.best_params = net.params();
    } else {
        // leave the network holding the selected parameters
        net.params().copy_values_from(result.best_params);
    }
    return result;
}

void write_history_csv(const TrainHistory& history, const std::filesystem::path& path) {
    CsvWriter w(path);
    w.row({"epoch", "train_loss", "val_loss", "val_acc", "val_macro_f1"});
    const bool has_val = !history.val_loss.empty();
    for (int e = 0; e < history.epochs(); ++e) {
        const auto ei = static_cast<std::size_t>(e);
        std::vector<std::string> row = {std::to_string(e + 1),
                                        format_double(history.train_loss[ei])};
        if (has_val) {
            row.push_back(format_double(history.val_loss[ei]));
            row.push_back(format_double(history.val_acc[ei]));
            row.push_back(format_double(history.val_macro_f1[ei]));
        } else {
            row.insert(row.end(), {"", "", ""});
        }
        w.row(row);
    }
}

}  // namespace mineroi
