#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mineroi/dataset.hpp"
#include "mineroi/lstm.hpp"
#include "mineroi/model.hpp"
#include "mineroi/optim.hpp"

namespace mineroi {

enum class ModelKind { MineroiNet, LstmBaseline };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

// Runtime-polymorphic view over the two architectures: forward retains the
// trace that the next backward consumes.
class Network {
public:
    virtual ~Network() = default;
    virtual ParamSet& params() = 0;
    virtual const ParamSet& params() const = 0;
    virtual int lookback() const = 0;
    virtual int features() const = 0;
    virtual std::string arch_tag() const = 0;
    virtual nlohmann::json config_json() const = 0;
    virtual Eigen::MatrixXd forward_logits(const std::vector<Eigen::MatrixXd>& batch, bool training,
                                           Rng* rng) = 0;
    virtual void backward_logits(const Eigen::MatrixXd& d_logits) = 0;
};

std::unique_ptr<Network> make_mineroi_network(const ModelConfig& config, std::uint64_t init_seed);
std::unique_ptr<Network> make_lstm_network(const LstmConfig& config, std::uint64_t init_seed);

struct TrainConfig {
    int batch_size = 64;
    int max_epochs = 20;
    double learning_rate = 1e-4;
    double weight_decay = 1e-5;
    double label_smoothing = 0.1;
    Eigen::Vector3d class_weights = Eigen::Vector3d::Ones();
    std::uint64_t seed = 42;
    // "val_macro_f1" (default), "val_acc", or "final" (keep the last epoch)
    std::string selection_metric = "val_macro_f1";

    void validate() const;
};

struct TrainHistory {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> val_acc;
    std::vector<double> val_macro_f1;
    int selected_epoch = -1;  // 0-based

    int epochs() const { return static_cast<int>(train_loss.size()); }
};

struct TrainResult {
    ParamSet best_params;  // parameters of the selected epoch
    TrainHistory history;
};

// Trains with seeded shuffling and dropout; selects the epoch maximizing the
// configured validation metric (the final epoch when `val` is empty or the
// metric is "final"). The network is left holding the selected parameters.
TrainResult train(Network& net, const TrainConfig& config,
                  const std::vector<WindowSample>& train_samples,
                  const std::vector<WindowSample>& val_samples);

// CSV: epoch,train_loss,val_loss,val_acc,val_macro_f1 (val columns empty when
// no validation set was used).
void write_history_csv(const TrainHistory& history, const std::filesystem::path& path);

}  // namespace mineroi
