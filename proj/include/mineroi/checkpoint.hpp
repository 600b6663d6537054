#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "mineroi/dataset.hpp"
#include "mineroi/trainer.hpp"

namespace mineroi {

// Binary checkpoint: versioned header (magic, format version, architecture
// tag, config JSON, metadata JSON) followed by named tensors as 64-bit
// little-endian floats with explicit shapes. Complex weights already live as
// separate real/imag tensors. Round-trips byte-exactly.
struct NamedTensor {
    std::string name;
    Eigen::MatrixXd value;
};

struct Checkpoint {
    std::string arch;        // "mineroi-net" | "lstm-baseline"
    nlohmann::json config;   // architecture configuration
    nlohmann::json meta;     // run context: seed, region, feature order, ...
    std::vector<NamedTensor> tensors;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Network <-> checkpoint bridging. The scaler travels as two tensors
// ("scaler.min"/"scaler.max") so prediction can normalize fresh windows.
Checkpoint checkpoint_from_network(const Network& net, const Scaler& scaler,
                                   const nlohmann::json& meta);
std::unique_ptr<Network> network_from_checkpoint(const Checkpoint& ckpt, Scaler* scaler_out);

ModelConfig model_config_from_json(const nlohmann::json& j);
LstmConfig lstm_config_from_json(const nlohmann::json& j);

}  // namespace mineroi
