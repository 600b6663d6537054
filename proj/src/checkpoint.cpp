#include "mineroi/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>

#include "mineroi/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; big-endian hosts are unsupported");

namespace mineroi {

namespace {

constexpr char kMagic[4] = {'M', 'R', 'O', 'I'};
constexpr std::uint32_t kFormatVersion = 1;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

void write_bytes(std::FILE* f, const void* data, std::size_t n, const std::filesystem::path& path) {
    if (std::fwrite(data, 1, n, f) != n) throw InputError("checkpoint write failed: " + path.string());
}

void read_bytes(std::FILE* f, void* data, std::size_t n, const std::filesystem::path& path) {
    if (std::fread(data, 1, n, f) != n) {
        throw InputError("checkpoint truncated or unreadable: " + path.string());
    }
}

void write_u32(std::FILE* f, std::uint32_t v, const std::filesystem::path& p) {
    write_bytes(f, &v, sizeof(v), p);
}

void write_u64(std::FILE* f, std::uint64_t v, const std::filesystem::path& p) {
    write_bytes(f, &v, sizeof(v), p);
}

std::uint32_t read_u32(std::FILE* f, const std::filesystem::path& p) {
    std::uint32_t v = 0;
    read_bytes(f, &v, sizeof(v), p);
    return v;
}

std::uint64_t read_u64(std::FILE* f, const std::filesystem::path& p) {
    std::uint64_t v = 0;
    read_bytes(f, &v, sizeof(v), p);
    return v;
}

void write_string(std::FILE* f, const std::string& s, const std::filesystem::path& p) {
    write_u32(f, static_cast<std::uint32_t>(s.size()), p);
    write_bytes(f, s.data(), s.size(), p);
}

std::string read_string(std::FILE* f, const std::filesystem::path& p) {
    const std::uint32_t len = read_u32(f, p);
    if (len > (1u << 24)) throw InputError("checkpoint string field too large: " + p.string());
    std::string s(len, '\0');
    read_bytes(f, s.data(), len, p);
    return s;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    FileHandle f(std::fopen(path.string().c_str(), "wb"));
    if (!f) throw InputError("cannot open checkpoint for writing: " + path.string());

    write_bytes(f.get(), kMagic, sizeof(kMagic), path);
    write_u32(f.get(), kFormatVersion, path);
    write_string(f.get(), ckpt.arch, path);
    write_string(f.get(), ckpt.config.dump(), path);
    write_string(f.get(), ckpt.meta.dump(), path);

    write_u64(f.get(), ckpt.tensors.size(), path);
    for (const auto& t : ckpt.tensors) {
        write_string(f.get(), t.name, path);
        write_u64(f.get(), static_cast<std::uint64_t>(t.value.rows()), path);
        write_u64(f.get(), static_cast<std::uint64_t>(t.value.cols()), path);
        // row-major traversal, independent of Eigen's storage order
        for (Eigen::Index r = 0; r < t.value.rows(); ++r) {
            for (Eigen::Index c = 0; c < t.value.cols(); ++c) {
                const double v = t.value(r, c);
                write_bytes(f.get(), &v, sizeof(v), path);
            }
        }
    }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    FileHandle f(std::fopen(path.string().c_str(), "rb"));
    if (!f) throw InputError("cannot open checkpoint: " + path.string());

    char magic[4];
    read_bytes(f.get(), magic, sizeof(magic), path);
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw InputError("not a checkpoint file (bad magic): " + path.string());
    }
    const std::uint32_t version = read_u32(f.get(), path);
    if (version != kFormatVersion) {
        throw InputError("unsupported checkpoint format version " + std::to_string(version) +
                         " in " + path.string());
    }

    Checkpoint ckpt;
    ckpt.arch = read_string(f.get(), path);
    try {
        ckpt.config = nlohmann::json::parse(read_string(f.get(), path));
        ckpt.meta = nlohmann::json::parse(read_string(f.get(), path));
    } catch (const nlohmann::json::exception& e) {
        throw InputError("corrupt checkpoint header JSON in " + path.string() + ": " + e.what());
    }

    const std::uint64_t count = read_u64(f.get(), path);
    ckpt.tensors.resize(count);
    for (auto& t : ckpt.tensors) {
        t.name = read_string(f.get(), path);
        const auto rows = static_cast<Eigen::Index>(read_u64(f.get(), path));
        const auto cols = static_cast<Eigen::Index>(read_u64(f.get(), path));
        t.value.resize(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                double v = 0.0;
                read_bytes(f.get(), &v, sizeof(v), path);
                t.value(r, c) = v;
            }
        }
    }
    return ckpt;
}

Checkpoint checkpoint_from_network(const Network& net, const Scaler& scaler,
                                   const nlohmann::json& meta) {
    Checkpoint ckpt;
    ckpt.arch = net.arch_tag();
    ckpt.config = net.config_json();
    ckpt.meta = meta;
    const ParamSet& params = net.params();
    for (std::size_t i = 0; i < params.size(); ++i) {
        ckpt.tensors.push_back({params.at(i).name, params.at(i).value});
    }
    if (scaler.min().size() > 0) {
        ckpt.tensors.push_back({"scaler.min", scaler.min()});
        ckpt.tensors.push_back({"scaler.max", scaler.max()});
    }
    return ckpt;
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.lookback = j.at("lookback").get<int>();
    c.features = j.at("features").get<int>();
    c.d_model = j.at("d_model").get<int>();
    c.n_heads = j.at("n_heads").get<int>();
    c.n_layers = j.at("n_layers").get<int>();
    c.d_ff = j.at("d_ff").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.reduction = j.at("reduction").get<int>();
    c.spectral_mode = spectral_mode_from_string(j.at("spectral_mode").get<std::string>());
    c.head_hidden = j.at("head_hidden").get<int>();
    return c;
}

LstmConfig lstm_config_from_json(const nlohmann::json& j) {
    LstmConfig c;
    c.lookback = j.at("lookback").get<int>();
    c.features = j.at("features").get<int>();
    c.hidden_size = j.at("hidden_size").get<int>();
    c.n_layers = j.at("n_layers").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.reduction = j.at("reduction").get<int>();
    c.spectral_mode = spectral_mode_from_string(j.at("spectral_mode").get<std::string>());
    return c;
}

std::unique_ptr<Network> network_from_checkpoint(const Checkpoint& ckpt, Scaler* scaler_out) {
    std::unique_ptr<Network> net;
    try {
        if (ckpt.arch == "mineroi-net") {
            net = make_mineroi_network(model_config_from_json(ckpt.config), /*init_seed=*/0);
        } else if (ckpt.arch == "lstm-baseline") {
            net = make_lstm_network(lstm_config_from_json(ckpt.config), /*init_seed=*/0);
        } else {
            throw InputError("checkpoint has unknown architecture tag '" + ckpt.arch + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("checkpoint config incomplete: ") + e.what());
    }

    const Eigen::VectorXd* scaler_min = nullptr;
    const Eigen::VectorXd* scaler_max = nullptr;
    Eigen::VectorXd min_store, max_store;

    ParamSet& params = net->params();
    std::size_t assigned = 0;
    for (const auto& t : ckpt.tensors) {
        if (t.name == "scaler.min") {
            min_store = t.value.col(0);
            scaler_min = &min_store;
            continue;
        }
        if (t.name == "scaler.max") {
            max_store = t.value.col(0);
            scaler_max = &max_store;
            continue;
        }
        Param* p = params.find(t.name);
        if (!p) throw InputError("checkpoint tensor '" + t.name + "' does not match the architecture");
        if (p->value.rows() != t.value.rows() || p->value.cols() != t.value.cols()) {
            throw InputError("checkpoint tensor '" + t.name + "' has the wrong shape");
        }
        p->value = t.value;
        ++assigned;
    }
    if (assigned != params.size()) {
        throw InputError("checkpoint is missing " + std::to_string(params.size() - assigned) +
                         " parameter tensor(s)");
    }

    if (scaler_out) {
        if (scaler_min && scaler_max) {
            *scaler_out = Scaler(*scaler_min, *scaler_max);
        } else {
            *scaler_out = Scaler();
        }
    }
    return net;
}

}  // namespace mineroi
