#include "mineroi/dataset_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>

#include "mineroi/csv.hpp"
#include "mineroi/error.hpp"

namespace mineroi {

void Fnv1a::update(const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        state_ ^= bytes[i];
        state_ *= 1099511628211ull;
    }
}

void Fnv1a::update_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot hash missing file: " + path.string());
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        update(buf, static_cast<std::size_t>(in.gcount()));
    }
}

std::string hash_hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SplitPlan plan_from_manifest(const KeyVal& manifest) {
    SplitPlan plan;
    for (int k = 1;; ++k) {
        const std::string prefix = "split." + std::to_string(k) + ".";
        if (!manifest.has(prefix + "train")) break;
        SplitSpec spec;
        spec.name = manifest.get_or(prefix + "name", "split" + std::to_string(k));
        spec.train = manifest.get_range(prefix + "train");
        spec.eval = manifest.get_range(prefix + "eval");
        plan.splits.push_back(std::move(spec));
    }
    // shipped defaults are the published final calendar
    plan.final_train = manifest.has("final.train")
                           ? manifest.get_range("final.train")
                           : DateRange{Date::parse("2015-10-01"), Date::parse("2023-06-01")};
    plan.final_test = manifest.has("final.test")
                          ? manifest.get_range("final.test")
                          : DateRange{Date::parse("2023-06-01"), Date::parse("2024-10-01")};
    plan.validate();
    return plan;
}

BuiltDataset build_from_manifest(const KeyVal& manifest) {
    BuiltDataset ds;
    ds.region = manifest.get("region");
    ds.lookback = static_cast<int>(manifest.get_int_or("lookback", 30));
    ds.horizon = static_cast<int>(manifest.get_int_or("horizon_days", 365));
    ds.halving_dates = manifest.get_date_list("halving_dates");
    if (manifest.has("feature_order")) {
        ds.order = FeatureOrder::from_names(manifest.get_list("feature_order"));
    }
    ds.plan = plan_from_manifest(manifest);

    IngestPaths paths;
    for (const auto& p : manifest.get_list("machine_price_csv")) {
        paths.machine_price_csvs.push_back(manifest.resolve_path(p));
    }
    paths.machine_spec_csv = manifest.resolve_path(manifest.get("machine_spec_csv"));
    paths.chain_csv = manifest.resolve_path(manifest.get("chain_csv"));
    paths.energy_csv = manifest.resolve_path(manifest.get("energy_csv"));

    IngestResult ingested = ingest(paths);
    ds.warnings = ingested.warnings;

    for (const auto& machine : ingested.machines) {
        const std::vector<FeatureRow> rows = machine_feature_rows(
            machine, ingested.market, ds.region, ds.halving_dates, ds.order);
        std::vector<WindowSample> windows = make_windows(rows, ds.lookback, ds.horizon, machine,
                                                         ingested.market, ds.region);
        ds.rows.insert(ds.rows.end(), rows.begin(), rows.end());
        ds.samples.insert(ds.samples.end(), std::make_move_iterator(windows.begin()),
                          std::make_move_iterator(windows.end()));
    }
    return ds;
}

namespace {

constexpr char kWindowsMagic[4] = {'M', 'R', 'W', 'D'};
constexpr char kRowsMagic[4] = {'M', 'R', 'F', 'R'};
constexpr std::uint32_t kDatasetVersion = 1;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

void put(std::FILE* f, const void* data, std::size_t n, const std::filesystem::path& p) {
    if (std::fwrite(data, 1, n, f) != n) throw InputError("write failed: " + p.string());
}

void get(std::FILE* f, void* data, std::size_t n, const std::filesystem::path& p) {
    if (std::fread(data, 1, n, f) != n) throw InputError("truncated file: " + p.string());
}

template <typename T>
void put_pod(std::FILE* f, T v, const std::filesystem::path& p) {
    put(f, &v, sizeof(v), p);
}

template <typename T>
T get_pod(std::FILE* f, const std::filesystem::path& p) {
    T v{};
    get(f, &v, sizeof(v), p);
    return v;
}

void put_string(std::FILE* f, const std::string& s, const std::filesystem::path& p) {
    put_pod<std::uint32_t>(f, static_cast<std::uint32_t>(s.size()), p);
    put(f, s.data(), s.size(), p);
}

std::string get_string(std::FILE* f, const std::filesystem::path& p) {
    const auto len = get_pod<std::uint32_t>(f, p);
    if (len > (1u << 20)) throw InputError("corrupt string length in " + p.string());
    std::string s(len, '\0');
    get(f, s.data(), len, p);
    return s;
}

void write_windows_bin(const std::vector<WindowSample>& samples, int lookback,
                       const std::filesystem::path& path) {
    FileHandle f(std::fopen(path.string().c_str(), "wb"));
    if (!f) throw InputError("cannot write " + path.string());
    put(f.get(), kWindowsMagic, 4, path);
    put_pod<std::uint32_t>(f.get(), kDatasetVersion, path);
    put_pod<std::uint64_t>(f.get(), samples.size(), path);
    const std::uint32_t features =
        samples.empty() ? 0u : static_cast<std::uint32_t>(samples.front().x.cols());
    put_pod<std::uint32_t>(f.get(), static_cast<std::uint32_t>(lookback), path);
    put_pod<std::uint32_t>(f.get(), features, path);
    for (const auto& s : samples) {
        put_string(f.get(), s.machine_id, path);
        put_pod<std::int32_t>(f.get(), s.end_date.days(), path);
        put_pod<std::int32_t>(f.get(), s.label, path);
        for (Eigen::Index r = 0; r < s.x.rows(); ++r) {
            for (Eigen::Index c = 0; c < s.x.cols(); ++c) {
                put_pod<double>(f.get(), s.x(r, c), path);
            }
        }
    }
}

std::vector<WindowSample> read_windows_bin(const std::filesystem::path& path, int& lookback_out) {
    FileHandle f(std::fopen(path.string().c_str(), "rb"));
    if (!f) throw InputError("cannot open " + path.string());
    char magic[4];
    get(f.get(), magic, 4, path);
    if (std::memcmp(magic, kWindowsMagic, 4) != 0) throw InputError("bad magic in " + path.string());
    if (get_pod<std::uint32_t>(f.get(), path) != kDatasetVersion) {
        throw InputError("unsupported dataset version in " + path.string());
    }
    const auto count = get_pod<std::uint64_t>(f.get(), path);
    const auto lookback = get_pod<std::uint32_t>(f.get(), path);
    const auto features = get_pod<std::uint32_t>(f.get(), path);
    lookback_out = static_cast<int>(lookback);

    std::vector<WindowSample> samples;
    samples.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        WindowSample s;
        s.machine_id = get_string(f.get(), path);
        s.end_date = Date(get_pod<std::int32_t>(f.get(), path));
        s.label = get_pod<std::int32_t>(f.get(), path);
        s.x.resize(lookback, features);
        for (std::uint32_t r = 0; r < lookback; ++r) {
            for (std::uint32_t c = 0; c < features; ++c) {
                s.x(r, c) = get_pod<double>(f.get(), path);
            }
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

void write_rows_bin(const std::vector<FeatureRow>& rows, const std::filesystem::path& path) {
    FileHandle f(std::fopen(path.string().c_str(), "wb"));
    if (!f) throw InputError("cannot write " + path.string());
    put(f.get(), kRowsMagic, 4, path);
    put_pod<std::uint32_t>(f.get(), kDatasetVersion, path);
    put_pod<std::uint64_t>(f.get(), rows.size(), path);
    const std::uint32_t features =
        rows.empty() ? 0u : static_cast<std::uint32_t>(rows.front().features.size());
    put_pod<std::uint32_t>(f.get(), features, path);
    for (const auto& r : rows) {
        put_string(f.get(), r.machine_id, path);
        put_pod<std::int32_t>(f.get(), r.date.days(), path);
        for (Eigen::Index i = 0; i < r.features.size(); ++i) {
            put_pod<double>(f.get(), r.features[i], path);
        }
    }
}

std::vector<FeatureRow> read_rows_bin(const std::filesystem::path& path) {
    FileHandle f(std::fopen(path.string().c_str(), "rb"));
    if (!f) throw InputError("cannot open " + path.string());
    char magic[4];
    get(f.get(), magic, 4, path);
    if (std::memcmp(magic, kRowsMagic, 4) != 0) throw InputError("bad magic in " + path.string());
    if (get_pod<std::uint32_t>(f.get(), path) != kDatasetVersion) {
        throw InputError("unsupported dataset version in " + path.string());
    }
    const auto count = get_pod<std::uint64_t>(f.get(), path);
    const auto features = get_pod<std::uint32_t>(f.get(), path);

    std::vector<FeatureRow> rows;
    rows.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        FeatureRow r;
        r.machine_id = get_string(f.get(), path);
        r.date = Date(get_pod<std::int32_t>(f.get(), path));
        r.features.resize(features);
        for (std::uint32_t j = 0; j < features; ++j) r.features[j] = get_pod<double>(f.get(), path);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

void write_dataset(const BuiltDataset& ds, const KeyVal& manifest,
                   const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_windows_bin(ds.samples, ds.lookback, dir / "windows.bin");
    write_rows_bin(ds.rows, dir / "features.bin");

    {
        CsvWriter w(dir / "samples.csv");
        w.row({"index", "machine_id", "end_date", "label"});
        for (std::size_t i = 0; i < ds.samples.size(); ++i) {
            const auto& s = ds.samples[i];
            w.row({std::to_string(i), s.machine_id, s.end_date.to_string(),
                   std::to_string(s.label)});
        }
    }
    {
        CsvWriter w(dir / "split_assignment.csv");
        w.row({"split", "role", "sample_index"});
        auto emit = [&](const std::string& name, const char* role, const DateRange& range) {
            for (std::size_t i = 0; i < ds.samples.size(); ++i) {
                if (range.contains(ds.samples[i].end_date)) {
                    w.row({name, role, std::to_string(i)});
                }
            }
        };
        for (const auto& split : ds.plan.splits) {
            emit(split.name, "train", split.train);
            emit(split.name, "eval", split.eval);
        }
        emit("final", "train", ds.plan.final_train);
        emit("final", "test", ds.plan.final_test);
    }

    Fnv1a hasher;
    hasher.update_file(dir / "windows.bin");
    hasher.update_file(dir / "features.bin");
    const std::uint64_t digest = hasher.digest();

    KeyVal out_manifest = manifest;
    out_manifest.set("dataset_hash", hash_hex(digest));
    out_manifest.set("lookback", std::to_string(ds.lookback));
    out_manifest.set("horizon_days", std::to_string(ds.horizon));
    out_manifest.write_file(dir / "manifest");
}

BuiltDataset read_dataset(const std::filesystem::path& dir) {
    BuiltDataset ds;
    const KeyVal manifest = KeyVal::parse_file(dir / "manifest");
    ds.region = manifest.get_or("region", "");
    ds.horizon = static_cast<int>(manifest.get_int_or("horizon_days", 365));
    if (manifest.has("halving_dates")) ds.halving_dates = manifest.get_date_list("halving_dates");
    if (manifest.has("feature_order")) {
        ds.order = FeatureOrder::from_names(manifest.get_list("feature_order"));
    }
    ds.plan = plan_from_manifest(manifest);
    ds.samples = read_windows_bin(dir / "windows.bin", ds.lookback);
    if (std::filesystem::exists(dir / "features.bin")) {
        ds.rows = read_rows_bin(dir / "features.bin");
    }

    Fnv1a hasher;
    hasher.update_file(dir / "windows.bin");
    hasher.update_file(dir / "features.bin");
    ds.content_hash = hasher.digest();
    const std::string recorded = manifest.get_or("dataset_hash", "");
    if (!recorded.empty() && recorded != hash_hex(ds.content_hash)) {
        throw InputError("dataset content does not match its recorded hash (" + dir.string() + ")");
    }
    return ds;
}

void write_windows_only_dataset(const std::vector<WindowSample>& samples, int lookback,
                                const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_windows_bin(samples, lookback, dir / "windows.bin");
    write_rows_bin({}, dir / "features.bin");

    Fnv1a hasher;
    hasher.update_file(dir / "windows.bin");
    hasher.update_file(dir / "features.bin");

    KeyVal manifest;
    manifest.set("dataset_hash", hash_hex(hasher.digest()));
    manifest.set("lookback", std::to_string(lookback));
    manifest.set("kind", "windows-only");
    manifest.write_file(dir / "manifest");
}

}  // namespace mineroi
