#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mineroi/dataset.hpp"
#include "mineroi/keyval.hpp"

namespace mineroi {

// FNV-1a 64-bit content hash, used to fingerprint built datasets.
class Fnv1a {
public:
    void update(const void* data, std::size_t n);
    void update_file(const std::filesystem::path& path);
    std::uint64_t digest() const { return state_; }

private:
    std::uint64_t state_ = 1469598103934665603ull;
};

std::string hash_hex(std::uint64_t h);

// Fully materialized dataset as produced by the build step.
struct BuiltDataset {
    std::vector<WindowSample> samples;  // raw, unnormalized
    std::vector<FeatureRow> rows;       // per-machine contiguous feature rows
    FeatureOrder order = FeatureOrder::canonical();
    int lookback = 30;
    int horizon = 365;
    std::string region;
    std::vector<Date> halving_dates;
    SplitPlan plan;
    std::vector<std::string> warnings;
    std::uint64_t content_hash = 0;
};

// Parses the split calendar out of a dataset manifest. Validation splits come
// from split.<k>.train / split.<k>.eval keys (optional split.<k>.name); the
// final ranges default to the shipped calendar when absent.
SplitPlan plan_from_manifest(const KeyVal& manifest);

// Ingests the CSVs named by the manifest and builds labeled windows.
BuiltDataset build_from_manifest(const KeyVal& manifest);

// Dataset directory: windows.bin + features.bin + samples.csv +
// split_assignment.csv + manifest (resolved copy with the content hash).
void write_dataset(const BuiltDataset& ds, const KeyVal& manifest,
                   const std::filesystem::path& dir);
BuiltDataset read_dataset(const std::filesystem::path& dir);

// Writes only windows (used for planted datasets with no market underneath).
void write_windows_only_dataset(const std::vector<WindowSample>& samples, int lookback,
                                const std::filesystem::path& dir);

}  // namespace mineroi
