#pragma once

#include <string>
#include <vector>

#include "mineroi/checkpoint.hpp"
#include "mineroi/dataset.hpp"
#include "mineroi/metrics.hpp"
#include "mineroi/trainer.hpp"

namespace mineroi {

struct CvRunConfig {
    ModelKind kind = ModelKind::MineroiNet;
    ModelConfig model;
    LstmConfig lstm;
    TrainConfig train;
    std::vector<std::uint64_t> seeds = {42, 43, 44, 45, 46};
};

struct CvCell {
    std::string split;
    std::uint64_t seed = 0;
    EvalReport report;
    TrainHistory history;
};

struct CvResult {
    std::vector<std::string> split_names;
    std::vector<CvCell> cells;

    std::vector<const CvCell*> cells_for(const std::string& split) const;
};

// Builds a fresh network per (split, seed), fits the scaler and class weights
// on that split's training range, trains with the split's evaluation set as
// the validation series, and evaluates on it.
CvResult cross_validate(const SampleStore& store, const SplitPlan& plan, const CvRunConfig& config);

// Evaluates a trained network on normalized samples.
EvalReport evaluate_network(Network& net, const std::vector<WindowSample>& samples,
                            std::uint64_t seed, int batch_size = 64);

// Accuracy / macro-F1 table shaped like the cross-regime validation tables:
// one row per metric, one column per split plus an Avg +- Std column (mean
// over seeds per split, spread across splits).
std::string cv_table_text(const CvResult& result);

// Aggregate table over seeds for a single split (final-test shape).
std::string final_table_text(const std::vector<EvalReport>& reports);

}  // namespace mineroi
