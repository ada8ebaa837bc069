#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grmssvdd/inference.hpp"
#include "grmssvdd/synthgen.hpp"
#include "grmssvdd/trainer.hpp"

namespace grmssvdd {

// Hyperparameter lists for grid search. Defaults are the full experiment
// grid; configs normally restrict them.
struct GridSpec {
    std::vector<int> d = {1, 2, 3, 4, 5, 10, 20, 50, 100};
    std::vector<double> C = {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    std::vector<double> beta = {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};
    std::vector<double> sigma = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
    std::vector<int> k = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<int> regularizers = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    // Empty means: enumerate all 2^M sign combinations.
    std::vector<std::vector<int>> signs;
};

struct ExperimentConfig {
    std::string events_dir = "events";
    std::string out_dir = "out";
    std::string model_path;  // defaults to <out_dir>/model.json

    int w = 10;
    double noise_factor = 0.0;
    int pca_components = 30;
    double train_fraction = 0.7;
    double cct = 0.15;
    std::uint64_t seed = 0;
    std::vector<std::string> strategies = {"and", "or", "uni0", "uni1", "uni2"};

    ModelConfig model;  // single-model commands
    GridSpec grid;      // gridsearch
    SynthConfig synth;  // generate

    std::string resolved_model_path() const;
};

// Reads a JSON config; missing fields keep their defaults.
ExperimentConfig load_experiment_config(const std::string& path);

int cmd_generate(const ExperimentConfig& config);
int cmd_preprocess(const ExperimentConfig& config);
int cmd_train(const ExperimentConfig& config);
int cmd_evaluate(const ExperimentConfig& config);
int cmd_gridsearch(const ExperimentConfig& config);
int cmd_earliness(const ExperimentConfig& config);

// One grid-search row: a candidate model config evaluated with one strategy
// on the holdout third of the training data.
struct GridResult {
    ModelConfig config;
    std::string strategy;
    double gm = 0.0;
    bool failed = false;
    std::string error;
};

// Expands the grid deterministically, dropping combinations that only
// differ in parameters the candidate ignores (sigma without NPT, k for
// non-graph regularizers).
std::vector<ModelConfig> expand_grid(const GridSpec& grid, const ModelConfig& base,
                                     int modality_count);

// Trains every candidate on the first 2/3 of the (shuffled) training
// instances' target class and scores every strategy on the remaining third.
// Worker count comes from GRMSSVDD_WORKERS when set; results are ordered by
// candidate index regardless of scheduling.
std::vector<GridResult> run_gridsearch(const MultimodalDataset& train,
                                       const std::vector<ModelConfig>& candidates,
                                       const std::vector<std::string>& strategies);

int run_cli(int argc, const char* const* argv);

}  // namespace grmssvdd
