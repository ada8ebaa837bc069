#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "grmssvdd/common.hpp"
#include "grmssvdd/data_model.hpp"
#include "grmssvdd/graphs.hpp"
#include "grmssvdd/npt.hpp"
#include "grmssvdd/preprocessing.hpp"
#include "grmssvdd/svdd.hpp"

namespace grmssvdd {

struct ModelConfig {
    int d = 2;
    double C = 0.3;
    double beta = 0.0;
    double eta = 0.1;
    double sigma = 1.0;  // RBF width, NPT only
    int k = 0;           // graph neighbor/cluster count
    int regularizer = 0; // id 0-9
    std::vector<int> signs;  // one of {-1, +1} per modality
    bool use_npt = false;
    int max_iter = 100;
    std::uint64_t seed = 0;

    void validate(int modality_count) const;
};

// Snapshot handed to the iteration observer. q_stepped is the state after
// the gradient step but before QR; q_after is what the next iteration sees.
struct TrainingState {
    int iteration = 0;
    std::vector<Matrix> q_before;
    std::vector<Matrix> q_stepped;
    std::vector<Matrix> q_after;
    SvddSolution svdd;
    double omega = 0.0;
};

using IterationObserver = std::function<void(const TrainingState&)>;

struct TrainedModel {
    ModelConfig config;
    std::vector<Matrix> q;       // per modality, d x D_m_effective
    SvddSolution svdd;
    std::vector<NptModel> npt;   // empty unless config.use_npt

    // Preprocessing artifacts, attached by the experiment layer so a saved
    // model can classify raw windows on its own. Empty when the caller
    // evaluates already-preprocessed features.
    std::vector<PcaModel> pca;
    std::vector<NormalizationStats> normalization;

    int iterations_run = 0;
    double final_omega = 0.0;

    int modality_count() const { return static_cast<int>(q.size()); }
};

// Runs the subspace-learning loop on target-class instances: per-modality
// PCA initialization of Q, then alternating SVDD solves and mixed-sign
// gradient steps with QR re-orthonormalization.
TrainedModel train(const MultimodalDataset& dataset, const ModelConfig& config,
                   const IterationObserver& observer = nullptr);

// Projects per-modality feature vectors that already match the training
// dataset's representation (NPT test map when the model uses it, then Q_m).
std::vector<Vector> project_features(const TrainedModel& model,
                                     const std::vector<Vector>& features);

// Full chain for one raw window: PCA, normalization, optional NPT, Q_m.
// Requires the preprocessing artifacts to be attached.
std::vector<Vector> project_window(const TrainedModel& model,
                                   const std::vector<Vector>& window);

}  // namespace grmssvdd
