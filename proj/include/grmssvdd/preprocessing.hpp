#pragma once

#include <cstdint>
#include <vector>

#include "grmssvdd/common.hpp"
#include "grmssvdd/data_model.hpp"

namespace grmssvdd {

/// Window length for instance extraction, in timesteps.
struct WindowSpec {
    int w = 10;
};

/// Per-modality PCA: orthonormal component rows ordered by descending
/// eigenvalue of the training covariance.
struct PcaModel {
    Vector mean;         // length D_raw
    Matrix components;   // n_components x D_raw, orthonormal rows
    int n_components = 0;
    Vector eigenvalues;  // descending, length n_components
    double total_variance = 0.0;

    double explained_variance_ratio() const;
};

/// Scalar standardization statistics over all entries of one modality's
/// training matrix.
struct NormalizationStats {
    double mean = 0.0;
    double stddev = 1.0;
};

/// Up to three windows per event: one positive ending inside [tau1, tau2],
/// one negative ending just before tau1, one negative ending at the series
/// end when the event finishes earlier.
///
/// The positive window ends at the midpoint of the in-event sample range,
/// pushed right when fewer than w timesteps precede it. Each instance
/// concatenates, per modality, that modality's channels over the w
/// timesteps ending at T (channel-major, so D_m = n_channels_m * w).
std::vector<MultimodalInstance> extract_reliability_instances(const EventSeries& event,
                                                              const WindowSpec& spec);

/// One window per end position from timestep w-1 to the last, step 1,
/// chronological order. Labels follow the tau1 <= T <= tau2 rule.
std::vector<MultimodalInstance> extract_rolling_instances(const EventSeries& event,
                                                          const WindowSpec& spec);

/// Standard deviation of every raw channel over all dataset windows,
/// indexed modality-major (all channels of modality 0 first, ...).
/// The window length w recovers the channel count as D_m / w.
std::vector<double> per_channel_std(const MultimodalDataset& dataset, int w);

/// Adds zero-mean Gaussian noise with standard deviation
/// noise_factor * per_channel_std[c] to every feature of channel c.
/// noise_factor 0 returns the input unchanged bit-for-bit.
MultimodalDataset inject_noise(const MultimodalDataset& dataset, double noise_factor,
                               const std::vector<double>& channel_std, int w,
                               std::uint64_t seed);

/// PCA of one data matrix (columns are instances) via eigendecomposition of
/// the covariance. Component signs are fixed by making the largest-magnitude
/// entry of each row positive.
PcaModel fit_pca_matrix(const Matrix& X, int n_components);

/// One PcaModel per modality, fitted on the training set only.
std::vector<PcaModel> fit_pca(const MultimodalDataset& train, int n_components);

/// components * (input - mean).
Vector apply_pca(const PcaModel& model, const Vector& input);

/// Applies every modality's PCA to every instance of the dataset.
MultimodalDataset apply_pca(const std::vector<PcaModel>& models,
                            const MultimodalDataset& dataset);

struct NormalizedSplit {
    MultimodalDataset train;
    MultimodalDataset test;
    std::vector<NormalizationStats> stats;  // one per modality
};

/// Standardizes both sets with the training per-modality scalar mean and
/// (population) standard deviation.
NormalizedSplit fit_apply_normalization(const MultimodalDataset& train,
                                        const MultimodalDataset& test);

/// (x - mean) / stddev applied to one modality vector.
Vector apply_normalization(const NormalizationStats& stats, const Vector& input);

}  // namespace grmssvdd
