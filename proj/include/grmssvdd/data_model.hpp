#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grmssvdd/common.hpp"

namespace grmssvdd {

/// One annotated multichannel time series with a single event interval.
///
/// channels is (n_channels x n_timesteps); modality_of_channel maps every
/// channel row to a modality index in {0..M-1}.
struct EventSeries {
    std::string id;
    std::vector<double> timestamps;
    Matrix channels;
    std::vector<int> modality_of_channel;
    double tau1 = 0.0;
    double tau2 = 0.0;
    std::optional<std::string> event_class;

    int n_timesteps() const { return static_cast<int>(timestamps.size()); }
    int n_channels() const { return static_cast<int>(channels.rows()); }
    int modality_count() const;
    double dt() const;

    /// Throws InvalidInput unless timestamps form a uniform increasing grid,
    /// 0 <= tau1 <= tau2 <= last timestamp, and modality indices are dense.
    void validate() const;
};

/// One instance represented in all M modalities.
struct MultimodalInstance {
    std::vector<Vector> vectors_per_modality;
    int label = 0;  // 1 = target/abnormal, 0 = normal
    std::string source_event;
    double end_time = 0.0;
};

/// A set of instances sharing modality count and dimensionalities.
struct MultimodalDataset {
    int M = 0;
    std::vector<int> D;
    std::vector<MultimodalInstance> instances;

    int size() const { return static_cast<int>(instances.size()); }
};

/// Deterministic per-event split: floor(train_fraction * count) events go to
/// the train side, the remainder to test. Same inputs give the same partition.
std::pair<std::vector<EventSeries>, std::vector<EventSeries>> split_train_test(
    const std::vector<EventSeries>& events, double train_fraction, std::uint64_t seed);

/// Collects instances of identical shape into a dataset, preserving order.
MultimodalDataset assemble_dataset(std::vector<MultimodalInstance> instances);

/// Dataset restricted to instances with the given label, order preserved.
MultimodalDataset filter_by_label(const MultimodalDataset& dataset, int label);

/// Instances of modality m as a D_m x N matrix (columns are instances).
Matrix modality_matrix(const MultimodalDataset& dataset, int m);

/// Reorders instances in place with a seeded Fisher-Yates shuffle.
void shuffle_dataset(MultimodalDataset& dataset, std::uint64_t seed);

}  // namespace grmssvdd
