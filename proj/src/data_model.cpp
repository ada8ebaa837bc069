#include "grmssvdd/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grmssvdd/rng.hpp"

namespace grmssvdd {

int EventSeries::modality_count() const {
    int max_index = -1;
    for (int m : modality_of_channel) max_index = std::max(max_index, m);
    return max_index + 1;
}

double EventSeries::dt() const {
    if (timestamps.size() < 2) return 0.0;
    return timestamps[1] - timestamps[0];
}

void EventSeries::validate() const {
    if (timestamps.empty()) throw InvalidInput("event '" + id + "': no timestamps");
    if (channels.cols() != n_timesteps())
        throw ShapeMismatch("event '" + id + "': channel columns != timestamp count");
    if (static_cast<int>(modality_of_channel.size()) != n_channels())
        throw ShapeMismatch("event '" + id + "': modality_of_channel size != channel count");

    if (timestamps.size() >= 2) {
        const double step = timestamps[1] - timestamps[0];
        if (!(step > 0.0)) throw InvalidInput("event '" + id + "': timestamps not increasing");
        for (std::size_t i = 1; i < timestamps.size(); ++i) {
            const double d = timestamps[i] - timestamps[i - 1];
            if (std::abs(d - step) > 1e-9 * std::max(1.0, std::abs(step)))
                throw InvalidInput("event '" + id + "': non-uniform timestamp step");
        }
    }

    const double last = timestamps.back();
    if (!(0.0 <= tau1 && tau1 <= tau2 && tau2 <= last))
        throw InvalidInput("event '" + id + "': require 0 <= tau1 <= tau2 <= last timestamp");

    const int m_count = modality_count();
    if (m_count <= 0) throw InvalidInput("event '" + id + "': no modalities");
    std::vector<bool> seen(m_count, false);
    for (int m : modality_of_channel) {
        if (m < 0) throw InvalidInput("event '" + id + "': negative modality index");
        seen[m] = true;
    }
    for (int m = 0; m < m_count; ++m) {
        if (!seen[m])
            throw InvalidInput("event '" + id + "': modality " + std::to_string(m) +
                               " has no channel");
    }
}

std::pair<std::vector<EventSeries>, std::vector<EventSeries>> split_train_test(
    const std::vector<EventSeries>& events, double train_fraction, std::uint64_t seed) {
    if (events.empty()) throw InvalidInput("split_train_test: empty event list");
    if (!(train_fraction > 0.0 && train_fraction <= 1.0))
        throw InvalidInput("split_train_test: train_fraction must be in (0, 1]");

    std::vector<std::size_t> order(events.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    const auto n_train =
        static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(events.size())));

    std::vector<EventSeries> train, test;
    train.reserve(n_train);
    test.reserve(events.size() - n_train);
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_train ? train : test).push_back(events[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

MultimodalDataset assemble_dataset(std::vector<MultimodalInstance> instances) {
    if (instances.empty()) throw InvalidInput("assemble_dataset: empty instance list");

    const auto& first = instances.front();
    const int M = static_cast<int>(first.vectors_per_modality.size());
    if (M < 1) throw InvalidInput("assemble_dataset: instance with no modalities");

    std::vector<int> D(M);
    for (int m = 0; m < M; ++m) {
        D[m] = static_cast<int>(first.vectors_per_modality[m].size());
        if (D[m] < 1) throw InvalidInput("assemble_dataset: empty modality vector");
    }

    for (const auto& inst : instances) {
        if (static_cast<int>(inst.vectors_per_modality.size()) != M)
            throw ShapeMismatch("assemble_dataset: inconsistent modality count");
        for (int m = 0; m < M; ++m) {
            if (static_cast<int>(inst.vectors_per_modality[m].size()) != D[m])
                throw ShapeMismatch("assemble_dataset: inconsistent dimensionality in modality " +
                                    std::to_string(m));
        }
        if (inst.label != 0 && inst.label != 1)
            throw InvalidInput("assemble_dataset: label must be 0 or 1");
    }

    MultimodalDataset dataset;
    dataset.M = M;
    dataset.D = std::move(D);
    dataset.instances = std::move(instances);
    return dataset;
}

MultimodalDataset filter_by_label(const MultimodalDataset& dataset, int label) {
    MultimodalDataset out;
    out.M = dataset.M;
    out.D = dataset.D;
    for (const auto& inst : dataset.instances) {
        if (inst.label == label) out.instances.push_back(inst);
    }
    return out;
}

Matrix modality_matrix(const MultimodalDataset& dataset, int m) {
    if (m < 0 || m >= dataset.M) throw InvalidInput("modality_matrix: modality index out of range");
    Matrix X(dataset.D[m], dataset.size());
    for (int i = 0; i < dataset.size(); ++i) {
        X.col(i) = dataset.instances[i].vectors_per_modality[m];
    }
    return X;
}

void shuffle_dataset(MultimodalDataset& dataset, std::uint64_t seed) {
    Rng rng(seed);
    rng.shuffle(dataset.instances);
}

}  // namespace grmssvdd
