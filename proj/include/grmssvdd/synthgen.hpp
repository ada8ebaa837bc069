#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grmssvdd/data_model.hpp"

namespace grmssvdd {

enum class AnomalyShape { Step, DampedOscillation, Dropout };

AnomalyShape anomaly_shape_from(const std::string& name);
std::string to_string(AnomalyShape shape);

// Deterministic multimodal event generator: smooth per-channel baselines
// (DC offset plus low-frequency sinusoids plus Gaussian noise) with one
// annotated anomaly injected on a seed-chosen channel subset per modality.
struct SynthConfig {
    int n_events = 60;
    std::vector<int> channels_per_modality = {23, 34, 34};
    int n_timesteps = 160;
    double dt = 0.025;
    AnomalyShape shape = AnomalyShape::Step;
    double magnitude = 10.0;  // in units of each channel's baseline std
    double affected_fraction = 0.75;
    // Event interval placement as fractions of the series length.
    double start_min_frac = 0.25;
    double start_max_frac = 0.50;
    double len_min_frac = 0.10;
    double len_max_frac = 0.25;
    std::uint64_t seed = 0;

    void validate() const;
};

std::vector<EventSeries> generate(const SynthConfig& config);

}  // namespace grmssvdd
