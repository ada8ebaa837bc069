#pragma once

#include <string>
#include <vector>

#include "grmssvdd/trainer.hpp"

namespace grmssvdd {

// Boolean fusion of the per-modality verdicts.
struct DecisionStrategy {
    enum class Kind { AND, OR, UNI };
    Kind kind = Kind::AND;
    int uni_index = 0;  // UNI only

    static DecisionStrategy parse(const std::string& text);
    std::string name() const;
};

// Per-modality verdicts: p_m = (score of the projected vector <= 0).
// The boundary counts as target.
std::vector<bool> classify_modalities(const TrainedModel& model,
                                      const std::vector<Vector>& features);

bool fuse(const std::vector<bool>& p, const DecisionStrategy& strategy);

}  // namespace grmssvdd
