#include "grmssvdd/inference.hpp"

#include <algorithm>

#include "grmssvdd/svdd.hpp"

namespace grmssvdd {

DecisionStrategy DecisionStrategy::parse(const std::string& text) {
    DecisionStrategy s;
    if (text == "and") {
        s.kind = Kind::AND;
    } else if (text == "or") {
        s.kind = Kind::OR;
    } else if (text.size() > 3 && text.compare(0, 3, "uni") == 0) {
        s.kind = Kind::UNI;
        try {
            s.uni_index = std::stoi(text.substr(3));
        } catch (const std::exception&) {
            throw InvalidInput("unknown decision strategy: " + text);
        }
        if (s.uni_index < 0) throw InvalidInput("unknown decision strategy: " + text);
    } else {
        throw InvalidInput("unknown decision strategy: " + text);
    }
    return s;
}

std::string DecisionStrategy::name() const {
    switch (kind) {
        case Kind::AND: return "and";
        case Kind::OR: return "or";
        case Kind::UNI: return "uni" + std::to_string(uni_index);
    }
    return "unknown";
}

std::vector<bool> classify_modalities(const TrainedModel& model,
                                      const std::vector<Vector>& features) {
    const std::vector<Vector> projected = project_features(model, features);
    std::vector<bool> p(projected.size());
    for (std::size_t m = 0; m < projected.size(); ++m)
        p[m] = score(model.svdd, projected[m]) <= 0.0;
    return p;
}

bool fuse(const std::vector<bool>& p, const DecisionStrategy& strategy) {
    if (p.empty()) throw InvalidInput("fuse: empty verdict vector");
    switch (strategy.kind) {
        case DecisionStrategy::Kind::AND:
            return std::all_of(p.begin(), p.end(), [](bool b) { return b; });
        case DecisionStrategy::Kind::OR:
            return std::any_of(p.begin(), p.end(), [](bool b) { return b; });
        case DecisionStrategy::Kind::UNI:
            if (strategy.uni_index < 0 ||
                static_cast<std::size_t>(strategy.uni_index) >= p.size())
                throw InvalidInput("fuse: UNI index out of range");
            return p[static_cast<std::size_t>(strategy.uni_index)];
    }
    throw InvalidInput("fuse: unknown strategy");
}

}  // namespace grmssvdd
