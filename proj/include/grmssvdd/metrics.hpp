#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grmssvdd/data_model.hpp"
#include "grmssvdd/inference.hpp"
#include "grmssvdd/preprocessing.hpp"

namespace grmssvdd {

struct EvaluationReport {
    long n_tp = 0, n_tn = 0, n_fp = 0, n_fn = 0;
    double tpr = 0.0, tnr = 0.0, acc = 0.0, pre = 0.0, hm = 0.0, gm = 0.0;
    // Set when a class is absent; the rates touching it are reported as 0.
    bool degenerate = false;
};

EvaluationReport reliability_metrics(const std::vector<bool>& predictions,
                                     const std::vector<bool>& labels);

// Outcome of rolling one event's windows up to the first positive decision.
struct EventDetection {
    std::string event_id;
    bool triggered = false;
    double trigger_time = 0.0;  // valid when triggered
    bool true_trigger = false;  // trigger inside [tau1, tau2]
    double delay = 0.0;         // trigger_time - tau1, valid when true_trigger
};

struct EarlinessReport {
    double cct = 0.0;
    std::vector<EventDetection> detections;
    std::optional<double> del;   // mean delay over true triggers; absent if none
    double ttr = 0.0;
    double ftr = 0.0;
    std::optional<double> earl;  // (cct - del) / cct
};

using WindowClassifier = std::function<bool(const MultimodalInstance&)>;

// Rolls windows chronologically over each event and stops at the first
// positive decision. A first positive outside [tau1, tau2], or no positive
// at all, counts as a false trigger.
EarlinessReport evaluate_earliness_with(const std::vector<EventSeries>& events,
                                        double cct, const WindowSpec& spec,
                                        const WindowClassifier& classify);

// Same harness driven by a trained model with attached preprocessing
// artifacts and a fusion strategy.
EarlinessReport evaluate_earliness(const TrainedModel& model,
                                   const DecisionStrategy& strategy,
                                   const std::vector<EventSeries>& events,
                                   double cct, const WindowSpec& spec);

}  // namespace grmssvdd
