#include "grmssvdd/metrics.hpp"

#include <cmath>

namespace grmssvdd {

EvaluationReport reliability_metrics(const std::vector<bool>& predictions,
                                     const std::vector<bool>& labels) {
    if (predictions.size() != labels.size())
        throw ShapeMismatch("reliability_metrics: predictions and labels differ in length");

    EvaluationReport r;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i]) {
            if (predictions[i]) ++r.n_tp; else ++r.n_fn;
        } else {
            if (predictions[i]) ++r.n_fp; else ++r.n_tn;
        }
    }

    const long positives = r.n_tp + r.n_fn;
    const long negatives = r.n_tn + r.n_fp;
    const long predicted_pos = r.n_tp + r.n_fp;
    const long total = positives + negatives;
    r.degenerate = positives == 0 || negatives == 0;

    r.tpr = positives > 0 ? static_cast<double>(r.n_tp) / positives : 0.0;
    r.tnr = negatives > 0 ? static_cast<double>(r.n_tn) / negatives : 0.0;
    r.acc = total > 0 ? static_cast<double>(r.n_tp + r.n_tn) / total : 0.0;
    r.pre = predicted_pos > 0 ? static_cast<double>(r.n_tp) / predicted_pos : 0.0;
    r.hm = (r.pre + r.tpr) > 0.0 ? 2.0 * r.pre * r.tpr / (r.pre + r.tpr) : 0.0;
    r.gm = std::sqrt(r.tpr * r.tnr);
    return r;
}

EarlinessReport evaluate_earliness_with(const std::vector<EventSeries>& events,
                                        double cct, const WindowSpec& spec,
                                        const WindowClassifier& classify) {
    if (!(cct > 0.0)) throw InvalidInput("evaluate_earliness: cct must be > 0");

    EarlinessReport report;
    report.cct = cct;

    long true_triggers = 0;
    double delay_sum = 0.0;
    for (const auto& event : events) {
        EventDetection det;
        det.event_id = event.id;
        for (const auto& window : extract_rolling_instances(event, spec)) {
            if (!classify(window)) continue;
            det.triggered = true;
            det.trigger_time = window.end_time;
            det.true_trigger =
                window.end_time >= event.tau1 && window.end_time <= event.tau2;
            if (det.true_trigger) det.delay = window.end_time - event.tau1;
            break;
        }
        if (det.true_trigger) {
            ++true_triggers;
            delay_sum += det.delay;
        }
        report.detections.push_back(std::move(det));
    }

    if (!events.empty()) {
        const auto false_triggers =
            static_cast<double>(events.size()) - static_cast<double>(true_triggers);
        report.ftr = false_triggers / static_cast<double>(events.size());
        report.ttr = 1.0 - report.ftr;
    }
    if (true_triggers > 0) {
        report.del = delay_sum / static_cast<double>(true_triggers);
        report.earl = (cct - *report.del) / cct;
    }
    return report;
}

EarlinessReport evaluate_earliness(const TrainedModel& model,
                                   const DecisionStrategy& strategy,
                                   const std::vector<EventSeries>& events,
                                   double cct, const WindowSpec& spec) {
    return evaluate_earliness_with(
        events, cct, spec, [&](const MultimodalInstance& window) {
            const auto projected = project_window(model, window.vectors_per_modality);
            std::vector<bool> p(projected.size());
            for (std::size_t m = 0; m < projected.size(); ++m)
                p[m] = score(model.svdd, projected[m]) <= 0.0;
            return fuse(p, strategy);
        });
}

}  // namespace grmssvdd
