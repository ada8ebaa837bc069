#pragma once

#include <string>
#include <vector>

#include "grmssvdd/data_model.hpp"
#include "grmssvdd/metrics.hpp"
#include "grmssvdd/preprocessing.hpp"
#include "grmssvdd/trainer.hpp"

namespace grmssvdd {

void save_dataset(const MultimodalDataset& dataset, const std::string& path);
MultimodalDataset load_dataset(const std::string& path);

// PCA models and normalization stats for every modality, plus the window
// length they were fitted with, in one document.
struct PreprocessingArtifacts {
    int w = 10;
    double noise_factor = 0.0;
    std::vector<PcaModel> pca;
    std::vector<NormalizationStats> normalization;
};

void save_preprocessing(const PreprocessingArtifacts& artifacts, const std::string& path);
PreprocessingArtifacts load_preprocessing(const std::string& path);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

// Report JSON plus an aligned text table (columns acc, tpr, tnr, pre, hm, gm).
std::string report_table(const std::vector<std::string>& row_names,
                         const std::vector<EvaluationReport>& rows);
void save_reports(const std::vector<std::string>& row_names,
                  const std::vector<EvaluationReport>& rows,
                  const std::string& json_path, const std::string& table_path);

void save_earliness_report(const EarlinessReport& report, const std::string& path);

// instance_id, p_0..p_{M-1}, fused, label
void save_predictions_csv(const std::vector<std::string>& instance_ids,
                          const std::vector<std::vector<bool>>& per_modality,
                          const std::vector<bool>& fused,
                          const std::vector<bool>& labels, const std::string& path);

}  // namespace grmssvdd
