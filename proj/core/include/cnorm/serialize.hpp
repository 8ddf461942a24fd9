#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "cnorm/eval.hpp"
#include "cnorm/experiment.hpp"

namespace cnorm {

// JSON documents for fitted state, so training and prediction can run as
// separate invocations. Doubles are written at full precision.

nlohmann::json to_json(const Schema& s);
Schema schema_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LinearModel& m);
LinearModel linear_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PipelineConfig& c);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Normalizer& n);
Normalizer normalizer_from_json(const nlohmann::json& j);

nlohmann::json to_json(const IblClassifier& c);
IblClassifier ibl_classifier_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MlrClassifier& c);
MlrClassifier mlr_classifier_from_json(const nlohmann::json& j);

/// {"config", "class_names", "normalizer", "classifier"}
nlohmann::json to_json(const FittedPipeline& p, const std::vector<std::string>& class_names);
FittedPipeline fitted_pipeline_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const AdjustedScore& s);
nlohmann::json to_json(const ExperimentResult& r);

/// Grid file: one grid object {"methods": [...], "missing": [...],
/// "classifiers": [...], "k1": [...], "k2": [...], "k3": [...], "f": [...],
/// "m": [...], "d": [...]} or {"grids": [<grid>...]}, optionally with
/// "compare": [{"numerator": 6, "denominators": [1, 2, 3, 4, 5]}].
/// Absent keys keep the GridSpec defaults.
struct GridFile {
  std::vector<GridSpec> grids;
  std::vector<std::pair<NormMethod, std::vector<NormMethod>>> comparisons;

  /// Cells of every grid in order, duplicates dropped.
  std::vector<PipelineConfig> cells() const;
};
GridSpec grid_spec_from_json(const nlohmann::json& j);
GridFile grid_file_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace cnorm
