#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cnorm/data.hpp"
#include "cnorm/eval.hpp"
#include "cnorm/phase1.hpp"
#include "cnorm/phase2.hpp"

namespace cnorm {

enum class ClassifierKind { Ibl, Mlr };

std::string to_string(ClassifierKind k);
ClassifierKind classifier_from_string(const std::string& s);

/// Phase-1 method and parameters plus the Phase-2 learner.
struct PipelineConfig {
  NormMethod method = NormMethod::IblContextual;
  NormalizerParams norm;
  ClassifierKind classifier = ClassifierKind::Ibl;
  std::size_t k3 = 1;
  std::size_t m = 1;

  /// Throws ConfigError on out-of-range parameters or d_clamp with a
  /// method outside 5..7.
  void validate() const;
  /// Resets parameters the configuration does not read to their defaults,
  /// so equivalent cells compare equal.
  PipelineConfig canonical() const;
  /// Compact one-line description, e.g. "method=6 missing=d_clamp ibl k1=2 k2=6 k3=1 d=50".
  std::string label() const;

  bool operator==(const PipelineConfig& o) const;

  /// IBL normalization + IBL classification (k1=2, k2=6, k3=1, d=50).
  static PipelineConfig cnibl();
  /// MLR normalization + MLR classification (f=5, m=1, d=15).
  static PipelineConfig cnmlr();
};

struct FittedPipeline {
  PipelineConfig config;
  Normalizer normalizer;
  IblClassifier ibl;
  MlrClassifier mlr;
};

struct Prediction {
  ClassId label = 0;
  NormalizedFeatureVector normalized;
  IblPrediction ibl;  // filled for the IBL classifier
  MlrPrediction mlr;  // filled for the MLR classifier
};

FittedPipeline fit_pipeline(const PipelineConfig& config, const LabeledDataset& train);
Prediction predict(const FittedPipeline& p, const Observation& obs);
ConfusionMatrix evaluate(const FittedPipeline& p, const LabeledDataset& test);

struct SwapSplit {
  std::string regime_a;
  std::string regime_b;
  RegimeSplit split;
};

/// Splits on the two given regimes, or on the first two regimes of the
/// dataset when the tags are empty. Throws ConfigError when fewer than two
/// regimes are present.
SwapSplit make_swap_split(const LabeledDataset& ds, std::string regime_a = {},
                          std::string regime_b = {}, const SplitOptions& options = {});

struct ExperimentResult {
  PipelineConfig config;
  ConfusionMatrix forward;   // trained on regime a, tested on b
  ConfusionMatrix backward;  // trained on b, tested on a
  ConfusionMatrix pooled;
  double raw = 0.0;
  AdjustedScore adjusted;
  std::string error;  // nonempty when the cell could not run

  bool ok() const noexcept { return error.empty(); }
};

/// Trains on each side, tests on the other and pools the two matrices.
/// Errors are rethrown with the configuration label prepended.
ExperimentResult swap_evaluate(const SwapSplit& split, const PipelineConfig& config);
ExperimentResult swap_evaluate(const LabeledDataset& ds, const PipelineConfig& config);

/// Runs every cell, `jobs` at a time. Failing cells are returned with their
/// error set; the others still run. Output order follows `cells`.
std::vector<ExperimentResult> factorial_experiment(const SwapSplit& split,
                                                   const std::vector<PipelineConfig>& cells,
                                                   std::size_t jobs = 1);

/// Cartesian product of parameter lists. Each cell is canonicalized and
/// duplicates are dropped, keeping the first occurrence.
struct GridSpec {
  std::vector<NormMethod> methods{NormMethod::IblContextual};
  std::vector<MissingPolicy> missing{MissingPolicy::DClamp};
  std::vector<ClassifierKind> classifiers{ClassifierKind::Ibl};
  std::vector<std::size_t> k1{2};
  std::vector<std::size_t> k2{6};
  std::vector<std::size_t> k3{1};
  std::vector<double> f{5.0};
  std::vector<std::size_t> m{1};
  /// Empty means the per-classifier default: 50 for IBL, 15 for MLR.
  std::vector<double> d;

  std::vector<PipelineConfig> cells() const;
};

/// Seven methods by three missing policies (zero, train average,
/// xmax/ymin) by both classifiers, at the default parameters.
GridSpec comparison_grid();

/// Pairs result cells that differ only in the normalization method, and
/// returns the ratio test of `numerator`'s adjusted scores over the others'.
struct MethodComparison {
  NormMethod numerator = NormMethod::IblContextual;
  std::vector<NormMethod> denominators;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // result indices
  RatioTest test;
};

MethodComparison compare_methods(const std::vector<ExperimentResult>& results, NormMethod numerator,
                                 const std::vector<NormMethod>& denominators,
                                 double confidence = 0.95);

}  // namespace cnorm
