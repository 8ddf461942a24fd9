#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cnorm/data.hpp"
#include "cnorm/regress.hpp"

namespace cnorm {

/// Normalized training vectors with their class ids.
struct TrainingSet {
  std::vector<NormalizedFeatureVector> vectors;
  std::vector<ClassId> labels;
  std::size_t class_count = 0;

  std::size_t size() const noexcept { return vectors.size(); }
  std::size_t arity() const noexcept { return vectors.empty() ? 0 : vectors.front().size(); }
};

// ---- instance-based ------------------------------------------------------

struct IblClassifier {
  std::vector<NormalizedFeatureVector> instances;
  std::vector<ClassId> labels;
  std::size_t class_count = 0;
  std::size_t k3 = 1;
};

struct Neighbor {
  std::size_t index = 0;  // position in the stored instances
  ClassId label = 0;
  double similarity = 0.0;
};

struct IblPrediction {
  ClassId label = 0;
  /// The k3 most similar instances, best first.
  std::vector<Neighbor> neighbors;
  /// Votes per class among the neighbors.
  std::vector<std::size_t> votes;
};

/// Stores the instances. Throws ConfigError on an empty set, k3 == 0 or
/// unequal arity.
IblClassifier train_ibl(TrainingSet train, std::size_t k3 = 1);

/// Plurality vote over the k3 most similar instances. Ranking ties go to
/// the earlier instance. Vote ties go to the tied class whose best member
/// ranks highest, so k3 = 2 always agrees with k3 = 1.
IblPrediction classify_ibl(const IblClassifier& clf, std::span<const double> q);

// ---- regression discriminant ---------------------------------------------

struct MlrClassifier {
  /// One model per class over the normalized slots.
  std::vector<LinearModel> models;
  std::size_t m = 1;
  std::size_t arity = 0;
};

struct MlrPrediction {
  ClassId label = 0;
  std::vector<double> scores;  // per-class model output
};

/// One-vs-rest: the model for class X is forward-selected to m terms on the
/// 0/1 indicator of X. Throws ConfigError when m exceeds the arity and
/// NumericError when there are fewer than m + 1 rows.
MlrClassifier train_mlr(const TrainingSet& train, std::size_t m = 1);

/// Class whose output is closest to 1; ties within 1e-12 go to the lower id.
MlrPrediction classify_mlr(const MlrClassifier& clf, std::span<const double> q);

}  // namespace cnorm
