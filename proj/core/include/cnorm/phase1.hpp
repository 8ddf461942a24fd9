#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cnorm/data.hpp"
#include "cnorm/regress.hpp"

namespace cnorm {

/// Normalization methods, numbered as in the comparison study (1..7).
enum class NormMethod {
  None = 1,
  MinMaxTrain = 2,
  AvgDevTrain = 3,
  PercentileTrain = 4,
  AvgDevBaseline = 5,
  IblContextual = 6,
  MlrContextual = 7,
};

enum class MissingPolicy {
  Zero = 1,          // Missing raw value taken as 0, then normalized
  TrainAverage = 2,  // normalized training-set mean of the slot
  XMaxYMin = 3,      // normalized training max for X slots, min for Y slots
  DClamp = 4,        // +d for X slots, -d for Y slots; also replaces |eta| > d
};

/// How K2 relates to K1 in the instance-based estimate. Only Disjoint is
/// the studied configuration; the other two are available for comparison.
enum class NeighborhoodMode { Disjoint, Subset, Equal };

std::string to_string(NormMethod m);
std::string to_string(MissingPolicy p);
std::string to_string(NeighborhoodMode n);
NormMethod norm_method_from_string(const std::string& s);
MissingPolicy missing_policy_from_string(const std::string& s);
NeighborhoodMode neighborhood_from_string(const std::string& s);

/// True for the methods whose output is zero-centred on healthy behaviour.
bool supports_d_clamp(NormMethod m);

struct NormalizerParams {
  std::size_t k1 = 2;
  std::size_t k2 = 6;
  double f = 5.0;
  double d = 50.0;
  MissingPolicy missing = MissingPolicy::DClamp;
  StepwiseMode stepwise = StepwiseMode::Full;
  NeighborhoodMode neighborhood = NeighborhoodMode::Disjoint;

  void validate(NormMethod method) const;
};

/// Divisors below this are replaced by it and the slot is flagged.
inline constexpr double kDivisorFloor = 1e-12;
/// Similarity weights are floored here before forming the weighted mean.
inline constexpr double kWeightFloor = 1e-6;

/// Per-variable min/max over the baseline contexts; maps them onto [0, 1].
struct ContextScaler {
  std::vector<double> min;
  std::vector<double> max;

  static ContextScaler fit(std::span<const ContextVector> contexts);
  /// A variable with max == min carries no information and maps to 0.
  ContextVector scale(const ContextVector& c) const;
};

/// Sum over i of (1 - |x_i - y_i|). Not clamped per term.
double similarity(std::span<const double> x, std::span<const double> y);

struct BaselineInstance {
  std::string id;
  ContextVector context;
  ContextVector scaled_context;
  FeatureVector features;
};

struct MuSigma {
  double mu = 0.0;
  double sigma = 0.0;
};

/// Fitted Phase-1 state. Immutable once built by fit_normalizer().
struct Normalizer {
  NormMethod method = NormMethod::None;
  NormalizerParams params;
  Schema schema;

  // Methods 2, 3, 5: per-slot location/scale. Method 2 stores (min, max),
  // methods 3 and 5 store (mean, sample stddev).
  std::vector<double> location;
  std::vector<double> spread;
  // Method 4: sorted non-missing training values per slot.
  std::vector<std::vector<double>> sorted_values;
  // Method 6.
  std::vector<BaselineInstance> baselines;
  ContextScaler scaler;
  // Method 7: one model per slot over the raw context, plus its residual
  // variation.
  std::vector<LinearModel> models;
  std::vector<double> model_sigma;

  // Training-set statistics in normalized space, for the missing policies.
  std::vector<double> train_mean;
  std::vector<double> train_min;
  std::vector<double> train_max;

  /// Slots whose fitted divisor was floored.
  std::vector<bool> floored;
};

/// Fits `method` on `train`. Methods 5-7 use train.baselines(). Throws
/// ConfigError on invalid parameters and Error when a slot has no values in
/// a required fitting set.
Normalizer fit_normalizer(NormMethod method, const LabeledDataset& train,
                          const NormalizerParams& params = {});

/// Expected value and variation of `slot` at context `c` from the baseline
/// instances (method 6).
MuSigma contextual_mu_sigma_ibl(const Normalizer& norm, const ContextVector& c, std::size_t slot);

/// Expected value from the slot's linear model and its context-free
/// residual variation (method 7).
MuSigma contextual_mu_sigma_mlr(const Normalizer& norm, const ContextVector& c, std::size_t slot);

struct NormalizeResult {
  NormalizedFeatureVector values;
  /// Slots whose divisor was floored for this observation.
  std::vector<bool> floored;
  /// Slots filled in by the missing policy (Missing or out of [-d, d]).
  std::vector<bool> imputed;
};

/// Normalization before missing/erroneous resolution. Missing slots stay
/// Missing.
FeatureVector normalize_unresolved(const Normalizer& norm, const Observation& obs,
                                   std::vector<bool>* floored = nullptr);

NormalizeResult normalize_detailed(const Normalizer& norm, const Observation& obs);

/// Full Phase-1 output: no Missing slots remain.
NormalizedFeatureVector normalize(const Normalizer& norm, const Observation& obs);

}  // namespace cnorm
