#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cnorm/data.hpp"

namespace cnorm {

// Synthetic stand-in for the engine test-cell data. Healthy feature
// locations respond to the ambient context; faults delay features (x up)
// and diminish them (y down) in proportion to severity.

struct ContextVariableSpec {
  std::string name;
  /// Response terms are written in z = (c - reference) / scale.
  double reference = 0.0;
  double scale = 1.0;
};

struct AxisResponse {
  double base = 0.0;
  std::vector<double> linear;     // per context variable, coefficient on z
  std::vector<double> quadratic;  // per context variable, coefficient on z^2
  double noise = 0.0;             // Gaussian sigma

  double evaluate(const ContextVector& z) const;
};

struct FeatureResponse {
  std::string name;
  AxisResponse x;
  AxisResponse y;
};

struct FaultEffect {
  std::string feature;
  double x_shift = 0.0;  // at severity 1; >= 0 by default
  double y_shift = 0.0;  // at severity 1; <= 0 by default
};

struct MissingModel {
  /// Probability that a feature goes Missing: base, plus
  /// severity_multiplier * severity on the features the fault shifts.
  double base = 0.0;
  double severity_multiplier = 0.0;
  /// Probability that a present feature is an erroneous landmark: both
  /// coordinates jump by `erroneous_sigmas` noise sigmas, random sign each.
  double erroneous = 0.0;
  double erroneous_sigmas = 0.0;
};

/// Context variable j is mean_j + spread_j * (l_j * w + sqrt(1 - l_j^2) * e_j)
/// with w shared by all variables (the weather) and e_j independent.
struct RegimeDistribution {
  std::vector<double> mean;
  std::vector<double> spread;   // Gaussian sigma per context variable
  std::vector<double> loading;  // in [-1, 1]; empty means independent
};

struct SeveritySampler {
  enum class Kind { Fixed, Uniform };
  Kind kind = Kind::Uniform;
  double min = 0.0;  // Uniform lower bound, or the Fixed value
  double max = 1.0;

  double sample(std::mt19937_64& rng) const;
};

/// Requested number of observations per (regime, class name) plus the
/// severity distribution per faulted class.
struct Composition {
  std::vector<std::string> regimes;
  std::map<std::string, std::map<std::string, std::size_t>> counts;  // regime -> class -> n
  std::map<std::string, SeveritySampler> severity;                   // faulted class -> sampler
  std::size_t baseline_count = 16;

  std::size_t total() const;
};

struct GeneratorConfig {
  std::vector<ContextVariableSpec> context;
  std::vector<std::string> classes;
  std::string healthy_class;
  std::vector<FeatureResponse> features;
  std::map<std::string, std::vector<FaultEffect>> faults;  // class -> effects
  MissingModel missing;
  std::map<std::string, RegimeDistribution> regimes;
  std::uint64_t seed = 0;
  Composition composition;

  /// Throws ConfigError on inconsistent sizes, negative noise, or
  /// probabilities outside [0, 1].
  void validate() const;
  Schema schema() const;
  ClassId class_id(const std::string& name) const;

  /// Healthy feature location at context c, no noise.
  FeatureVector healthy_response(const ContextVector& c) const;
  ContextVector standardize(const ContextVector& c) const;

  /// Eight classes, two regimes ("october" warm, "november" cold), ten
  /// features, composition 52/12/36/39/15/5/5/78 split across the regimes.
  static GeneratorConfig paper_shaped(std::uint64_t seed = 1994);
};

GeneratorConfig generator_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GeneratorConfig& cfg);
GeneratorConfig load_generator_config(const std::filesystem::path& path);

/// Draws a context from the regime distribution and one observation.
Observation generate_observation(const GeneratorConfig& cfg, ClassId label, double severity,
                                 const std::string& regime, std::mt19937_64& rng,
                                 std::string id = {});

/// Same as above at a fixed context.
Observation generate_observation_at(const GeneratorConfig& cfg, ClassId label, double severity,
                                    const ContextVector& context, const std::string& regime,
                                    std::mt19937_64& rng, std::string id = {});

/// Every observation draws from its own RNG seeded by (cfg.seed, index), so
/// the result does not depend on generation order. Baselines are selected
/// among the healthy observations with select_baselines().
LabeledDataset generate_dataset(const GeneratorConfig& cfg, const Composition& composition);
inline LabeledDataset generate_dataset(const GeneratorConfig& cfg) {
  return generate_dataset(cfg, cfg.composition);
}

/// Independent stream for observation `index` of a run seeded with `seed`.
std::mt19937_64 observation_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace cnorm
