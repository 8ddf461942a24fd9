#pragma once

#include <random>
#include <string>
#include <vector>

#include "cnorm/data.hpp"

namespace fixture {

/// Two context variables, two features (four slots), classes
/// {"fault", "healthy"} with "healthy" as the healthy class.
inline cnorm::Schema small_schema() { return {{"T1", "BARO"}, {"A", "B"}}; }

inline cnorm::Observation obs(std::string id, std::string regime, cnorm::ClassId label, double severity,
                              cnorm::ContextVector c, cnorm::FeatureVector f) {
  cnorm::Observation o;
  o.id = std::move(id);
  o.regime = std::move(regime);
  o.label = label;
  o.severity = severity;
  o.context = std::move(c);
  o.features = std::move(f);
  return o;
}

/// `n` observations alternating between regimes "a" and "b"; every third
/// one is faulted. Features respond linearly to the context.
inline cnorm::LabeledDataset small_dataset(std::size_t n, unsigned seed = 7) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::uniform_real_distribution<double> temp(-5.0, 20.0), baro(14.3, 14.9);
  std::vector<cnorm::Observation> v;
  for (std::size_t i = 0; i < n; ++i) {
    const bool faulted = i % 3 == 2;
    const double t = temp(rng), b = baro(rng);
    const double shift = faulted ? 2.0 : 0.0;
    v.push_back(obs("o" + std::to_string(100 + i), i % 2 ? "b" : "a", faulted ? 0 : 1, faulted ? 0.5 : 0.0,
                    {t, b},
                    {1.0 + 0.05 * t + shift + noise(rng), 10.0 - 0.2 * t - shift + noise(rng),
                     3.0 + 2.0 * (b - 14.6) + noise(rng), 5.0 + 0.1 * t + noise(rng)}));
  }
  return {small_schema(), {"fault", "healthy"}, 1, std::move(v), {}};
}

}  // namespace fixture
