#include "cnorm/phase1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cnorm/error.hpp"

namespace cnorm {

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::None: return "none";
    case NormMethod::MinMaxTrain: return "minmax_train";
    case NormMethod::AvgDevTrain: return "avgdev_train";
    case NormMethod::PercentileTrain: return "percentile_train";
    case NormMethod::AvgDevBaseline: return "avgdev_base";
    case NormMethod::IblContextual: return "ibl_contextual";
    case NormMethod::MlrContextual: return "mlr_contextual";
  }
  return "?";
}

std::string to_string(MissingPolicy p) {
  switch (p) {
    case MissingPolicy::Zero: return "zero";
    case MissingPolicy::TrainAverage: return "train_average";
    case MissingPolicy::XMaxYMin: return "xmax_ymin";
    case MissingPolicy::DClamp: return "d_clamp";
  }
  return "?";
}

std::string to_string(NeighborhoodMode n) {
  switch (n) {
    case NeighborhoodMode::Disjoint: return "disjoint";
    case NeighborhoodMode::Subset: return "subset";
    case NeighborhoodMode::Equal: return "equal";
  }
  return "?";
}

NormMethod norm_method_from_string(const std::string& s) {
  for (int i = 1; i <= 7; ++i) {
    const auto m = static_cast<NormMethod>(i);
    if (s == to_string(m) || s == std::to_string(i)) return m;
  }
  if (s == "ibl") return NormMethod::IblContextual;
  if (s == "mlr") return NormMethod::MlrContextual;
  throw ConfigError("unknown normalization method '" + s + "'");
}

MissingPolicy missing_policy_from_string(const std::string& s) {
  for (int i = 1; i <= 4; ++i) {
    const auto p = static_cast<MissingPolicy>(i);
    if (s == to_string(p) || s == std::to_string(i)) return p;
  }
  throw ConfigError("unknown missing-value policy '" + s + "'");
}

NeighborhoodMode neighborhood_from_string(const std::string& s) {
  for (auto n : {NeighborhoodMode::Disjoint, NeighborhoodMode::Subset, NeighborhoodMode::Equal})
    if (s == to_string(n)) return n;
  throw ConfigError("unknown neighborhood mode '" + s + "'");
}

bool supports_d_clamp(NormMethod m) {
  return m == NormMethod::AvgDevBaseline || m == NormMethod::IblContextual ||
         m == NormMethod::MlrContextual;
}

void NormalizerParams::validate(NormMethod method) const {
  if (k1 < 1 || k2 < 1) throw ConfigError("k1 and k2 must be >= 1");
  if (!(f > 0.0)) throw ConfigError("f must be > 0");
  if (!(d > 0.0)) throw ConfigError("d must be > 0");
  if (missing == MissingPolicy::DClamp && !supports_d_clamp(method))
    throw ConfigError("d_clamp missing policy requires normalization method 5, 6 or 7, not " +
                      to_string(method));
}

ContextScaler ContextScaler::fit(std::span<const ContextVector> contexts) {
  ContextScaler s;
  if (contexts.empty()) return s;
  s.min = contexts.front();
  s.max = contexts.front();
  for (const auto& c : contexts)
    for (std::size_t j = 0; j < c.size(); ++j) {
      s.min[j] = std::min(s.min[j], c[j]);
      s.max[j] = std::max(s.max[j], c[j]);
    }
  return s;
}

ContextVector ContextScaler::scale(const ContextVector& c) const {
  ContextVector out(c.size(), 0.0);
  for (std::size_t j = 0; j < c.size(); ++j)
    if (max[j] > min[j]) out[j] = (c[j] - min[j]) / (max[j] - min[j]);
  return out;
}

double similarity(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("similarity: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += 1.0 - std::abs(x[i] - y[i]);
  return s;
}

namespace {

double floored_divisor(double v, bool& floored) {
  if (v < kDivisorFloor) {
    floored = true;
    return kDivisorFloor;
  }
  return v;
}

struct SlotValues {
  std::vector<double> values;
};

std::vector<double> present_values(std::span<const Observation* const> obs, std::size_t slot) {
  std::vector<double> out;
  for (const auto* o : obs)
    if (o->features[slot]) out.push_back(*o->features[slot]);
  return out;
}

void mean_sample_sd(const std::vector<double>& v, double& mean, double& sd) {
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

double percentile(const std::vector<double>& sorted, double v) {
  const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
  const auto hi = std::upper_bound(sorted.begin(), sorted.end(), v);
  const double below = static_cast<double>(lo - sorted.begin());
  const double equal = static_cast<double>(hi - lo);
  return (below + 0.5 * equal) / static_cast<double>(sorted.size());
}

double normalize_value(const Normalizer& norm, const ContextVector& context, std::size_t slot,
                       double v, bool& floored) {
  switch (norm.method) {
    case NormMethod::None:
      return v;
    case NormMethod::MinMaxTrain:
      return (v - norm.location[slot]) /
             floored_divisor(norm.spread[slot] - norm.location[slot], floored);
    case NormMethod::AvgDevTrain:
    case NormMethod::AvgDevBaseline:
      return (v - norm.location[slot]) / floored_divisor(norm.spread[slot], floored);
    case NormMethod::PercentileTrain:
      return percentile(norm.sorted_values[slot], v);
    case NormMethod::IblContextual: {
      const auto ms = contextual_mu_sigma_ibl(norm, context, slot);
      return (v - ms.mu) / floored_divisor(ms.sigma, floored);
    }
    case NormMethod::MlrContextual: {
      const auto ms = contextual_mu_sigma_mlr(norm, context, slot);
      return (v - ms.mu) / floored_divisor(ms.sigma, floored);
    }
  }
  return v;
}

}  // namespace

MuSigma contextual_mu_sigma_ibl(const Normalizer& norm, const ContextVector& c, std::size_t slot) {
  if (norm.method != NormMethod::IblContextual)
    throw ConfigError("contextual_mu_sigma_ibl needs an ibl_contextual normalizer");
  const auto q = norm.scaler.scale(c);
  const std::size_t n = norm.baselines.size();
  std::vector<double> sim(n);
  for (std::size_t j = 0; j < n; ++j) sim[j] = similarity(q, norm.baselines[j].scaled_context);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sim[a] > sim[b]; });

  const std::size_t k1 = norm.params.k1, k2 = norm.params.k2;
  std::vector<std::size_t> ranked;  // baselines with this slot present, best first
  for (std::size_t j : order)
    if (norm.baselines[j].features[slot]) ranked.push_back(j);
  if (ranked.empty())
    throw Error("no baseline has a value for slot " + norm.schema.slot_label(slot));

  const std::size_t n1 = std::min(k1, ranked.size());
  std::span<const std::size_t> near(ranked.data(), n1);
  std::span<const std::size_t> halo;
  switch (norm.params.neighborhood) {
    case NeighborhoodMode::Disjoint:
      halo = std::span<const std::size_t>(ranked).subspan(n1, std::min(k2, ranked.size() - n1));
      break;
    case NeighborhoodMode::Subset:
      halo = std::span<const std::size_t>(ranked).first(std::min(std::max(k1, k2), ranked.size()));
      break;
    case NeighborhoodMode::Equal:
      halo = near;
      break;
  }

  double wsum = 0.0, acc = 0.0;
  for (std::size_t j : near) {
    const double w = std::max(sim[j], kWeightFloor);
    wsum += w;
    acc += w * *norm.baselines[j].features[slot];
  }
  MuSigma out;
  out.mu = acc / wsum;
  if (!halo.empty()) {
    double ss = 0.0;
    for (std::size_t j : halo) {
      const double e = *norm.baselines[j].features[slot] - out.mu;
      ss += e * e;
    }
    out.sigma = std::sqrt(ss / static_cast<double>(halo.size()));
  }
  return out;
}

MuSigma contextual_mu_sigma_mlr(const Normalizer& norm, const ContextVector& c, std::size_t slot) {
  if (norm.method != NormMethod::MlrContextual)
    throw ConfigError("contextual_mu_sigma_mlr needs an mlr_contextual normalizer");
  return {norm.models[slot].predict(c), norm.model_sigma[slot]};
}

Normalizer fit_normalizer(NormMethod method, const LabeledDataset& train,
                          const NormalizerParams& params) {
  params.validate(method);
  Normalizer norm;
  norm.method = method;
  norm.params = params;
  norm.schema = train.schema();
  const std::size_t slots = norm.schema.slot_count();
  norm.floored.assign(slots, false);

  std::vector<const Observation*> all;
  for (const auto& o : train.observations()) all.push_back(&o);
  const auto baselines = train.baselines();

  auto require_values = [&](const std::vector<double>& v, std::size_t slot, const char* set) {
    if (v.empty())
      throw Error("slot " + norm.schema.slot_label(slot) + " is Missing in every " + set +
                  " observation");
  };
  const bool needs_baselines = method == NormMethod::AvgDevBaseline ||
                               method == NormMethod::IblContextual ||
                               method == NormMethod::MlrContextual;
  if (needs_baselines && baselines.empty())
    throw ConfigError(to_string(method) + " needs a nonempty baseline set");
  if (method == NormMethod::IblContextual && params.neighborhood == NeighborhoodMode::Disjoint &&
      params.k1 + params.k2 > baselines.size())
    throw ConfigError("k1 + k2 = " + std::to_string(params.k1 + params.k2) + " exceeds the " +
                      std::to_string(baselines.size()) + " baselines");

  switch (method) {
    case NormMethod::None:
      break;
    case NormMethod::MinMaxTrain:
    case NormMethod::AvgDevTrain:
    case NormMethod::AvgDevBaseline: {
      const auto& source = method == NormMethod::AvgDevBaseline ? baselines : all;
      norm.location.resize(slots);
      norm.spread.resize(slots);
      for (std::size_t s = 0; s < slots; ++s) {
        const auto v = present_values(source, s);
        require_values(v, s, method == NormMethod::AvgDevBaseline ? "baseline" : "training");
        if (method == NormMethod::MinMaxTrain) {
          norm.location[s] = *std::min_element(v.begin(), v.end());
          norm.spread[s] = *std::max_element(v.begin(), v.end());
          norm.floored[s] = norm.spread[s] - norm.location[s] < kDivisorFloor;
        } else {
          mean_sample_sd(v, norm.location[s], norm.spread[s]);
          norm.floored[s] = norm.spread[s] < kDivisorFloor;
        }
      }
      break;
    }
    case NormMethod::PercentileTrain:
      for (std::size_t s = 0; s < slots; ++s) {
        auto v = present_values(all, s);
        require_values(v, s, "training");
        std::sort(v.begin(), v.end());
        norm.sorted_values.push_back(std::move(v));
      }
      break;
    case NormMethod::IblContextual: {
      std::vector<const Observation*> sorted_bl = baselines;
      std::stable_sort(sorted_bl.begin(), sorted_bl.end(),
                       [](const Observation* a, const Observation* b) { return a->id < b->id; });
      std::vector<ContextVector> contexts;
      for (const auto* o : sorted_bl) contexts.push_back(o->context);
      norm.scaler = ContextScaler::fit(contexts);
      for (const auto* o : sorted_bl)
        norm.baselines.push_back({o->id, o->context, norm.scaler.scale(o->context), o->features});
      for (std::size_t s = 0; s < slots; ++s) require_values(present_values(sorted_bl, s), s, "baseline");
      break;
    }
    case NormMethod::MlrContextual:
      for (std::size_t s = 0; s < slots; ++s) {
        std::vector<std::vector<double>> rows;
        std::vector<double> y;
        for (const auto* o : baselines)
          if (o->features[s]) {
            rows.push_back(o->context);
            y.push_back(*o->features[s]);
          }
        require_values(y, s, "baseline");
        const Design x(rows);
        LinearModel model = stepwise_select(x, y, params.f, params.stepwise);
        norm.model_sigma.push_back(residual_variation(model, x, y));
        norm.floored[s] = norm.model_sigma.back() < kDivisorFloor;
        norm.models.push_back(std::move(model));
      }
      break;
  }

  // Training statistics in normalized space.
  norm.train_mean.assign(slots, 0.0);
  norm.train_min.assign(slots, std::numeric_limits<double>::infinity());
  norm.train_max.assign(slots, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> counts(slots, 0);
  for (const auto* o : all) {
    const auto eta = normalize_unresolved(norm, *o);
    for (std::size_t s = 0; s < slots; ++s)
      if (eta[s]) {
        norm.train_mean[s] += *eta[s];
        norm.train_min[s] = std::min(norm.train_min[s], *eta[s]);
        norm.train_max[s] = std::max(norm.train_max[s], *eta[s]);
        ++counts[s];
      }
  }
  const bool needs_stats =
      params.missing == MissingPolicy::TrainAverage || params.missing == MissingPolicy::XMaxYMin;
  for (std::size_t s = 0; s < slots; ++s) {
    if (counts[s] == 0) {
      if (needs_stats)
        throw Error("slot " + norm.schema.slot_label(s) + " is Missing in every training observation");
      norm.train_mean[s] = norm.train_min[s] = norm.train_max[s] = 0.0;
      continue;
    }
    norm.train_mean[s] /= static_cast<double>(counts[s]);
  }
  return norm;
}

FeatureVector normalize_unresolved(const Normalizer& norm, const Observation& obs,
                                   std::vector<bool>* floored) {
  const std::size_t slots = norm.schema.slot_count();
  if (obs.features.size() != slots || obs.context.size() != norm.schema.context_arity())
    throw ConfigError("observation '" + obs.id + "' does not match the normalizer schema");
  FeatureVector out(slots);
  if (floored) floored->assign(slots, false);
  for (std::size_t s = 0; s < slots; ++s) {
    if (!obs.features[s]) continue;
    bool f = norm.floored.empty() ? false : static_cast<bool>(norm.floored[s]);
    out[s] = normalize_value(norm, obs.context, s, *obs.features[s], f);
    if (floored) (*floored)[s] = f;
  }
  return out;
}

NormalizeResult normalize_detailed(const Normalizer& norm, const Observation& obs) {
  NormalizeResult r;
  const auto eta = normalize_unresolved(norm, obs, &r.floored);
  const std::size_t slots = eta.size();
  const double d = norm.params.d;
  r.values.resize(slots);
  r.imputed.assign(slots, false);
  for (std::size_t s = 0; s < slots; ++s) {
    const bool is_x = Schema::axis(s) == Axis::X;
    if (eta[s] && !(norm.params.missing == MissingPolicy::DClamp && std::abs(*eta[s]) > d)) {
      r.values[s] = *eta[s];
      continue;
    }
    r.imputed[s] = true;
    switch (norm.params.missing) {
      case MissingPolicy::Zero: {
        bool f = false;
        r.values[s] = normalize_value(norm, obs.context, s, 0.0, f);
        break;
      }
      case MissingPolicy::TrainAverage:
        r.values[s] = norm.train_mean[s];
        break;
      case MissingPolicy::XMaxYMin:
        r.values[s] = is_x ? norm.train_max[s] : norm.train_min[s];
        break;
      case MissingPolicy::DClamp:
        r.values[s] = is_x ? d : -d;
        break;
    }
  }
  return r;
}

NormalizedFeatureVector normalize(const Normalizer& norm, const Observation& obs) {
  return normalize_detailed(norm, obs).values;
}

}  // namespace cnorm
