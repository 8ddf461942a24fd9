#include "cnorm/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cnorm/error.hpp"

namespace cnorm {

double AxisResponse::evaluate(const ContextVector& z) const {
  double v = base;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (j < linear.size()) v += linear[j] * z[j];
    if (j < quadratic.size()) v += quadratic[j] * z[j] * z[j];
  }
  return v;
}

double SeveritySampler::sample(std::mt19937_64& rng) const {
  if (kind == Kind::Fixed) return min;
  return std::uniform_real_distribution<double>(min, max)(rng);
}

std::size_t Composition::total() const {
  std::size_t n = 0;
  for (const auto& [regime, by_class] : counts)
    for (const auto& [cls, k] : by_class) n += k;
  return n;
}

void GeneratorConfig::validate() const {
  const std::size_t dim = context.size();
  if (classes.empty()) throw ConfigError("generator: no classes");
  if (std::find(classes.begin(), classes.end(), healthy_class) == classes.end())
    throw ConfigError("generator: healthy class '" + healthy_class + "' not in class list");
  for (const auto& c : context)
    if (!(c.scale > 0.0)) throw ConfigError("generator: context scale must be positive");
  auto check_axis = [&](const AxisResponse& a, const std::string& what) {
    if (a.linear.size() > dim || a.quadratic.size() > dim)
      throw ConfigError("generator: " + what + " has more coefficients than context variables");
    if (!(a.noise >= 0.0)) throw ConfigError("generator: " + what + " noise must be >= 0");
  };
  for (const auto& f : features) {
    check_axis(f.x, f.name + ".x");
    check_axis(f.y, f.name + ".y");
  }
  for (const auto& [cls, effects] : faults) {
    class_id(cls);
    for (const auto& e : effects) {
      auto it = std::find_if(features.begin(), features.end(),
                             [&](const FeatureResponse& f) { return f.name == e.feature; });
      if (it == features.end())
        throw ConfigError("generator: fault '" + cls + "' names unknown feature '" + e.feature + "'");
    }
  }
  auto prob = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError(std::string("generator: ") + what + " must be in [0,1]");
  };
  prob(missing.base, "missing.base");
  prob(missing.erroneous, "missing.erroneous");
  if (!(missing.severity_multiplier >= 0.0))
    throw ConfigError("generator: missing.severity_multiplier must be >= 0");
  prob(std::min(1.0, missing.base + missing.severity_multiplier), "missing probability");
  for (const auto& [name, r] : regimes) {
    if (r.mean.size() != dim || r.spread.size() != dim)
      throw ConfigError("generator: regime '" + name + "' needs one mean/spread per context variable");
    for (double s : r.spread)
      if (!(s >= 0.0)) throw ConfigError("generator: regime '" + name + "' spread must be >= 0");
    if (!r.loading.empty() && r.loading.size() != dim)
      throw ConfigError("generator: regime '" + name + "' needs one loading per context variable");
    for (double l : r.loading)
      if (!(l >= -1.0 && l <= 1.0)) throw ConfigError("generator: regime '" + name + "' loading outside [-1, 1]");
  }
  for (const auto& regime : composition.regimes)
    if (!regimes.count(regime))
      throw ConfigError("generator: composition uses undefined regime '" + regime + "'");
  for (const auto& [regime, by_class] : composition.counts) {
    if (!regimes.count(regime))
      throw ConfigError("generator: counts for undefined regime '" + regime + "'");
    for (const auto& [cls, n] : by_class) class_id(cls);
  }
  for (const auto& [cls, s] : composition.severity) {
    class_id(cls);
    const double lo = s.min, hi = s.kind == SeveritySampler::Kind::Fixed ? s.min : s.max;
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi))
      throw ConfigError("generator: severity range for '" + cls + "' must lie in [0,1]");
  }
}

Schema GeneratorConfig::schema() const {
  Schema s;
  for (const auto& c : context) s.context_names.push_back(c.name);
  for (const auto& f : features) s.feature_names.push_back(f.name);
  return s;
}

ClassId GeneratorConfig::class_id(const std::string& name) const {
  auto it = std::find(classes.begin(), classes.end(), name);
  if (it == classes.end()) throw ConfigError("generator: unknown class '" + name + "'");
  return static_cast<ClassId>(it - classes.begin());
}

ContextVector GeneratorConfig::standardize(const ContextVector& c) const {
  ContextVector z(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) z[j] = (c[j] - context[j].reference) / context[j].scale;
  return z;
}

FeatureVector GeneratorConfig::healthy_response(const ContextVector& c) const {
  const ContextVector z = standardize(c);
  FeatureVector out;
  for (const auto& f : features) {
    out.emplace_back(f.x.evaluate(z));
    out.emplace_back(f.y.evaluate(z));
  }
  return out;
}

std::mt19937_64 observation_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Observation generate_observation_at(const GeneratorConfig& cfg, ClassId label, double severity,
                                    const ContextVector& context, const std::string& regime,
                                    std::mt19937_64& rng, std::string id) {
  if (label >= cfg.classes.size()) throw ConfigError("generator: class id out of range");
  if (!(severity >= 0.0 && severity <= 1.0)) throw ConfigError("generator: severity outside [0,1]");
  const ClassId healthy = cfg.class_id(cfg.healthy_class);
  if (label == healthy) severity = 0.0;

  Observation o;
  o.id = std::move(id);
  o.regime = regime;
  o.label = label;
  o.severity = severity;
  o.context = context;

  const FeatureVector loc = cfg.healthy_response(context);
  const auto fault = cfg.faults.find(cfg.classes[label]);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  o.features.resize(2 * cfg.features.size());
  for (std::size_t k = 0; k < cfg.features.size(); ++k) {
    const auto& f = cfg.features[k];
    // Fixed number of draws per feature keeps streams aligned across configs.
    const double nx = normal(rng), ny = normal(rng);
    const double u_missing = unit(rng), u_err = unit(rng);
    const double sx = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double sy = unit(rng) < 0.5 ? -1.0 : 1.0;

    double x = *loc[2 * k] + f.x.noise * nx;
    double y = *loc[2 * k + 1] + f.y.noise * ny;
    double p_missing = cfg.missing.base;
    if (fault != cfg.faults.end())
      for (const auto& e : fault->second)
        if (e.feature == f.name) {
          x += severity * e.x_shift;
          y += severity * e.y_shift;
          p_missing += cfg.missing.severity_multiplier * severity;
        }
    if (u_missing < std::min(p_missing, 1.0)) continue;
    if (u_err < cfg.missing.erroneous) {
      x += sx * cfg.missing.erroneous_sigmas * f.x.noise;
      y += sy * cfg.missing.erroneous_sigmas * f.y.noise;
    }
    o.features[2 * k] = x;
    o.features[2 * k + 1] = y;
  }
  return o;
}

Observation generate_observation(const GeneratorConfig& cfg, ClassId label, double severity,
                                 const std::string& regime, std::mt19937_64& rng, std::string id) {
  auto it = cfg.regimes.find(regime);
  if (it == cfg.regimes.end()) throw ConfigError("generator: unknown regime '" + regime + "'");
  std::normal_distribution<double> normal(0.0, 1.0);
  ContextVector c(cfg.context.size());
  const auto& r = it->second;
  const double w = normal(rng);
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double l = r.loading.empty() ? 0.0 : r.loading[j];
    c[j] = r.mean[j] + r.spread[j] * (l * w + std::sqrt(1.0 - l * l) * normal(rng));
  }
  return generate_observation_at(cfg, label, severity, c, regime, rng, std::move(id));
}

LabeledDataset generate_dataset(const GeneratorConfig& cfg, const Composition& composition) {
  cfg.validate();
  const ClassId healthy = cfg.class_id(cfg.healthy_class);
  std::vector<Observation> obs;
  std::uint64_t index = 0;
  std::vector<std::string> regimes = composition.regimes;
  for (const auto& [regime, by_class] : composition.counts)
    if (std::find(regimes.begin(), regimes.end(), regime) == regimes.end()) regimes.push_back(regime);

  for (const auto& regime : regimes) {
    auto by_class = composition.counts.find(regime);
    if (by_class == composition.counts.end()) continue;
    for (ClassId label = 0; label < cfg.classes.size(); ++label) {
      auto n = by_class->second.find(cfg.classes[label]);
      if (n == by_class->second.end()) continue;
      for (std::size_t i = 0; i < n->second; ++i, ++index) {
        auto rng = observation_rng(cfg.seed, index);
        double severity = 0.0;
        if (label != healthy) {
          auto s = composition.severity.find(cfg.classes[label]);
          severity = s == composition.severity.end() ? 1.0 : s->second.sample(rng);
        }
        char id[32];
        std::snprintf(id, sizeof(id), "obs%04llu", static_cast<unsigned long long>(index + 1));
        obs.push_back(generate_observation(cfg, label, severity, regime, rng, id));
      }
    }
  }

  std::size_t n_healthy = 0;
  for (const auto& o : obs) n_healthy += o.label == healthy;
  if (!obs.empty() && composition.baseline_count > 0 && n_healthy == 0)
    throw ConfigError("generator: baselines requested but no healthy observations generated");
  auto baselines = select_baselines(obs, healthy, composition.baseline_count);
  return LabeledDataset(cfg.schema(), cfg.classes, healthy, std::move(obs), std::move(baselines));
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json axis_json(const AxisResponse& a) {
  return {{"base", a.base}, {"linear", a.linear}, {"quadratic", a.quadratic}, {"noise", a.noise}};
}

AxisResponse axis_from(const json& j) {
  AxisResponse a;
  a.base = j.at("base").get<double>();
  a.linear = j.value("linear", std::vector<double>{});
  a.quadratic = j.value("quadratic", std::vector<double>{});
  a.noise = j.value("noise", 0.0);
  return a;
}

}  // namespace

nlohmann::json to_json(const GeneratorConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  for (const auto& c : cfg.context)
    j["context"].push_back({{"name", c.name}, {"reference", c.reference}, {"scale", c.scale}});
  j["classes"] = cfg.classes;
  j["healthy_class"] = cfg.healthy_class;
  for (const auto& f : cfg.features)
    j["features"].push_back({{"name", f.name}, {"x", axis_json(f.x)}, {"y", axis_json(f.y)}});
  j["faults"] = json::object();
  for (const auto& [cls, effects] : cfg.faults)
    for (const auto& e : effects)
      j["faults"][cls].push_back({{"feature", e.feature}, {"x_shift", e.x_shift}, {"y_shift", e.y_shift}});
  j["missing"] = {{"base", cfg.missing.base},
                  {"severity_multiplier", cfg.missing.severity_multiplier},
                  {"erroneous", cfg.missing.erroneous},
                  {"erroneous_sigmas", cfg.missing.erroneous_sigmas}};
  j["regimes"] = json::object();
  for (const auto& [name, r] : cfg.regimes) j["regimes"][name] = {{"mean", r.mean}, {"spread", r.spread}, {"loading", r.loading}};
  json comp;
  comp["regimes"] = cfg.composition.regimes;
  comp["counts"] = cfg.composition.counts;
  comp["baseline_count"] = cfg.composition.baseline_count;
  comp["severity"] = json::object();
  for (const auto& [cls, s] : cfg.composition.severity) {
    if (s.kind == SeveritySampler::Kind::Fixed)
      comp["severity"][cls] = {{"kind", "fixed"}, {"value", s.min}};
    else
      comp["severity"][cls] = {{"kind", "uniform"}, {"min", s.min}, {"max", s.max}};
  }
  j["composition"] = comp;
  return j;
}

GeneratorConfig generator_config_from_json(const nlohmann::json& j) {
  try {
    GeneratorConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{0});
    for (const auto& c : j.at("context"))
      cfg.context.push_back({c.at("name").get<std::string>(), c.value("reference", 0.0),
                             c.value("scale", 1.0)});
    cfg.classes = j.at("classes").get<std::vector<std::string>>();
    cfg.healthy_class = j.at("healthy_class").get<std::string>();
    for (const auto& f : j.at("features"))
      cfg.features.push_back({f.at("name").get<std::string>(), axis_from(f.at("x")), axis_from(f.at("y"))});
    if (j.contains("faults"))
      for (const auto& [cls, effects] : j.at("faults").items())
        for (const auto& e : effects)
          cfg.faults[cls].push_back({e.at("feature").get<std::string>(), e.value("x_shift", 0.0),
                                     e.value("y_shift", 0.0)});
    if (j.contains("missing")) {
      const auto& m = j.at("missing");
      cfg.missing.base = m.value("base", 0.0);
      cfg.missing.severity_multiplier = m.value("severity_multiplier", 0.0);
      cfg.missing.erroneous = m.value("erroneous", 0.0);
      cfg.missing.erroneous_sigmas = m.value("erroneous_sigmas", 0.0);
    }
    for (const auto& [name, r] : j.at("regimes").items())
      cfg.regimes[name] = {r.at("mean").get<std::vector<double>>(),
                           r.at("spread").get<std::vector<double>>(),
                           r.value("loading", std::vector<double>{})};
    if (j.contains("composition")) {
      const auto& c = j.at("composition");
      cfg.composition.regimes = c.value("regimes", std::vector<std::string>{});
      if (c.contains("counts"))
        cfg.composition.counts =
            c.at("counts").get<std::map<std::string, std::map<std::string, std::size_t>>>();
      cfg.composition.baseline_count = c.value("baseline_count", std::size_t{16});
      if (c.contains("severity"))
        for (const auto& [cls, s] : c.at("severity").items()) {
          SeveritySampler sampler;
          const std::string kind = s.value("kind", "uniform");
          if (kind == "fixed") {
            sampler.kind = SeveritySampler::Kind::Fixed;
            sampler.min = sampler.max = s.at("value").get<double>();
          } else if (kind == "uniform") {
            sampler.min = s.value("min", 0.0);
            sampler.max = s.value("max", 1.0);
          } else {
            throw ConfigError("generator: unknown severity kind '" + kind + "'");
          }
          cfg.composition.severity[cls] = sampler;
        }
    }
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("generator config: ") + e.what());
  }
}

GeneratorConfig load_generator_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open generator config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("generator config " + path.string() + ": " + e.what());
  }
  return generator_config_from_json(j);
}

// ---------------------------------------------------------------------------

GeneratorConfig GeneratorConfig::paper_shaped(std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.context = {{"T1", 8.0, 6.0},
                 {"TEX", 7.0, 6.0},
                 {"TDEW", 1.0, 5.0},
                 {"BARO", 14.6, 0.15},
                 {"HUMID", 65.0, 12.0}};
  cfg.classes = {"class 1", "class 2", "class 3", "class 4",
                 "class 5", "class 6", "class 7", "class 8"};
  cfg.healthy_class = "class 8";

  // name, x base (s), y base, x noise, y noise, x response on z (T1, TEX, TDEW, BARO, HUMID),
  // y response (fraction of y base per unit z)
  struct Row {
    const char* name;
    double x, y, nx, ny;
    std::vector<double> lx, ly;
    double qx, qy;  // quadratic on T1
  };
  const std::vector<Row> rows = {
      {"THRUST_peak", 4.2, 3000.0, 0.05, 30.0, {0.16, 0.05, 0.02, -0.04, 0.01}, {-0.030, -0.010, 0.0, 0.012, -0.004}, 0.015, -0.003},
      {"T5_peak", 3.1, 650.0, 0.05, 6.0, {0.12, 0.04, 0.0, -0.03, 0.02}, {0.020, 0.012, 0.004, -0.006, 0.0}, 0.010, 0.002},
      {"N1_rise", 1.9, 9000.0, 0.04, 70.0, {0.10, 0.03, 0.01, -0.02, 0.0}, {-0.018, -0.006, 0.0, 0.008, -0.002}, 0.008, -0.002},
      {"WFM1_peak", 2.6, 5200.0, 0.05, 55.0, {0.13, 0.02, 0.03, -0.05, 0.01}, {-0.026, -0.008, -0.004, 0.010, 0.0}, 0.012, -0.002},
      {"P3S_rise", 2.2, 95.0, 0.04, 1.0, {0.11, 0.04, 0.0, -0.03, 0.01}, {-0.022, -0.004, 0.0, 0.020, 0.0}, 0.010, 0.002},
      {"P5T_peak", 4.8, 38.0, 0.06, 0.4, {0.15, 0.05, 0.02, -0.02, 0.02}, {-0.024, -0.010, 0.002, 0.016, -0.003}, 0.014, -0.002},
      {"NPI_valley", 3.6, 42.0, 0.05, 0.45, {0.14, 0.03, 0.01, -0.04, 0.0}, {0.018, 0.006, 0.0, -0.010, 0.003}, 0.012, 0.002},
      {"IGV_settle", 5.5, 33.0, 0.07, 0.35, {0.18, 0.06, 0.0, -0.03, 0.01}, {-0.020, -0.008, 0.0, 0.006, 0.0}, 0.016, -0.002},
      {"WFT_peak", 6.1, 9800.0, 0.07, 100.0, {0.17, 0.05, 0.02, -0.05, 0.02}, {-0.028, -0.012, 0.0, 0.012, -0.003}, 0.015, -0.003},
      {"T5_settle", 7.4, 590.0, 0.08, 6.0, {0.20, 0.07, 0.02, -0.03, 0.0}, {0.022, 0.010, 0.0, -0.008, 0.002}, 0.018, 0.002},
  };
  for (const auto& r : rows) {
    FeatureResponse f;
    f.name = r.name;
    f.x = {r.x, r.lx, {r.qx, 0.0, 0.0, 0.0, 0.0}, r.nx};
    std::vector<double> ly;
    for (double c : r.ly) ly.push_back(c * r.y);
    f.y = {r.y, ly, {r.qy * r.y, 0.0, 0.0, 0.0, 0.0}, r.ny};
    cfg.features.push_back(std::move(f));
  }

  // Shifts in noise sigmas at severity 1: delay (x up), diminish (y down).
  auto effect = [&](const char* feature, double x_sigmas, double y_sigmas) {
    auto it = std::find_if(cfg.features.begin(), cfg.features.end(),
                           [&](const FeatureResponse& f) { return f.name == feature; });
    return FaultEffect{feature, x_sigmas * it->x.noise, -y_sigmas * it->y.noise};
  };
  cfg.faults["class 1"] = {effect("THRUST_peak", 5, 6), effect("WFM1_peak", 4, 7), effect("WFT_peak", 3, 5)};
  cfg.faults["class 2"] = {effect("T5_peak", 6, 5), effect("T5_settle", 5, 4)};
  cfg.faults["class 3"] = {effect("T5_peak", 3, 6), effect("NPI_valley", 5, 4), effect("T5_settle", 4, 6)};
  cfg.faults["class 4"] = {effect("P5T_peak", 5, 5), effect("NPI_valley", 4, 6), effect("IGV_settle", 6, 4)};
  cfg.faults["class 5"] = {effect("WFM1_peak", 5, 3), effect("P3S_rise", 4, 6), effect("WFT_peak", 5, 5)};
  cfg.faults["class 6"] = {effect("N1_rise", 6, 5), effect("P3S_rise", 5, 4), effect("THRUST_peak", 3, 4)};
  cfg.faults["class 7"] = {effect("THRUST_peak", 4, 7), effect("P5T_peak", 6, 4), effect("IGV_settle", 4, 5)};

  // Detectors rarely fail on healthy curves and often on distorted ones.
  cfg.missing.base = 0.01;
  cfg.missing.severity_multiplier = 0.7;
  cfg.missing.erroneous = 0.005;
  cfg.missing.erroneous_sigmas = 40.0;

  // Temperatures follow the weather together; pressure and humidity against it.
  const std::vector<double> spread{7.0, 7.5, 5.0, 0.12, 10.0};
  const std::vector<double> loading{0.95, 0.95, 0.9, -0.6, -0.5};
  cfg.regimes["october"] = {{13.0, 12.0, 5.0, 14.55, 60.0}, spread, loading};
  cfg.regimes["november"] = {{3.0, 2.0, -3.0, 14.65, 70.0}, spread, loading};

  auto& comp = cfg.composition;
  comp.regimes = {"october", "november"};
  const std::vector<std::size_t> oct = {26, 6, 18, 20, 8, 3, 2, 39};
  const std::vector<std::size_t> nov = {26, 6, 18, 19, 7, 2, 3, 39};
  for (std::size_t c = 0; c < cfg.classes.size(); ++c) {
    comp.counts["october"][cfg.classes[c]] = oct[c];
    comp.counts["november"][cfg.classes[c]] = nov[c];
  }
  for (int c = 1; c <= 5; ++c)
    comp.severity["class " + std::to_string(c)] = {SeveritySampler::Kind::Uniform, 0.05, 1.0};
  comp.severity["class 6"] = {SeveritySampler::Kind::Fixed, 1.0, 1.0};
  comp.severity["class 7"] = {SeveritySampler::Kind::Fixed, 1.0, 1.0};
  comp.baseline_count = 16;
  return cfg;
}

}  // namespace cnorm
