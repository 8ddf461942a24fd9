#include "cnorm/serialize.hpp"

#include <algorithm>
#include <fstream>

#include "cnorm/error.hpp"

namespace cnorm {

using nlohmann::json;

namespace {

json optional_vector(const FeatureVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x ? json(*x) : json(nullptr));
  return a;
}

FeatureVector optional_vector_from(const json& a) {
  FeatureVector v;
  for (const auto& x : a) v.push_back(x.is_null() ? std::nullopt : std::optional<double>(x.get<double>()));
  return v;
}

NormMethod method_from(const json& j) {
  return j.is_number() ? norm_method_from_string(std::to_string(j.get<int>()))
                       : norm_method_from_string(j.get<std::string>());
}

MissingPolicy missing_from(const json& j) {
  return j.is_number() ? missing_policy_from_string(std::to_string(j.get<int>()))
                       : missing_policy_from_string(j.get<std::string>());
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing JSON key '") + key + "'");
  return j.at(key).get<T>();
}

}  // namespace

json to_json(const Schema& s) {
  return {{"context", s.context_names}, {"features", s.feature_names}};
}

Schema schema_from_json(const json& j) {
  return {require<std::vector<std::string>>(j, "context"),
          require<std::vector<std::string>>(j, "features")};
}

json to_json(const LinearModel& m) {
  return {{"selected", m.selected},
          {"coefficients", m.coefficients},
          {"intercept", m.intercept},
          {"ssr", m.ssr},
          {"rows", m.rows}};
}

LinearModel linear_model_from_json(const json& j) {
  LinearModel m;
  m.selected = require<std::vector<std::size_t>>(j, "selected");
  m.coefficients = require<std::vector<double>>(j, "coefficients");
  m.intercept = require<double>(j, "intercept");
  m.ssr = j.value("ssr", 0.0);
  m.rows = j.value("rows", std::size_t{0});
  if (m.selected.size() != m.coefficients.size())
    throw ConfigError("linear model: selected and coefficients differ in length");
  return m;
}

json to_json(const PipelineConfig& c) {
  return {{"method", static_cast<int>(c.method)},
          {"missing", to_string(c.norm.missing)},
          {"classifier", to_string(c.classifier)},
          {"k1", c.norm.k1},
          {"k2", c.norm.k2},
          {"k2_mode", to_string(c.norm.neighborhood)},
          {"f", c.norm.f},
          {"stepwise", c.norm.stepwise == StepwiseMode::Full ? "full" : "add-only"},
          {"d", c.norm.d},
          {"k3", c.k3},
          {"m", c.m}};
}

PipelineConfig pipeline_config_from_json(const json& j) {
  PipelineConfig c;
  if (j.contains("method")) c.method = method_from(j.at("method"));
  if (j.contains("classifier")) c.classifier = classifier_from_string(j.at("classifier").get<std::string>());
  if (c.classifier == ClassifierKind::Mlr) c.norm.d = 15.0;
  if (j.contains("missing")) c.norm.missing = missing_from(j.at("missing"));
  c.norm.k1 = j.value("k1", c.norm.k1);
  c.norm.k2 = j.value("k2", c.norm.k2);
  if (j.contains("k2_mode")) c.norm.neighborhood = neighborhood_from_string(j.at("k2_mode").get<std::string>());
  c.norm.f = j.value("f", c.norm.f);
  if (j.contains("stepwise")) {
    const auto s = j.at("stepwise").get<std::string>();
    if (s == "full") c.norm.stepwise = StepwiseMode::Full;
    else if (s == "add-only") c.norm.stepwise = StepwiseMode::AddOnly;
    else throw ConfigError("unknown stepwise mode '" + s + "'");
  }
  c.norm.d = j.value("d", c.norm.d);
  c.k3 = j.value("k3", c.k3);
  c.m = j.value("m", c.m);
  return c;
}

json to_json(const Normalizer& n) {
  PipelineConfig c;
  c.method = n.method;
  c.norm = n.params;
  json j = to_json(c);
  j.erase("classifier");
  j.erase("k3");
  j.erase("m");
  j["schema"] = to_json(n.schema);
  j["location"] = n.location;
  j["spread"] = n.spread;
  j["sorted_values"] = n.sorted_values;
  json bl = json::array();
  for (const auto& b : n.baselines)
    bl.push_back({{"id", b.id}, {"context", b.context}, {"features", optional_vector(b.features)}});
  j["baselines"] = bl;
  j["scaler"] = {{"min", n.scaler.min}, {"max", n.scaler.max}};
  json models = json::array();
  for (const auto& m : n.models) models.push_back(to_json(m));
  j["models"] = models;
  j["model_sigma"] = n.model_sigma;
  j["train_mean"] = n.train_mean;
  j["train_min"] = n.train_min;
  j["train_max"] = n.train_max;
  j["floored"] = n.floored;
  return j;
}

Normalizer normalizer_from_json(const json& j) {
  const auto c = pipeline_config_from_json(j);
  Normalizer n;
  n.method = c.method;
  n.params = c.norm;
  n.schema = schema_from_json(require<json>(j, "schema"));
  n.location = j.value("location", std::vector<double>{});
  n.spread = j.value("spread", std::vector<double>{});
  n.sorted_values = j.value("sorted_values", std::vector<std::vector<double>>{});
  if (j.contains("scaler")) {
    n.scaler.min = j.at("scaler").value("min", std::vector<double>{});
    n.scaler.max = j.at("scaler").value("max", std::vector<double>{});
  }
  for (const auto& b : j.value("baselines", json::array())) {
    BaselineInstance bi;
    bi.id = require<std::string>(b, "id");
    bi.context = require<std::vector<double>>(b, "context");
    bi.scaled_context = n.scaler.scale(bi.context);
    bi.features = optional_vector_from(require<json>(b, "features"));
    n.baselines.push_back(std::move(bi));
  }
  for (const auto& m : j.value("models", json::array())) n.models.push_back(linear_model_from_json(m));
  n.model_sigma = j.value("model_sigma", std::vector<double>{});
  n.train_mean = require<std::vector<double>>(j, "train_mean");
  n.train_min = require<std::vector<double>>(j, "train_min");
  n.train_max = require<std::vector<double>>(j, "train_max");
  n.floored = j.value("floored", std::vector<bool>(n.schema.slot_count(), false));

  const std::size_t slots = n.schema.slot_count();
  auto check = [&](std::size_t size, bool needed, const char* what) {
    if (needed && size != slots)
      throw ConfigError(std::string("normalizer: '") + what + "' does not cover every slot");
  };
  const bool loc = n.method == NormMethod::MinMaxTrain || n.method == NormMethod::AvgDevTrain ||
                   n.method == NormMethod::AvgDevBaseline;
  check(n.location.size(), loc, "location");
  check(n.spread.size(), loc, "spread");
  check(n.sorted_values.size(), n.method == NormMethod::PercentileTrain, "sorted_values");
  check(n.models.size(), n.method == NormMethod::MlrContextual, "models");
  check(n.model_sigma.size(), n.method == NormMethod::MlrContextual, "model_sigma");
  check(n.train_mean.size(), true, "train_mean");
  check(n.floored.size(), true, "floored");
  if (n.method == NormMethod::IblContextual && n.baselines.empty())
    throw ConfigError("normalizer: method 6 state has no baselines");
  return n;
}

json to_json(const IblClassifier& c) {
  return {{"kind", "ibl"}, {"k3", c.k3}, {"class_count", c.class_count},
          {"instances", c.instances}, {"labels", c.labels}};
}

IblClassifier ibl_classifier_from_json(const json& j) {
  TrainingSet t;
  t.vectors = require<std::vector<NormalizedFeatureVector>>(j, "instances");
  t.labels = require<std::vector<ClassId>>(j, "labels");
  t.class_count = require<std::size_t>(j, "class_count");
  return train_ibl(std::move(t), require<std::size_t>(j, "k3"));
}

json to_json(const MlrClassifier& c) {
  json models = json::array();
  for (const auto& m : c.models) models.push_back(to_json(m));
  return {{"kind", "mlr"}, {"m", c.m}, {"arity", c.arity}, {"models", models}};
}

MlrClassifier mlr_classifier_from_json(const json& j) {
  MlrClassifier c;
  c.m = require<std::size_t>(j, "m");
  c.arity = require<std::size_t>(j, "arity");
  for (const auto& m : require<json>(j, "models")) c.models.push_back(linear_model_from_json(m));
  return c;
}

json to_json(const FittedPipeline& p, const std::vector<std::string>& class_names) {
  return {{"config", to_json(p.config)},
          {"class_names", class_names},
          {"normalizer", to_json(p.normalizer)},
          {"classifier", p.config.classifier == ClassifierKind::Ibl ? to_json(p.ibl) : to_json(p.mlr)}};
}

FittedPipeline fitted_pipeline_from_json(const json& j) {
  FittedPipeline p;
  p.config = pipeline_config_from_json(require<json>(j, "config"));
  p.normalizer = normalizer_from_json(require<json>(j, "normalizer"));
  const auto& clf = require<json>(j, "classifier");
  if (p.config.classifier == ClassifierKind::Ibl) p.ibl = ibl_classifier_from_json(clf);
  else p.mlr = mlr_classifier_from_json(clf);
  return p;
}

json to_json(const ConfusionMatrix& cm) {
  std::vector<std::vector<std::size_t>> rows(cm.size(), std::vector<std::size_t>(cm.size()));
  for (std::size_t p = 0; p < cm.size(); ++p)
    for (std::size_t a = 0; a < cm.size(); ++a) rows[p][a] = cm(p, a);
  return {{"class_names", cm.class_names()}, {"counts", rows}};
}

json to_json(const AdjustedScore& s) {
  return {{"adjusted", s.adjusted}, {"p1", s.p1}, {"p2", s.p2},
          {"p1_mean", s.p1_mean}, {"p2_mean", s.p2_mean}};
}

json to_json(const ExperimentResult& r) {
  json j = {{"config", to_json(r.config)}, {"label", r.config.label()}};
  if (!r.ok()) {
    j["error"] = r.error;
    return j;
  }
  j["raw"] = r.raw;
  j["adjusted"] = to_json(r.adjusted);
  j["pooled"] = to_json(r.pooled);
  j["forward"] = to_json(r.forward);
  j["backward"] = to_json(r.backward);
  return j;
}

GridSpec grid_spec_from_json(const json& j) {
  GridSpec s;
  if (j.contains("methods")) {
    s.methods.clear();
    for (const auto& m : j.at("methods")) s.methods.push_back(method_from(m));
  }
  if (j.contains("missing")) {
    s.missing.clear();
    for (const auto& m : j.at("missing")) s.missing.push_back(missing_from(m));
  }
  if (j.contains("classifiers")) {
    s.classifiers.clear();
    for (const auto& c : j.at("classifiers")) s.classifiers.push_back(classifier_from_string(c.get<std::string>()));
  }
  s.k1 = j.value("k1", s.k1);
  s.k2 = j.value("k2", s.k2);
  s.k3 = j.value("k3", s.k3);
  s.f = j.value("f", s.f);
  s.m = j.value("m", s.m);
  s.d = j.value("d", s.d);
  return s;
}

std::vector<PipelineConfig> GridFile::cells() const {
  std::vector<PipelineConfig> out;
  for (const auto& g : grids)
    for (const auto& c : g.cells())
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  return out;
}

GridFile grid_file_from_json(const json& j) {
  GridFile g;
  if (j.contains("grids"))
    for (const auto& s : j.at("grids")) g.grids.push_back(grid_spec_from_json(s));
  else
    g.grids.push_back(grid_spec_from_json(j));
  for (const auto& c : j.value("compare", json::array())) {
    std::vector<NormMethod> dens;
    for (const auto& d : require<json>(c, "denominators")) dens.push_back(method_from(d));
    g.comparisons.emplace_back(method_from(require<json>(c, "numerator")), std::move(dens));
  }
  return g;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace cnorm
