#include "cnorm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "cnorm/error.hpp"

namespace cnorm {

std::string to_string(ClassifierKind k) { return k == ClassifierKind::Ibl ? "ibl" : "mlr"; }

ClassifierKind classifier_from_string(const std::string& s) {
  if (s == "ibl") return ClassifierKind::Ibl;
  if (s == "mlr") return ClassifierKind::Mlr;
  throw ConfigError("unknown classifier '" + s + "' (expected ibl or mlr)");
}

namespace {

double default_d(ClassifierKind k) { return k == ClassifierKind::Ibl ? 50.0 : 15.0; }

}  // namespace

void PipelineConfig::validate() const {
  norm.validate(method);
  if (k3 < 1) throw ConfigError("k3 must be >= 1");
}

PipelineConfig PipelineConfig::canonical() const {
  PipelineConfig c = *this;
  const NormalizerParams defaults;
  if (method != NormMethod::IblContextual) {
    c.norm.k1 = defaults.k1;
    c.norm.k2 = defaults.k2;
    c.norm.neighborhood = defaults.neighborhood;
  }
  if (method != NormMethod::MlrContextual) {
    c.norm.f = defaults.f;
    c.norm.stepwise = defaults.stepwise;
  }
  if (classifier == ClassifierKind::Ibl) c.m = 1;
  else c.k3 = 1;
  if (norm.missing != MissingPolicy::DClamp) c.norm.d = default_d(classifier);
  return c;
}

std::string PipelineConfig::label() const {
  std::ostringstream s;
  s << "method=" << static_cast<int>(method) << " missing=" << to_string(norm.missing) << ' '
    << to_string(classifier);
  if (method == NormMethod::IblContextual) {
    s << " k1=" << norm.k1 << " k2=" << norm.k2;
    if (norm.neighborhood != NeighborhoodMode::Disjoint) s << " k2mode=" << to_string(norm.neighborhood);
  }
  if (method == NormMethod::MlrContextual) {
    s << " f=" << format_number(norm.f);
    if (norm.stepwise == StepwiseMode::AddOnly) s << " add-only";
  }
  if (classifier == ClassifierKind::Ibl) s << " k3=" << k3;
  else s << " m=" << m;
  if (norm.missing == MissingPolicy::DClamp) s << " d=" << format_number(norm.d);
  return s.str();
}

bool PipelineConfig::operator==(const PipelineConfig& o) const {
  return method == o.method && classifier == o.classifier && k3 == o.k3 && m == o.m &&
         norm.k1 == o.norm.k1 && norm.k2 == o.norm.k2 && norm.f == o.norm.f && norm.d == o.norm.d &&
         norm.missing == o.norm.missing && norm.stepwise == o.norm.stepwise &&
         norm.neighborhood == o.norm.neighborhood;
}

PipelineConfig PipelineConfig::cnibl() { return {}; }

PipelineConfig PipelineConfig::cnmlr() {
  PipelineConfig c;
  c.method = NormMethod::MlrContextual;
  c.classifier = ClassifierKind::Mlr;
  c.norm.d = 15.0;
  return c;
}

FittedPipeline fit_pipeline(const PipelineConfig& config, const LabeledDataset& train) {
  config.validate();
  FittedPipeline p;
  p.config = config;
  p.normalizer = fit_normalizer(config.method, train, config.norm);
  TrainingSet ts;
  ts.class_count = train.class_count();
  for (const auto& o : train.observations()) {
    ts.vectors.push_back(normalize(p.normalizer, o));
    ts.labels.push_back(o.label);
  }
  if (config.classifier == ClassifierKind::Ibl) p.ibl = train_ibl(std::move(ts), config.k3);
  else p.mlr = train_mlr(ts, config.m);
  return p;
}

Prediction predict(const FittedPipeline& p, const Observation& obs) {
  Prediction out;
  out.normalized = normalize(p.normalizer, obs);
  if (p.config.classifier == ClassifierKind::Ibl) {
    out.ibl = classify_ibl(p.ibl, out.normalized);
    out.label = out.ibl.label;
  } else {
    out.mlr = classify_mlr(p.mlr, out.normalized);
    out.label = out.mlr.label;
  }
  return out;
}

ConfusionMatrix evaluate(const FittedPipeline& p, const LabeledDataset& test) {
  const auto& names = test.class_names();
  ConfusionMatrix cm(names);
  for (const auto& o : test.observations()) cm.add(predict(p, o).label, o.label);
  return cm;
}

SwapSplit make_swap_split(const LabeledDataset& ds, std::string regime_a, std::string regime_b,
                          const SplitOptions& options) {
  if (regime_a.empty() || regime_b.empty()) {
    const auto regimes = ds.regimes();
    if (regimes.size() < 2)
      throw ConfigError("swap evaluation needs two regimes, the dataset has " +
                        std::to_string(regimes.size()));
    if (regime_a.empty()) regime_a = regimes[0] == regime_b ? regimes[1] : regimes[0];
    if (regime_b.empty()) regime_b = regimes[0] == regime_a ? regimes[1] : regimes[0];
  }
  SwapSplit s{regime_a, regime_b, split_by_regime(ds, regime_a, regime_b, options)};
  if (s.split.first.empty() || s.split.second.empty())
    throw ConfigError("swap evaluation needs observations in both '" + regime_a + "' and '" +
                      regime_b + "'");
  return s;
}

ExperimentResult swap_evaluate(const SwapSplit& split, const PipelineConfig& config) {
  ExperimentResult r;
  r.config = config;
  try {
    r.forward = evaluate(fit_pipeline(config, split.split.first), split.split.second);
    r.backward = evaluate(fit_pipeline(config, split.split.second), split.split.first);
  } catch (const ConfigError& e) {
    throw ConfigError(config.label() + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(config.label() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(config.label() + ": " + e.what());
  }
  r.pooled = r.forward;
  r.pooled += r.backward;
  r.raw = raw_score(r.pooled);
  r.adjusted = adjusted_score(r.pooled);
  return r;
}

ExperimentResult swap_evaluate(const LabeledDataset& ds, const PipelineConfig& config) {
  return swap_evaluate(make_swap_split(ds), config);
}

std::vector<ExperimentResult> factorial_experiment(const SwapSplit& split,
                                                   const std::vector<PipelineConfig>& cells,
                                                   std::size_t jobs) {
  std::vector<ExperimentResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        results[i] = swap_evaluate(split, cells[i]);
      } catch (const std::exception& e) {
        results[i] = ExperimentResult{};
        results[i].config = cells[i];
        results[i].error = e.what();
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return results;
}

std::vector<PipelineConfig> GridSpec::cells() const {
  std::vector<PipelineConfig> out;
  for (auto method : methods)
    for (auto miss : missing)
      for (auto clf : classifiers)
        for (auto a : k1)
          for (auto b : k2)
            for (auto c : k3)
              for (auto fv : f)
                for (auto mv : m) {
                  std::vector<double> ds = d.empty() ? std::vector<double>{default_d(clf)} : d;
                  for (double dv : ds) {
                    PipelineConfig p;
                    p.method = method;
                    p.classifier = clf;
                    p.norm.missing = miss;
                    p.norm.k1 = a;
                    p.norm.k2 = b;
                    p.norm.f = fv;
                    p.norm.d = dv;
                    p.k3 = c;
                    p.m = mv;
                    p = p.canonical();
                    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
                  }
                }
  return out;
}

GridSpec comparison_grid() {
  GridSpec g;
  g.methods.clear();
  for (int i = 1; i <= 7; ++i) g.methods.push_back(static_cast<NormMethod>(i));
  g.missing = {MissingPolicy::Zero, MissingPolicy::TrainAverage, MissingPolicy::XMaxYMin};
  g.classifiers = {ClassifierKind::Ibl, ClassifierKind::Mlr};
  return g;
}

MethodComparison compare_methods(const std::vector<ExperimentResult>& results, NormMethod numerator,
                                 const std::vector<NormMethod>& denominators, double confidence) {
  MethodComparison mc;
  mc.numerator = numerator;
  mc.denominators = denominators;
  auto key = [](PipelineConfig c) {
    c = c.canonical();
    const NormalizerParams defaults;
    c.norm.k1 = defaults.k1;
    c.norm.k2 = defaults.k2;
    c.norm.neighborhood = defaults.neighborhood;
    c.norm.f = defaults.f;
    c.norm.stepwise = defaults.stepwise;
    c.method = NormMethod::None;
    return c;
  };
  std::vector<double> a, b;
  for (NormMethod den : denominators)
    for (std::size_t j = 0; j < results.size(); ++j) {
      if (results[j].config.method != den || !results[j].ok()) continue;
      for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].config.method != numerator || !results[i].ok()) continue;
        if (!(key(results[i].config) == key(results[j].config))) continue;
        mc.pairs.emplace_back(i, j);
        a.push_back(results[i].adjusted.adjusted);
        b.push_back(results[j].adjusted.adjusted);
        break;
      }
    }
  mc.test = ratio_ttest(a, b, confidence);
  return mc;
}

}  // namespace cnorm
