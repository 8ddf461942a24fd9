// cnorm: command-line front end for the contextual-normalization toolkit.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cnorm/data.hpp"
#include "cnorm/error.hpp"
#include "cnorm/eval.hpp"
#include "cnorm/experiment.hpp"
#include "cnorm/generator.hpp"
#include "cnorm/phase0.hpp"
#include "cnorm/report.hpp"
#include "cnorm/serialize.hpp"
#include "presets.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace cnorm;

struct Global {
  std::string format = "text";
  std::uint64_t seed = 1994;
  bool seed_given = false;
  std::size_t jobs = 1;
};

struct PipelineOpts {
  std::string normalizer = "6";
  std::string missing = "d_clamp";
  std::string classifier = "ibl";
  std::string k2_mode = "disjoint";
  std::size_t k1 = 2, k2 = 6, k3 = 1, m = 1;
  double f = 5.0;
  double d = -1.0;  // < 0: classifier default
  bool add_only = false;
  std::size_t baselines = 16;
  bool keep_flagged = false;
  std::string regime_a, regime_b;

  PipelineConfig config() const {
    PipelineConfig c;
    c.method = norm_method_from_string(normalizer);
    c.classifier = classifier_from_string(classifier);
    c.norm.missing = missing_policy_from_string(missing);
    c.norm.neighborhood = neighborhood_from_string(k2_mode);
    c.norm.k1 = k1;
    c.norm.k2 = k2;
    c.norm.f = f;
    c.norm.d = d > 0 ? d : (c.classifier == ClassifierKind::Ibl ? 50.0 : 15.0);
    c.norm.stepwise = add_only ? StepwiseMode::AddOnly : StepwiseMode::Full;
    c.k3 = k3;
    c.m = m;
    c.validate();
    return c;
  }

  SplitOptions split() const {
    return {baselines, keep_flagged ? BaselinePolicy::KeepFlagged : BaselinePolicy::Reselect};
  }
};

std::string env_name(const std::string& flag) {
  std::string s = "CNORM_";
  for (char ch : flag) s += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

// Every option gets an environment fallback named CNORM_<FLAG>.
template <class T>
CLI::Option* opt(CLI::App* app, const std::string& names, T& target, const std::string& help) {
  std::string longest;
  std::stringstream ss(names);
  for (std::string part; std::getline(ss, part, ',');)
    if (part.rfind("--", 0) == 0) longest = part.substr(2);
  auto* o = app->add_option(names, target, help)->capture_default_str();
  if (!longest.empty()) o->envname(env_name(longest));
  return o;
}

CLI::Option* flag(CLI::App* app, const std::string& names, bool& target, const std::string& help) {
  std::string longest;
  std::stringstream ss(names);
  for (std::string part; std::getline(ss, part, ',');)
    if (part.rfind("--", 0) == 0) longest = part.substr(2);
  auto* o = app->add_flag(names, target, help);
  if (!longest.empty()) o->envname(env_name(longest));
  return o;
}

void add_pipeline_options(CLI::App* app, PipelineOpts& p) {
  opt(app, "--normalizer", p.normalizer, "Normalization method 1-7 or name (ibl, mlr, avgdev_base, ...)");
  opt(app, "--missing", p.missing, "Missing policy: zero, train_average, xmax_ymin, d_clamp");
  opt(app, "--classifier", p.classifier, "Phase-2 classifier: ibl or mlr")
      ->check(CLI::IsMember({"ibl", "mlr"}));
  opt(app, "--k1", p.k1, "Baselines averaged for the expected value")->check(CLI::PositiveNumber);
  opt(app, "--k2", p.k2, "Baselines used for the expected variation")->check(CLI::PositiveNumber);
  opt(app, "--k2-mode", p.k2_mode, "K2 relative to K1: disjoint, subset, equal");
  opt(app, "--k3", p.k3, "Neighbours voting in the IBL classifier")->check(CLI::PositiveNumber);
  opt(app, "-f,--f-threshold", p.f, "Stepwise F threshold")->check(CLI::PositiveNumber);
  opt(app, "-m,--terms", p.m, "Variables per MLR class equation");
  opt(app, "-d,--clamp", p.d, "Clamp d (default 50 for ibl, 15 for mlr)");
  flag(app, "--add-only", p.add_only, "Stepwise selection without the removal step");
  opt(app, "--baselines", p.baselines, "Baselines per training side")->check(CLI::Range(2, 100000));
  flag(app, "--keep-flagged-baselines", p.keep_flagged,
       "Use the dataset's flagged baselines instead of re-selecting per side");
  opt(app, "--regime-a", p.regime_a, "First regime tag (default: first in file)");
  opt(app, "--regime-b", p.regime_b, "Second regime tag (default: second in file)");
}

// Output is assembled in memory and written only once the command succeeded.
void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("cannot write " + path);
  }
  fs::rename(tmp, target);
}

std::vector<std::string> class_names_of(const ConfusionMatrix& cm) { return cm.class_names(); }

ClassId class_index(const std::vector<std::string>& names, const std::string& s) {
  const auto it = std::find(names.begin(), names.end(), s);
  if (it == names.end()) throw ConfigError("unknown class '" + s + "'");
  return static_cast<ClassId>(it - names.begin());
}

// ---- gen -----------------------------------------------------------------

struct GenOpts {
  std::string config, out, write_config;
};

int cmd_gen(const Global& g, const GenOpts& o) {
  GeneratorConfig cfg = o.config.empty() ? GeneratorConfig::paper_shaped(g.seed)
                                         : load_generator_config(o.config);
  if (g.seed_given) cfg.seed = g.seed;
  cfg.validate();
  if (!o.write_config.empty()) emit(to_json(cfg).dump(2) + "\n", o.write_config);
  const LabeledDataset ds = generate_dataset(cfg);
  std::ostringstream csv;
  write_dataset(ds, csv);
  emit(csv.str(), o.out);

  std::ostream& info = o.out.empty() || o.out == "-" ? std::cerr : std::cout;
  std::map<std::string, std::vector<std::size_t>> per_regime;
  for (const auto& obs : ds.observations()) {
    auto& row = per_regime[obs.regime];
    row.resize(ds.class_count(), 0);
    ++row[obs.label];
  }
  if (g.format == "json") {
    json j = {{"observations", ds.size()}, {"baselines", ds.baseline_ids().size()},
              {"class_names", ds.class_names()}, {"counts", per_regime}};
    info << j.dump(2) << '\n';
  } else {
    info << ds.size() << " observations, " << ds.baseline_ids().size() << " baselines\n";
    info << "regime";
    for (const auto& n : ds.class_names()) info << ',' << n;
    info << '\n';
    for (const auto& [regime, row] : per_regime) {
      info << regime;
      for (auto n : row) info << ',' << n;
      info << '\n';
    }
  }
  return 0;
}

// ---- extract -------------------------------------------------------------

struct ExtractOpts {
  std::vector<std::string> curves;  // NAME=path
  std::string specs, out;
};

int cmd_extract(const Global& g, const ExtractOpts& o) {
  std::vector<TransientCurve> curves;
  for (const auto& c : o.curves) {
    const auto eq = c.find('=');
    if (eq == std::string::npos) curves.push_back(load_curve_csv(c));
    else curves.push_back(load_curve_csv(c.substr(eq + 1), c.substr(0, eq)));
  }
  const auto specs = load_detector_specs(o.specs);
  const auto fv = extract_features(curves, specs);
  std::ostringstream s;
  if (g.format == "json") {
    json j = json::object();
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto& x = fv[2 * i];
      const auto& y = fv[2 * i + 1];
      j[specs[i].feature] = {{"x", x ? json(*x) : json(nullptr)}, {"y", y ? json(*y) : json(nullptr)}};
    }
    s << j.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < specs.size(); ++i)
      s << (i ? "," : "") << "feat:" << specs[i].feature << ":x,feat:" << specs[i].feature << ":y";
    s << '\n';
    for (std::size_t i = 0; i < fv.size(); ++i) s << (i ? "," : "") << (fv[i] ? format_number(*fv[i]) : "");
    s << '\n';
  }
  emit(s.str(), o.out);
  return 0;
}

// ---- eval ----------------------------------------------------------------

struct DataOpts {
  std::string data, schema, out;
  double min_severity = 0.0;
};

LabeledDataset load(const DataOpts& d) {
  std::optional<DatasetSchema> schema;
  if (!d.schema.empty()) schema = load_schema_json(d.schema);
  auto ds = load_dataset(d.data, schema);
  return d.min_severity > 0.0 ? filter_by_severity(ds, d.min_severity) : ds;
}

int cmd_eval(const Global& g, const DataOpts& d, const PipelineOpts& p) {
  const auto config = p.config();
  const auto ds = load(d);
  const auto split = make_swap_split(ds, p.regime_a, p.regime_b, p.split());
  for (const auto& w : split.split.warnings) std::cerr << "warning: " << w << '\n';
  const auto r = swap_evaluate(split, config);
  std::ostringstream s;
  if (g.format == "json") {
    s << to_json(r).dump(2) << '\n';
  } else if (g.format == "csv") {
    write_results_csv(s, {r});
  } else {
    print_matrix_report(s, r.pooled, config.label());
  }
  emit(s.str(), d.out);
  return 0;
}

// ---- sweep ---------------------------------------------------------------

struct SweepOpts {
  std::string grid, preset = "comparison", csv_out;
};

int cmd_sweep(const Global& g, const DataOpts& d, const PipelineOpts& p, const SweepOpts& o) {
  const GridFile grid = o.grid.empty() ? tool::preset_grid(o.preset) : grid_file_from_json(read_json_file(o.grid));
  const auto cells = grid.cells();
  if (cells.empty()) throw ConfigError("the grid has no cells");
  const auto ds = load(d);
  const auto split = make_swap_split(ds, p.regime_a, p.regime_b, p.split());
  for (const auto& w : split.split.warnings) std::cerr << "warning: " << w << '\n';
  const auto results = factorial_experiment(split, cells, g.jobs);

  std::vector<MethodComparison> comparisons;
  for (const auto& [num, dens] : grid.comparisons) {
    try {
      comparisons.push_back(compare_methods(results, num, dens));
    } catch (const Error& e) {
      std::cerr << "comparison of method " << static_cast<int>(num) << " skipped: " << e.what() << '\n';
    }
  }

  std::ostringstream csv;
  write_results_csv(csv, results);
  std::ostringstream s;
  if (g.format == "csv") {
    s << csv.str();
  } else if (g.format == "json") {
    json j = json::object();
    j["results"] = json::array();
    for (const auto& r : results) j["results"].push_back(to_json(r));
    j["comparisons"] = json::array();
    for (const auto& c : comparisons)
      j["comparisons"].push_back({{"numerator", static_cast<int>(c.numerator)},
                                  {"n", c.test.n},
                                  {"mean_ratio", c.test.mean_ratio},
                                  {"lower_bound", c.test.lower_bound},
                                  {"superior", c.test.superior}});
    s << j.dump(2) << '\n';
  } else {
    print_results_table(s, results);
    const ExperimentResult* best = nullptr;
    for (const auto& r : results)
      if (r.ok() && (!best || r.adjusted.adjusted > best->adjusted.adjusted)) best = &r;
    if (best)
      s << "best adjusted: " << best->config.label() << " (raw " << fixed1(best->raw) << ", adjusted "
        << fixed1(best->adjusted.adjusted) << ")\n";
    for (const auto& c : comparisons) print_comparison(s, c);
  }
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.ok(); });
  if (!o.csv_out.empty()) emit(csv.str(), o.csv_out);
  emit(s.str(), d.out);
  if (failed) std::cerr << failed << " of " << results.size() << " cells failed\n";
  return 0;
}

// ---- combine / score -----------------------------------------------------

struct MatrixOpts {
  std::string matrix, out;
  std::vector<std::string> predictions;
  double alpha = 1.0;
};

int cmd_combine(const Global& g, const MatrixOpts& o) {
  if (o.predictions.empty()) throw ConfigError("combine needs at least one prediction");
  const auto cm = load_confusion_csv(o.matrix);
  std::vector<ClassId> preds;
  for (const auto& p : o.predictions) preds.push_back(class_index(class_names_of(cm), p));
  const auto c = combine_observations(cm, preds, o.alpha);
  std::ostringstream s;
  if (g.format == "json") {
    json l = json::object();
    for (std::size_t h = 0; h < c.likelihoods.size(); ++h) l[cm.class_names()[h]] = c.likelihoods[h];
    s << json{{"predictions", o.predictions}, {"likelihoods", l}, {"most_likely", cm.class_names()[c.label]}}.dump(2)
      << '\n';
  } else if (g.format == "csv") {
    s << "hypothesis,likelihood\n";
    for (std::size_t h = 0; h < c.likelihoods.size(); ++h)
      s << cm.class_names()[h] << ',' << format_number(c.likelihoods[h]) << '\n';
  } else {
    print_combination(s, cm, preds, c);
  }
  emit(s.str(), o.out);
  return 0;
}

int cmd_score(const Global& g, const MatrixOpts& o) {
  const auto cm = load_confusion_csv(o.matrix);
  const double raw = raw_score(cm);
  const auto adj = adjusted_score(cm);
  std::ostringstream s;
  if (g.format == "json") {
    json j = to_json(adj);
    j["raw"] = raw;
    j["matrix"] = to_json(cm);
    s << j.dump(2) << '\n';
  } else if (g.format == "csv") {
    s << "raw,adjusted,p1_mean,p2_mean\n"
      << format_number(raw) << ',' << format_number(adj.adjusted) << ',' << format_number(adj.p1_mean) << ','
      << format_number(adj.p2_mean) << '\n';
  } else {
    print_matrix_report(s, cm);
  }
  emit(s.str(), o.out);
  return 0;
}

int cmd_chance(const Global& g, const DataOpts& d) {
  const auto b = chance_baselines(load(d));
  std::ostringstream s;
  if (g.format == "json")
    s << json{{"constant_raw", b.constant_raw}, {"proportional_adjusted", b.proportional_adjusted}}.dump(2) << '\n';
  else if (g.format == "csv")
    s << "constant_raw,proportional_adjusted\n"
      << format_number(b.constant_raw) << ',' << format_number(b.proportional_adjusted) << '\n';
  else
    s << "constant guess raw: " << fixed1(b.constant_raw) << "%\nproportional guess adjusted: "
      << fixed1(b.proportional_adjusted) << "%\n";
  emit(s.str(), d.out);
  return 0;
}

// ---- flag ----------------------------------------------------------------

struct FlagOpts {
  double threshold = 5.0;
  std::string regime;
};

int cmd_flag(const Global& g, const DataOpts& d, const PipelineOpts& p, const FlagOpts& o) {
  auto config = p.config();
  if (o.threshold < 0) throw ConfigError("threshold must be >= 0");
  const auto ds = load(d);
  LabeledDataset train = o.regime.empty() ? ds : ds.filtered([&](const Observation& x) { return x.regime == o.regime; });
  if (train.empty()) throw ConfigError("no observations in regime '" + o.regime + "'");
  if (!p.keep_flagged || train.baseline_ids().empty())
    train = train.with_baselines(select_baselines(train.observations(), train.healthy_class(), p.baselines));
  const Normalizer norm = fit_normalizer(config.method, train, config.norm);

  struct Hit {
    std::size_t slot;
    double eta;
  };
  std::ostringstream s;
  json all = json::array();
  if (g.format == "csv") s << "id,slot,eta\n";
  for (const auto& obs : ds.observations()) {
    const auto eta = normalize_unresolved(norm, obs);
    std::vector<Hit> hits;
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < eta.size(); ++i) {
      if (!eta[i]) missing.push_back(ds.schema().slot_label(i));
      else if (std::abs(*eta[i]) > o.threshold || (o.threshold == 0.0)) hits.push_back({i, *eta[i]});
    }
    std::stable_sort(hits.begin(), hits.end(),
                     [](const Hit& a, const Hit& b) { return std::abs(a.eta) > std::abs(b.eta); });
    if (g.format == "json") {
      json h = json::array();
      for (const auto& x : hits) h.push_back({{"slot", ds.schema().slot_label(x.slot)}, {"eta", x.eta}});
      all.push_back({{"id", obs.id}, {"label", ds.class_names()[obs.label]}, {"flags", h}, {"missing", missing}});
    } else if (g.format == "csv") {
      for (const auto& x : hits) s << obs.id << ',' << ds.schema().slot_label(x.slot) << ',' << format_number(x.eta) << '\n';
    } else {
      s << obs.id << " (" << ds.class_names()[obs.label] << "):";
      if (hits.empty()) s << " none";
      for (const auto& x : hits) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%+.2f", x.eta);
        s << ' ' << ds.schema().slot_label(x.slot) << '=' << buf;
      }
      if (!missing.empty()) s << " [missing " << missing.size() << ']';
      s << '\n';
    }
  }
  if (g.format == "json") s << all.dump(2) << '\n';
  emit(s.str(), d.out);
  return 0;
}

// ---- train / predict -----------------------------------------------------

int cmd_train(const Global&, const DataOpts& d, const PipelineOpts& p, const FlagOpts& o) {
  const auto config = p.config();
  const auto ds = load(d);
  LabeledDataset train = o.regime.empty() ? ds : ds.filtered([&](const Observation& x) { return x.regime == o.regime; });
  if (train.empty()) throw ConfigError("no training observations");
  if (!p.keep_flagged || train.baseline_ids().empty())
    train = train.with_baselines(select_baselines(train.observations(), train.healthy_class(), p.baselines));
  const auto fitted = fit_pipeline(config, train);
  emit(to_json(fitted, train.class_names()).dump(1) + "\n", d.out);
  return 0;
}

struct PredictOpts {
  std::string model;
};

int cmd_predict(const Global& g, const DataOpts& d, const PredictOpts& o) {
  const json j = read_json_file(o.model);
  const auto fitted = fitted_pipeline_from_json(j);
  const auto names = j.at("class_names").get<std::vector<std::string>>();
  const auto ds = load(d);
  if (!(ds.schema() == fitted.normalizer.schema)) throw ConfigError("dataset schema does not match the model");
  std::ostringstream s;
  json out = json::array();
  if (g.format != "json") s << "id,actual,predicted\n";
  ConfusionMatrix cm(names);
  bool same_classes = ds.class_names() == names;
  for (const auto& obs : ds.observations()) {
    const auto pr = predict(fitted, obs);
    const auto& actual = ds.class_names()[obs.label];
    if (same_classes) cm.add(pr.label, obs.label);
    if (g.format == "json") out.push_back({{"id", obs.id}, {"actual", actual}, {"predicted", names[pr.label]}});
    else s << obs.id << ',' << actual << ',' << names[pr.label] << '\n';
  }
  if (g.format == "json") s << out.dump(2) << '\n';
  emit(s.str(), d.out);
  if (same_classes && g.format == "text" && cm.total() > 0)
    std::cerr << "raw " << fixed1(raw_score(cm)) << "%, adjusted " << fixed1(adjusted_score(cm).adjusted) << "%\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cnorm: contextual normalization and fault classification"};
  app.require_subcommand(1);
  Global g;
  opt(&app, "--format", g.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  auto* seed = opt(&app, "--seed", g.seed, "Random seed");
  opt(&app, "--jobs", g.jobs, "Concurrent experiment cells")->check(CLI::PositiveNumber);

  GenOpts gen;
  auto* c_gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  opt(c_gen, "--config", gen.config, "Generator config JSON (default: built-in paper-shaped config)");
  opt(c_gen, "-o,--out", gen.out, "Dataset CSV path (default stdout)");
  opt(c_gen, "--write-config", gen.write_config, "Also write the effective generator config here");

  ExtractOpts ext;
  auto* c_ext = app.add_subcommand("extract", "Extract features from transient curves");
  opt(c_ext, "--curve", ext.curves, "Curve CSV, as NAME=path or path (name from file stem)")->required();
  opt(c_ext, "--specs", ext.specs, "Detector specs JSON")->required();
  opt(c_ext, "-o,--out", ext.out, "Output path (default stdout)");

  DataOpts data;
  PipelineOpts pipe;
  auto add_data = [&](CLI::App* c) {
    opt(c, "--data", data.data, "Dataset CSV")->required();
    opt(c, "--schema", data.schema, "Schema JSON overriding header inference");
    opt(c, "-o,--out", data.out, "Output path (default stdout)");
    opt(c, "--min-severity", data.min_severity, "Drop faulted observations below this severity")
        ->check(CLI::Range(0.0, 1.01));
  };

  auto* c_eval = app.add_subcommand("eval", "Swap-test one pipeline configuration");
  add_data(c_eval);
  add_pipeline_options(c_eval, pipe);

  SweepOpts sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Run a grid of configurations");
  add_data(c_sweep);
  add_pipeline_options(c_sweep, pipe);
  opt(c_sweep, "--grid", sweep.grid, "Grid JSON file");
  opt(c_sweep, "--preset", sweep.preset, "Named grid")->check(CLI::IsMember(tool::preset_names()));
  opt(c_sweep, "--csv-out", sweep.csv_out, "Also write the results CSV here");

  MatrixOpts mat;
  auto* c_comb = app.add_subcommand("combine", "Combine several predictions for one unit");
  opt(c_comb, "--matrix", mat.matrix, "Confusion matrix CSV")->required();
  opt(c_comb, "--predictions", mat.predictions, "Predicted class names")->required();
  opt(c_comb, "--alpha", mat.alpha, "Additive smoothing per cell")->check(CLI::NonNegativeNumber);
  opt(c_comb, "-o,--out", mat.out, "Output path (default stdout)");

  auto* c_score = app.add_subcommand("score", "Score a confusion matrix");
  opt(c_score, "--matrix", mat.matrix, "Confusion matrix CSV")->required();
  opt(c_score, "-o,--out", mat.out, "Output path (default stdout)");

  auto* c_chance = app.add_subcommand("chance", "Chance-level scores of a dataset");
  add_data(c_chance);

  FlagOpts fl;
  auto* c_flag = app.add_subcommand("flag", "List anomalous normalized features");
  add_data(c_flag);
  add_pipeline_options(c_flag, pipe);
  opt(c_flag, "--threshold", fl.threshold, "Flag |eta| above this");
  opt(c_flag, "--fit-regime", fl.regime, "Fit the normalizer on this regime only");

  auto* c_train = app.add_subcommand("train", "Fit a pipeline and save it as JSON");
  add_data(c_train);
  add_pipeline_options(c_train, pipe);
  opt(c_train, "--fit-regime", fl.regime, "Train on this regime only");

  PredictOpts pred;
  auto* c_pred = app.add_subcommand("predict", "Classify a dataset with a saved pipeline");
  add_data(c_pred);
  opt(c_pred, "--model", pred.model, "Pipeline JSON from 'train'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  g.seed_given = seed->count() > 0;

  try {
    if (c_gen->parsed()) return cmd_gen(g, gen);
    if (c_ext->parsed()) return cmd_extract(g, ext);
    if (c_eval->parsed()) return cmd_eval(g, data, pipe);
    if (c_sweep->parsed()) return cmd_sweep(g, data, pipe, sweep);
    if (c_comb->parsed()) return cmd_combine(g, mat);
    if (c_score->parsed()) return cmd_score(g, mat);
    if (c_chance->parsed()) return cmd_chance(g, data);
    if (c_flag->parsed()) return cmd_flag(g, data, pipe, fl);
    if (c_train->parsed()) return cmd_train(g, data, pipe, fl);
    if (c_pred->parsed()) return cmd_predict(g, data, pred);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
