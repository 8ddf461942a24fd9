#include "cnorm/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "cnorm/error.hpp"

namespace cnorm {

namespace {

constexpr const char* kCtxPrefix = "ctx:";
constexpr const char* kFeatPrefix = "feat:";
constexpr const char* kLabelPrefix = "label:";
constexpr const char* kHealthyMark = "*";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  const std::string text = trim(cell);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw ParseError("non-numeric value '" + text + "' in column " + column, row);
  if (!std::isfinite(value))
    throw ParseError("non-finite value '" + text + "' in column " + column, row);
  return value;
}

void check_name(const std::string& name, const std::string& what) {
  if (name.empty()) throw ConfigError(what + " name is empty");
  if (name.find_first_of(",\"\n\r|") != std::string::npos)
    throw ConfigError(what + " name '" + name + "' contains a reserved character");
}

struct Header {
  Schema schema;
  std::vector<std::string> class_names;  // empty when not declared
  std::string healthy_class;
};

Header parse_header(const std::string& line) {
  const auto fields = split_fields(line);
  static const std::vector<std::string> fixed = {"id", "regime", "label", "severity",
                                                 "is_baseline"};
  if (fields.size() < fixed.size()) throw ParseError("header has too few columns", 1);

  Header h;
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    const std::string f = trim(fields[i]);
    if (i == 2 && starts_with(f, kLabelPrefix)) {
      std::string spec = f.substr(std::string(kLabelPrefix).size());
      std::stringstream ss(spec);
      std::string name;
      while (std::getline(ss, name, '|')) {
        if (starts_with(name, kHealthyMark)) {
          name = name.substr(1);
          if (!h.healthy_class.empty()) throw ParseError("two healthy classes declared", 1);
          h.healthy_class = name;
        }
        h.class_names.push_back(name);
      }
      continue;
    }
    if (f != fixed[i]) throw ParseError("expected column '" + fixed[i] + "', got '" + f + "'", 1);
  }

  std::vector<std::pair<std::string, char>> feats;
  bool in_features = false;
  for (std::size_t i = fixed.size(); i < fields.size(); ++i) {
    const std::string f = trim(fields[i]);
    if (starts_with(f, kCtxPrefix)) {
      if (in_features) throw ParseError("context column after feature columns: " + f, 1);
      h.schema.context_names.push_back(f.substr(std::string(kCtxPrefix).size()));
    } else if (starts_with(f, kFeatPrefix)) {
      in_features = true;
      const std::string rest = f.substr(std::string(kFeatPrefix).size());
      const auto colon = rest.rfind(':');
      if (colon == std::string::npos || colon + 2 != rest.size() ||
          (rest.back() != 'x' && rest.back() != 'y'))
        throw ParseError("bad feature column '" + f + "'", 1);
      feats.emplace_back(rest.substr(0, colon), rest.back());
    } else {
      throw ParseError("unrecognized column '" + f + "'", 1);
    }
  }
  if (feats.size() % 2 != 0) throw ParseError("feature columns must come in x/y pairs", 1);
  for (std::size_t i = 0; i < feats.size(); i += 2) {
    if (feats[i].second != 'x' || feats[i + 1].second != 'y' || feats[i].first != feats[i + 1].first)
      throw ParseError("feature '" + feats[i].first + "' must contribute an x column then a y column",
                       1);
    h.schema.feature_names.push_back(feats[i].first);
  }
  return h;
}

double sq(double v) { return v * v; }

}  // namespace

std::string Schema::slot_label(std::size_t slot) const {
  return feature_names.at(slot / 2) + (axis(slot) == Axis::X ? ":x" : ":y");
}

std::vector<std::string> Schema::default_context_names() {
  return {"T1", "TEX", "TDEW", "BARO", "HUMID"};
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

LabeledDataset::LabeledDataset(Schema schema, std::vector<std::string> class_names,
                               ClassId healthy_class, std::vector<Observation> observations,
                               std::vector<std::string> baseline_ids)
    : schema_(std::move(schema)),
      class_names_(std::move(class_names)),
      healthy_(healthy_class),
      observations_(std::move(observations)),
      baseline_ids_(std::move(baseline_ids)) {
  if (class_names_.empty()) throw ConfigError("dataset declares no classes");
  std::set<std::string> seen_classes;
  for (const auto& n : class_names_) {
    check_name(n, "class");
    if (!seen_classes.insert(n).second) throw ConfigError("duplicate class name '" + n + "'");
  }
  if (healthy_ >= class_names_.size()) throw ConfigError("healthy class id out of range");
  for (const auto& n : schema_.context_names) check_name(n, "context variable");
  for (const auto& n : schema_.feature_names) check_name(n, "feature");

  std::unordered_map<std::string, const Observation*> by_id;
  for (const auto& o : observations_) {
    if (o.id.empty()) throw ConfigError("observation with empty id");
    if (!by_id.emplace(o.id, &o).second) throw ConfigError("duplicate observation id '" + o.id + "'");
    if (o.context.size() != schema_.context_arity())
      throw ConfigError("observation '" + o.id + "' has wrong context arity");
    for (double c : o.context)
      if (!std::isfinite(c)) throw ConfigError("observation '" + o.id + "' has non-finite context");
    if (o.features.size() != schema_.slot_count())
      throw ConfigError("observation '" + o.id + "' has wrong feature arity");
    for (const auto& f : o.features)
      if (f && !std::isfinite(*f))
        throw ConfigError("observation '" + o.id + "' has a non-finite feature");
    if (o.label >= class_names_.size())
      throw ConfigError("observation '" + o.id + "' has an unknown class");
    if (!std::isfinite(o.severity) || o.severity < 0.0 || o.severity > 1.0)
      throw ConfigError("observation '" + o.id + "' has severity outside [0,1]");
    if (o.label == healthy_ && o.severity != 0.0)
      throw ConfigError("healthy observation '" + o.id + "' has nonzero severity");
  }
  std::set<std::string> seen_baselines;
  for (const auto& id : baseline_ids_) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ConfigError("baseline id '" + id + "' not in dataset");
    if (it->second->label != healthy_)
      throw ConfigError("baseline '" + id + "' is not a healthy observation");
    if (!seen_baselines.insert(id).second) throw ConfigError("duplicate baseline id '" + id + "'");
  }
}

bool LabeledDataset::is_baseline(const std::string& id) const {
  return std::find(baseline_ids_.begin(), baseline_ids_.end(), id) != baseline_ids_.end();
}

std::vector<const Observation*> LabeledDataset::baselines() const {
  std::unordered_set<std::string> ids(baseline_ids_.begin(), baseline_ids_.end());
  std::vector<const Observation*> out;
  for (const auto& o : observations_)
    if (ids.count(o.id)) out.push_back(&o);
  return out;
}

std::optional<ClassId> LabeledDataset::find_class(const std::string& name) const {
  auto it = std::find(class_names_.begin(), class_names_.end(), name);
  if (it == class_names_.end()) return std::nullopt;
  return static_cast<ClassId>(it - class_names_.begin());
}

std::vector<std::string> LabeledDataset::regimes() const {
  std::vector<std::string> out;
  for (const auto& o : observations_)
    if (std::find(out.begin(), out.end(), o.regime) == out.end()) out.push_back(o.regime);
  return out;
}

LabeledDataset LabeledDataset::with_baselines(std::vector<std::string> ids) const {
  return LabeledDataset(schema_, class_names_, healthy_, observations_, std::move(ids));
}

LabeledDataset LabeledDataset::subset(std::vector<Observation> obs) const {
  std::unordered_set<std::string> kept;
  for (const auto& o : obs) kept.insert(o.id);
  std::vector<std::string> bl;
  for (const auto& id : baseline_ids_)
    if (kept.count(id)) bl.push_back(id);
  return LabeledDataset(schema_, class_names_, healthy_, std::move(obs), std::move(bl));
}

DatasetSchema load_schema_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schema file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    DatasetSchema s;
    s.schema.context_names = j.at("context").get<std::vector<std::string>>();
    s.schema.feature_names = j.at("features").get<std::vector<std::string>>();
    s.class_names = j.at("classes").get<std::vector<std::string>>();
    s.healthy_class = j.at("healthy_class").get<std::string>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("schema file " + path.string() + ": " + e.what());
  }
}

LabeledDataset read_dataset(std::istream& in, const std::optional<DatasetSchema>& override_schema) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file: missing header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Header header = parse_header(line);

  if (override_schema) {
    if (override_schema->schema.context_names != header.schema.context_names ||
        override_schema->schema.feature_names != header.schema.feature_names)
      throw ParseError("header columns do not match the schema file", 1);
    header.class_names = override_schema->class_names;
    header.healthy_class = override_schema->healthy_class;
  }
  const bool classes_declared = !header.class_names.empty();
  if (header.healthy_class.empty()) header.healthy_class = "healthy";

  const std::size_t n_ctx = header.schema.context_arity();
  const std::size_t n_slots = header.schema.slot_count();
  const std::size_t n_cols = 5 + n_ctx + n_slots;

  std::vector<std::string> classes = header.class_names;
  std::vector<Observation> obs;
  std::vector<std::string> baselines;
  std::vector<std::size_t> rows;
  std::unordered_set<std::string> ids;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != n_cols)
      throw ParseError("expected " + std::to_string(n_cols) + " columns, got " +
                           std::to_string(f.size()),
                       row);
    Observation o;
    o.id = trim(f[0]);
    if (o.id.empty()) throw ParseError("empty id", row);
    if (!ids.insert(o.id).second) throw ParseError("duplicate id '" + o.id + "'", row);
    o.regime = trim(f[1]);
    const std::string label = trim(f[2]);
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) {
      if (classes_declared) throw ParseError("unknown class label '" + label + "'", row);
      check_name(label, "class");
      classes.push_back(label);
      it = classes.end() - 1;
    }
    o.label = static_cast<ClassId>(it - classes.begin());
    o.severity = parse_number(f[3], row, "severity");
    const std::string bl = trim(f[4]);
    if (bl != "0" && bl != "1") throw ParseError("is_baseline must be 0 or 1", row);
    for (std::size_t c = 0; c < n_ctx; ++c)
      o.context.push_back(parse_number(f[5 + c], row, kCtxPrefix + header.schema.context_names[c]));
    for (std::size_t s = 0; s < n_slots; ++s) {
      const std::string cell = trim(f[5 + n_ctx + s]);
      if (cell.empty()) {
        o.features.emplace_back(std::nullopt);
      } else {
        o.features.emplace_back(
            parse_number(cell, row, kFeatPrefix + header.schema.slot_label(s)));
      }
    }
    if (bl == "1") baselines.push_back(o.id);
    if (o.severity < 0.0 || o.severity > 1.0) throw ParseError("severity outside [0,1]", row);
    rows.push_back(row);
    obs.push_back(std::move(o));
  }

  auto healthy_it = std::find(classes.begin(), classes.end(), header.healthy_class);
  if (healthy_it == classes.end()) {
    if (classes_declared)
      throw ParseError("healthy class '" + header.healthy_class + "' not among declared classes", 1);
    classes.push_back(header.healthy_class);
    healthy_it = classes.end() - 1;
  }
  const ClassId healthy = static_cast<ClassId>(healthy_it - classes.begin());

  // Report invariant violations with the offending row before the dataset
  // constructor sees them.
  const std::unordered_set<std::string> bl(baselines.begin(), baselines.end());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto& o = obs[i];
    if (o.label == healthy && o.severity != 0.0)
      throw ParseError("healthy observation '" + o.id + "' has nonzero severity", rows[i]);
    if (o.label != healthy && bl.count(o.id))
      throw ParseError("baseline '" + o.id + "' is not a healthy observation", rows[i]);
  }
  return LabeledDataset(std::move(header.schema), std::move(classes), healthy, std::move(obs),
                        std::move(baselines));
}

LabeledDataset load_dataset(const std::filesystem::path& path,
                            const std::optional<DatasetSchema>& schema) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset " + path.string());
  if (!schema) {
    const std::filesystem::path sidecar = path.string() + ".schema.json";
    if (std::filesystem::exists(sidecar)) return read_dataset(in, load_schema_json(sidecar));
  }
  return read_dataset(in, schema);
}

void write_dataset(const LabeledDataset& ds, std::ostream& out) {
  const Schema& schema = ds.schema();
  out << "id,regime," << kLabelPrefix;
  for (std::size_t c = 0; c < ds.class_count(); ++c) {
    if (c) out << '|';
    if (c == ds.healthy_class()) out << kHealthyMark;
    out << ds.class_names()[c];
  }
  out << ",severity,is_baseline";
  for (const auto& n : schema.context_names) out << ',' << kCtxPrefix << n;
  for (std::size_t s = 0; s < schema.slot_count(); ++s)
    out << ',' << kFeatPrefix << schema.slot_label(s);
  out << '\n';

  const std::unordered_set<std::string> bl(ds.baseline_ids().begin(), ds.baseline_ids().end());
  for (const auto& o : ds.observations()) {
    out << o.id << ',' << o.regime << ',' << ds.class_names()[o.label] << ','
        << format_number(o.severity) << ',' << (bl.count(o.id) ? '1' : '0');
    for (double c : o.context) out << ',' << format_number(c);
    for (const auto& f : o.features) {
      out << ',';
      if (f) out << format_number(*f);
    }
    out << '\n';
  }
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset " + path.string());
  write_dataset(ds, out);
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<std::string> select_baselines(std::span<const Observation> observations,
                                          ClassId healthy_class, std::size_t count) {
  std::vector<const Observation*> cand;
  for (const auto& o : observations)
    if (o.label == healthy_class) cand.push_back(&o);
  if (cand.empty() || count == 0) return {};

  const std::size_t dim = cand.front()->context.size();
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (const auto* o : cand)
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], o->context[d]);
      hi[d] = std::max(hi[d], o->context[d]);
    }
  std::vector<std::vector<double>> pts;
  for (const auto* o : cand) {
    std::vector<double> p(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d)
      if (hi[d] > lo[d]) p[d] = (o->context[d] - lo[d]) / (hi[d] - lo[d]);
    pts.push_back(std::move(p));
  }
  auto dist2 = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) s += sq(a[d] - b[d]);
    return s;
  };

  std::vector<double> centroid(dim, 0.0);
  for (const auto& p : pts)
    for (std::size_t d = 0; d < dim; ++d) centroid[d] += p[d] / static_cast<double>(pts.size());

  std::vector<bool> taken(pts.size(), false);
  std::vector<double> nearest(pts.size(), std::numeric_limits<double>::infinity());
  std::vector<std::string> out;

  std::size_t first = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (dist2(pts[i], centroid) > dist2(pts[first], centroid)) first = i;

  std::size_t next = first;
  while (out.size() < std::min(count, pts.size())) {
    taken[next] = true;
    out.push_back(cand[next]->id);
    for (std::size_t i = 0; i < pts.size(); ++i)
      nearest[i] = std::min(nearest[i], dist2(pts[i], pts[next]));
    double best = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (!taken[i] && nearest[i] > best) {
        best = nearest[i];
        next = i;
      }
  }
  return out;
}

RegimeSplit split_by_regime(const LabeledDataset& ds, const std::string& regime_a,
                            const std::string& regime_b, const SplitOptions& options) {
  if (regime_a == regime_b) throw ConfigError("split regimes must differ");
  for (const auto& o : ds.observations())
    if (o.regime != regime_a && o.regime != regime_b)
      throw ConfigError("observation '" + o.id + "' has regime '" + o.regime +
                        "', expected '" + regime_a + "' or '" + regime_b + "'");

  RegimeSplit split;
  auto side = [&](const std::string& tag) {
    LabeledDataset part = ds.filtered([&](const Observation& o) { return o.regime == tag; });
    if (part.empty()) split.warnings.push_back("regime '" + tag + "' has no observations");
    if (options.policy == BaselinePolicy::Reselect) {
      auto ids = select_baselines(part.observations(), part.healthy_class(), options.baseline_count);
      if (ids.size() < options.baseline_count && !part.empty())
        split.warnings.push_back("regime '" + tag + "' has only " + std::to_string(ids.size()) +
                                 " healthy observations for " +
                                 std::to_string(options.baseline_count) + " baselines");
      part = part.with_baselines(std::move(ids));
    }
    return part;
  };
  split.first = side(regime_a);
  split.second = side(regime_b);
  return split;
}

LabeledDataset filter_by_severity(const LabeledDataset& ds, double min_severity) {
  const ClassId healthy = ds.healthy_class();
  return ds.filtered(
      [&](const Observation& o) { return o.label == healthy || o.severity >= min_severity; });
}

}  // namespace cnorm
