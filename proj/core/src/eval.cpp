#include "cnorm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "cnorm/error.hpp"

namespace cnorm {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : names_(std::move(class_names)), counts_(names_.size() * names_.size(), 0) {}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names,
                                 std::vector<std::vector<std::size_t>> counts)
    : ConfusionMatrix(std::move(class_names)) {
  if (counts.size() != size()) throw ConfigError("confusion matrix needs one row per class");
  for (std::size_t p = 0; p < size(); ++p) {
    if (counts[p].size() != size()) throw ConfigError("confusion matrix row has wrong length");
    for (std::size_t a = 0; a < size(); ++a) counts_[p * size() + a] = counts[p][a];
  }
}

void ConfusionMatrix::add(ClassId predicted, ClassId actual, std::size_t n) {
  if (predicted >= size() || actual >= size()) throw ConfigError("class id out of range");
  counts_[predicted * size() + actual] += n;
}

std::size_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t c = 0; c < size(); ++c) t += (*this)(c, c);
  return t;
}

std::size_t ConfusionMatrix::row_total(ClassId predicted) const {
  std::size_t t = 0;
  for (std::size_t a = 0; a < size(); ++a) t += (*this)(predicted, a);
  return t;
}

std::size_t ConfusionMatrix::column_total(ClassId actual) const {
  std::size_t t = 0;
  for (std::size_t p = 0; p < size(); ++p) t += (*this)(p, actual);
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (names_ != other.names_) throw ConfigError("cannot add confusion matrices over different classes");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

ConfusionMatrix read_confusion_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty confusion matrix file");
  auto header = split_csv(line);
  if (header.size() < 2) throw ParseError("confusion matrix header needs at least one class", 1);
  std::vector<std::string> names(header.begin() + 1, header.end());
  ConfusionMatrix cm(names);
  std::vector<bool> seen(names.size(), false);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != names.size() + 1)
      throw ParseError("expected " + std::to_string(names.size() + 1) + " cells, got " +
                       std::to_string(cells.size()), row);
    const auto it = std::find(names.begin(), names.end(), cells[0]);
    if (it == names.end()) throw ParseError("unknown class '" + cells[0] + "'", row);
    const auto p = static_cast<ClassId>(it - names.begin());
    if (seen[p]) throw ParseError("duplicate row for class '" + cells[0] + "'", row);
    seen[p] = true;
    for (std::size_t a = 0; a < names.size(); ++a) {
      std::size_t pos = 0;
      long long v = 0;
      try {
        v = std::stoll(cells[a + 1], &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != cells[a + 1].size() || cells[a + 1].empty() || v < 0)
        throw ParseError("count '" + cells[a + 1] + "' is not a nonnegative integer", row);
      cm.add(p, a, static_cast<std::size_t>(v));
    }
  }
  return cm;
}

ConfusionMatrix load_confusion_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_confusion_csv(in);
}

void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& out) {
  out << "predicted";
  for (const auto& n : cm.class_names()) out << ',' << n;
  out << '\n';
  for (std::size_t p = 0; p < cm.size(); ++p) {
    out << cm.class_names()[p];
    for (std::size_t a = 0; a < cm.size(); ++a) out << ',' << cm(p, a);
    out << '\n';
  }
}

double raw_score(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw Error("raw score of an empty confusion matrix");
  return 100.0 * static_cast<double>(cm.trace()) / static_cast<double>(total);
}

AdjustedScore adjusted_score(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error("adjusted score of an empty confusion matrix");
  AdjustedScore s;
  const std::size_t c = cm.size();
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
  };
  for (std::size_t x = 0; x < c; ++x) {
    s.p1.push_back(ratio(cm(x, x), cm.column_total(x)));
    s.p2.push_back(ratio(cm(x, x), cm.row_total(x)));
  }
  const double n = static_cast<double>(c);
  s.p1_mean = std::accumulate(s.p1.begin(), s.p1.end(), 0.0) / n;
  s.p2_mean = std::accumulate(s.p2.begin(), s.p2.end(), 0.0) / n;
  s.adjusted = (s.p1_mean + s.p2_mean) / 2.0;
  return s;
}

RatioTest ratio_ttest(std::span<const double> a, std::span<const double> b, double confidence) {
  if (a.size() != b.size()) throw ConfigError("ratio test needs matched score lists");
  if (a.size() < 2) throw ConfigError("ratio test needs at least 2 matched pairs");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must be in (0, 1)");
  std::vector<double> r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] == 0.0) throw ConfigError("ratio test: zero denominator at pair " + std::to_string(i + 1));
    r.push_back(a[i] / b[i]);
  }
  RatioTest t;
  t.n = r.size();
  t.mean_ratio = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(t.n);
  double ss = 0.0;
  for (double x : r) ss += (x - t.mean_ratio) * (x - t.mean_ratio);
  t.sd = std::sqrt(ss / static_cast<double>(t.n - 1));
  const boost::math::students_t dist(static_cast<double>(t.n - 1));
  const double q = boost::math::quantile(dist, confidence);
  t.lower_bound = t.mean_ratio - q * t.sd / std::sqrt(static_cast<double>(t.n));
  t.superior = t.lower_bound > 1.0;
  return t;
}

Combination combine_observations(const ConfusionMatrix& cm, std::span<const ClassId> predictions,
                                 double alpha) {
  if (predictions.empty()) throw ConfigError("no predictions to combine");
  if (alpha < 0.0) throw ConfigError("smoothing alpha must be >= 0");
  const std::size_t c = cm.size();
  for (ClassId p : predictions)
    if (p >= c) throw ConfigError("prediction " + std::to_string(p) + " is not a class of the matrix");
  if (cm.total() == 0) throw ConfigError("combination needs a nonempty confusion matrix");
  Combination out;
  for (ClassId h = 0; h < c; ++h) {
    const double den = static_cast<double>(cm.column_total(h)) + alpha * static_cast<double>(c);
    double like = den > 0.0 ? 1.0 : 0.0;
    if (den > 0.0)
      for (ClassId p : predictions) like *= (static_cast<double>(cm(p, h)) + alpha) / den;
    out.likelihoods.push_back(like);
  }
  const auto best = std::max_element(out.likelihoods.begin(), out.likelihoods.end());
  if (*best <= 0.0) throw Error("every hypothesis has zero likelihood");
  out.label = static_cast<ClassId>(best - out.likelihoods.begin());
  return out;
}

ChanceBaselines chance_baselines(std::span<const std::size_t> class_counts) {
  const std::size_t total = std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
  if (total == 0) throw ConfigError("chance baselines of an empty dataset");
  ChanceBaselines b;
  const auto most = *std::max_element(class_counts.begin(), class_counts.end());
  b.constant_raw = 100.0 * static_cast<double>(most) / static_cast<double>(total);
  double sum = 0.0;
  for (std::size_t n : class_counts) sum += static_cast<double>(n) / static_cast<double>(total);
  b.proportional_adjusted = 100.0 * sum / static_cast<double>(class_counts.size());
  return b;
}

ChanceBaselines chance_baselines(const LabeledDataset& ds) {
  std::vector<std::size_t> counts(ds.class_count(), 0);
  for (const auto& o : ds.observations()) ++counts[o.label];
  return chance_baselines(counts);
}

double round1(double percent) { return std::round(percent * 10.0) / 10.0; }

}  // namespace cnorm
