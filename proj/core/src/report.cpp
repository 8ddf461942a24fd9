#include "cnorm/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace cnorm {

std::string fixed1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", round1(v) + 0.0);
  return buf;
}

namespace {

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

}  // namespace

void print_matrix_report(std::ostream& out, const ConfusionMatrix& cm, const std::string& title) {
  const std::size_t c = cm.size();
  const auto adj = adjusted_score(cm);
  std::size_t w = 7;
  for (const auto& n : cm.class_names()) w = std::max(w, n.size() + 1);
  const std::size_t lw = std::max<std::size_t>(w, 10);

  if (!title.empty()) out << title << '\n';
  out << pad_right("pred\\act", lw);
  for (const auto& n : cm.class_names()) out << pad(n, w);
  out << pad("total", w) << pad("P2%", w) << '\n';
  for (std::size_t p = 0; p < c; ++p) {
    out << pad_right(cm.class_names()[p], lw);
    for (std::size_t a = 0; a < c; ++a) out << pad(std::to_string(cm(p, a)), w);
    out << pad(std::to_string(cm.row_total(p)), w) << pad(fixed1(adj.p2[p]), w) << '\n';
  }
  out << pad_right("total", lw);
  for (std::size_t a = 0; a < c; ++a) out << pad(std::to_string(cm.column_total(a)), w);
  out << pad(std::to_string(cm.total()), w) << pad(fixed1(adj.p2_mean), w) << '\n';
  out << pad_right("P1%", lw);
  for (std::size_t a = 0; a < c; ++a) out << pad(fixed1(adj.p1[a]), w);
  out << pad(fixed1(adj.p1_mean), w) << pad(fixed1(adj.adjusted), w) << '\n';
  out << "Raw Score: " << fixed1(raw_score(cm)) << "%, Adjusted Score: " << fixed1(adj.adjusted)
      << "%\n";
}

void print_results_table(std::ostream& out, const std::vector<ExperimentResult>& results) {
  std::size_t lw = 6;
  for (const auto& r : results) lw = std::max(lw, r.config.label().size());
  out << pad_right("config", lw) << pad("raw", 8) << pad("adjusted", 10) << '\n';
  for (const auto& r : results) {
    out << pad_right(r.config.label(), lw);
    if (r.ok()) out << pad(fixed1(r.raw), 8) << pad(fixed1(r.adjusted.adjusted), 10) << '\n';
    else out << "  error: " << r.error << '\n';
  }
}

void write_results_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  out << "method,missing,classifier,k1,k2,k3,f,m,d,raw,adjusted,p1_mean,p2_mean,error\n";
  for (const auto& r : results) {
    const auto& c = r.config;
    out << static_cast<int>(c.method) << ',' << to_string(c.norm.missing) << ',' << to_string(c.classifier)
        << ',' << c.norm.k1 << ',' << c.norm.k2 << ',' << c.k3 << ',' << format_number(c.norm.f) << ','
        << c.m << ',' << format_number(c.norm.d) << ',';
    if (r.ok()) {
      out << format_number(r.raw) << ',' << format_number(r.adjusted.adjusted) << ','
          << format_number(r.adjusted.p1_mean) << ',' << format_number(r.adjusted.p2_mean) << ",\n";
    } else {
      std::string e = r.error;
      std::replace(e.begin(), e.end(), '"', '\'');
      out << ",,,,\"" << e << "\"\n";
    }
  }
}

void print_comparison(std::ostream& out, const MethodComparison& mc) {
  out << "method " << static_cast<int>(mc.numerator) << " vs {";
  for (std::size_t i = 0; i < mc.denominators.size(); ++i)
    out << (i ? "," : "") << static_cast<int>(mc.denominators[i]);
  out << "}: n=" << mc.test.n << " mean ratio " << fixed1(100.0 * mc.test.mean_ratio)
      << "%, 95% lower bound " << fixed1(100.0 * mc.test.lower_bound) << "%, "
      << (mc.test.superior ? "better" : "not shown better") << '\n';
}

void print_combination(std::ostream& out, const ConfusionMatrix& cm, const std::vector<ClassId>& predictions,
                       const Combination& c) {
  out << "predictions:";
  for (ClassId p : predictions) out << ' ' << cm.class_names()[p];
  out << '\n';
  double sum = 0.0;
  for (double l : c.likelihoods) sum += l;
  std::size_t w = 10;
  for (const auto& n : cm.class_names()) w = std::max(w, n.size() + 2);
  out << pad_right("hypothesis", w) << pad("likelihood", 14) << pad("posterior%", 12) << '\n';
  for (std::size_t h = 0; h < c.likelihoods.size(); ++h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", c.likelihoods[h]);
    out << pad_right(cm.class_names()[h], w) << pad(buf, 14)
        << pad(fixed1(sum > 0 ? 100.0 * c.likelihoods[h] / sum : 0.0), 12) << '\n';
  }
  out << "most likely: " << cm.class_names()[c.label] << '\n';
}

}  // namespace cnorm
