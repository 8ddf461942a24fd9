#include "cnorm/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "cnorm/error.hpp"

namespace cnorm {

Design::Design(const std::vector<std::vector<double>>& rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ConfigError("design rows have unequal length");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

double LinearModel::predict(std::span<const double> input) const {
  double v = intercept;
  for (std::size_t i = 0; i < selected.size(); ++i) v += coefficients[i] * input[selected[i]];
  return v;
}

LinearModel fit_least_squares(const Design& x, std::span<const double> y,
                              std::span<const std::size_t> variables) {
  const std::size_t n = x.rows();
  const std::size_t k = variables.size();
  if (y.size() != n) throw ConfigError("target length does not match design rows");
  for (std::size_t v : variables)
    if (v >= x.cols()) throw ConfigError("variable index out of range");
  if (n < k + 1)
    throw NumericError("underdetermined fit: " + std::to_string(n) + " rows for " +
                       std::to_string(k + 1) + " terms");

  Eigen::MatrixXd a(n, k + 1);
  Eigen::VectorXd b(n);
  for (std::size_t r = 0; r < n; ++r) {
    a(r, 0) = 1.0;
    for (std::size_t j = 0; j < k; ++j) a(r, j + 1) = x(r, variables[j]);
    b(r) = y[r];
  }
  const Eigen::VectorXd beta = a.completeOrthogonalDecomposition().solve(b);

  LinearModel m;
  m.selected.assign(variables.begin(), variables.end());
  m.intercept = beta(0);
  m.coefficients.assign(beta.data() + 1, beta.data() + beta.size());
  m.rows = n;
  m.ssr = (b - a * beta).squaredNorm();
  return m;
}

double partial_f(double ssr_without, double ssr_with, std::size_t rows, std::size_t terms_with) {
  if (rows <= terms_with) return 0.0;
  if (!(ssr_without > 0.0)) return 0.0;
  const double gain = std::max(0.0, ssr_without - ssr_with);
  if (gain <= 1e-14 * ssr_without) return 0.0;
  if (ssr_with <= 1e-14 * ssr_without) return std::numeric_limits<double>::infinity();
  return gain / (ssr_with / static_cast<double>(rows - terms_with));
}

bool zero_variance_column(const Design& x, std::size_t col) {
  if (x.rows() == 0) return true;
  double lo = x(0, col), hi = x(0, col);
  for (std::size_t r = 1; r < x.rows(); ++r) {
    lo = std::min(lo, x(r, col));
    hi = std::max(hi, x(r, col));
  }
  return hi - lo <= 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

namespace {

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<bool> candidate_mask(const Design& x) {
  std::vector<bool> ok(x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) ok[c] = !zero_variance_column(x, c);
  return ok;
}

}  // namespace

StepwiseResult stepwise_select_traced(const Design& x, std::span<const double> y, double f_threshold,
                                      StepwiseMode mode) {
  const std::size_t n = x.rows();
  const auto usable = candidate_mask(x);
  std::vector<std::size_t> included;
  std::set<std::vector<std::size_t>> seen{{}};
  StepwiseResult result;
  result.path.push_back({});

  LinearModel current = fit_least_squares(x, y, included);
  bool stop = false;
  while (!stop) {
    bool changed = false;

    // Add step.
    if (current.terms() + 1 <= n) {
      double best_f = -1.0;
      std::size_t best = x.cols();
      LinearModel best_model;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        if (!usable[c] || std::find(included.begin(), included.end(), c) != included.end()) continue;
        auto vars = included;
        vars.push_back(c);
        LinearModel trial = fit_least_squares(x, y, vars);
        const double f = partial_f(current.ssr, trial.ssr, n, trial.terms());
        if (f > best_f) {
          best_f = f;
          best = c;
          best_model = std::move(trial);
        }
      }
      if (best < x.cols() && best_f > f_threshold) {
        auto next = included;
        next.push_back(best);
        if (!seen.insert(sorted(next)).second) break;
        included = std::move(next);
        current = std::move(best_model);
        result.path.push_back(sorted(included));
        changed = true;
      }
    }

    // Remove step.
    while (mode == StepwiseMode::Full && !included.empty()) {
      double worst_f = std::numeric_limits<double>::infinity();
      std::size_t worst = included.size();
      LinearModel worst_model;
      for (std::size_t i = 0; i < included.size(); ++i) {
        auto vars = included;
        vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(i));
        LinearModel reduced = fit_least_squares(x, y, vars);
        const double f = partial_f(reduced.ssr, current.ssr, n, current.terms());
        if (f < worst_f) {
          worst_f = f;
          worst = i;
          worst_model = std::move(reduced);
        }
      }
      if (!(worst_f < f_threshold)) break;
      auto next = included;
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(worst));
      if (!seen.insert(sorted(next)).second) {
        stop = true;
        break;
      }
      included = std::move(next);
      current = std::move(worst_model);
      result.path.push_back(sorted(included));
      changed = true;
    }
    if (!changed) break;
  }
  result.model = std::move(current);
  return result;
}

LinearModel stepwise_select(const Design& x, std::span<const double> y, double f_threshold,
                            StepwiseMode mode) {
  return stepwise_select_traced(x, y, f_threshold, mode).model;
}

LinearModel forward_select_to_m(const Design& x, std::span<const double> y, std::size_t m) {
  if (m > x.cols())
    throw ConfigError("forward selection: m = " + std::to_string(m) + " exceeds " +
                      std::to_string(x.cols()) + " variables");
  const auto usable = candidate_mask(x);
  std::vector<std::size_t> included;
  LinearModel current = fit_least_squares(x, y, included);
  const double tie_tol = 1e-12 * std::max(current.ssr, 1e-300);

  while (included.size() < m) {
    std::size_t best = x.cols();
    LinearModel best_model;
    for (std::size_t c = 0; c < x.cols(); ++c) {
      if (!usable[c] || std::find(included.begin(), included.end(), c) != included.end()) continue;
      auto vars = included;
      vars.push_back(c);
      LinearModel trial = fit_least_squares(x, y, vars);
      if (best == x.cols() || trial.ssr < best_model.ssr - tie_tol) {
        best = c;
        best_model = std::move(trial);
      }
    }
    if (best == x.cols()) break;
    included.push_back(best);
    current = std::move(best_model);
  }
  return current;
}

double residual_variation(const LinearModel& model, const Design& x, std::span<const double> y) {
  const std::size_t s = x.rows();
  if (y.size() != s) throw ConfigError("target length does not match design rows");
  if (s <= model.terms())
    throw NumericError("residual variation needs more rows (" + std::to_string(s) +
                       ") than terms (" + std::to_string(model.terms()) + ")");
  double ssr = 0.0;
  for (std::size_t r = 0; r < s; ++r) {
    const double e = y[r] - model.predict(x.row(r));
    ssr += e * e;
  }
  return std::sqrt(ssr / static_cast<double>(s - model.terms()));
}

}  // namespace cnorm
