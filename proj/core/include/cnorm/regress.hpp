#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cnorm {

/// Row-major design matrix: rows() observations by cols() input variables.
class Design {
public:
  Design() = default;
  Design(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  explicit Design(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Affine model: intercept + sum of coefficient * input over the selected
/// input columns.
struct LinearModel {
  std::vector<std::size_t> selected;
  std::vector<double> coefficients;
  double intercept = 0.0;
  double ssr = 0.0;        // sum of squared residuals on the fitting rows
  std::size_t rows = 0;    // fitting row count

  /// Number of terms, counting the constant.
  std::size_t terms() const noexcept { return selected.size() + 1; }
  /// `input` is a full-width row; only the selected columns are read.
  double predict(std::span<const double> input) const;
};

/// Least squares on the given columns plus a constant. Uses a complete
/// orthogonal decomposition, so rank-deficient designs get the minimum-norm
/// solution. Throws NumericError when rows < |variables| + 1.
LinearModel fit_least_squares(const Design& x, std::span<const double> y,
                              std::span<const std::size_t> variables);

/// Partial F for the last-added term:
/// (ssr_without - ssr_with) / (ssr_with / (rows - terms_with)).
/// Returns +inf for a strict improvement down to zero residual and 0 when
/// neither model leaves residual.
double partial_f(double ssr_without, double ssr_with, std::size_t rows, std::size_t terms_with);

enum class StepwiseMode { Full, AddOnly };

struct StepwiseResult {
  LinearModel model;
  /// Every variable subset visited, in order, starting with the empty set.
  std::vector<std::vector<std::size_t>> path;
};

/// Classical stepwise selection: add the candidate with the largest partial
/// F if it exceeds `f_threshold`, then (Full mode) drop included variables
/// whose partial F falls below it, until nothing changes. Stops instead of
/// revisiting a subset. Zero-variance columns are never candidates.
StepwiseResult stepwise_select_traced(const Design& x, std::span<const double> y, double f_threshold,
                                      StepwiseMode mode = StepwiseMode::Full);
LinearModel stepwise_select(const Design& x, std::span<const double> y, double f_threshold,
                            StepwiseMode mode = StepwiseMode::Full);

/// Greedy forward selection of up to `m` variables, each step taking the
/// largest SSR reduction with no significance test. Ties go to the lowest
/// column index. Throws ConfigError when m exceeds the column count.
LinearModel forward_select_to_m(const Design& x, std::span<const double> y, std::size_t m);

/// sqrt(SSR / (s - t)) of `model` over the given rows. Throws NumericError
/// when s <= t.
double residual_variation(const LinearModel& model, const Design& x, std::span<const double> y);

/// True when the column is constant to within 1e-12 of its magnitude.
bool zero_variance_column(const Design& x, std::size_t col);

}  // namespace cnorm
