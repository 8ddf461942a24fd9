#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cnorm/data.hpp"

namespace cnorm {

/// Counts indexed (predicted, actual).
class ConfusionMatrix {
public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> class_names);
  ConfusionMatrix(std::vector<std::string> class_names, std::vector<std::vector<std::size_t>> counts);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& class_names() const noexcept { return names_; }
  std::size_t operator()(ClassId predicted, ClassId actual) const {
    return counts_[predicted * size() + actual];
  }
  void add(ClassId predicted, ClassId actual, std::size_t n = 1);

  std::size_t total() const;
  std::size_t trace() const;
  std::size_t row_total(ClassId predicted) const;
  std::size_t column_total(ClassId actual) const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  bool operator==(const ConfusionMatrix&) const = default;

private:
  std::vector<std::string> names_;
  std::vector<std::size_t> counts_;
};

/// CSV: header "predicted,<class>...", then one row per predicted class
/// starting with its name.
ConfusionMatrix read_confusion_csv(std::istream& in);
ConfusionMatrix load_confusion_csv(const std::filesystem::path& path);
void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& out);

/// Percent correct. Throws Error on an empty matrix.
double raw_score(const ConfusionMatrix& cm);

struct AdjustedScore {
  double adjusted = 0.0;  // percent
  std::vector<double> p1;  // percent, p(prediction = x | actual = x)
  std::vector<double> p2;  // percent, p(actual = x | prediction = x)
  double p1_mean = 0.0;
  double p2_mean = 0.0;
};

/// Mean over all classes of (P1 + P2) / 2, with 0/0 taken as 0.
AdjustedScore adjusted_score(const ConfusionMatrix& cm);

struct RatioTest {
  std::size_t n = 0;
  double mean_ratio = 0.0;
  double sd = 0.0;
  double lower_bound = 0.0;
  bool superior = false;  // lower_bound > 1
};

/// One-sided Student-t lower confidence bound on the mean of a_i / b_i.
/// Throws ConfigError on unequal or short (< 2) inputs and on a zero
/// denominator. With zero spread the bound equals the mean.
RatioTest ratio_ttest(std::span<const double> a, std::span<const double> b, double confidence = 0.95);

struct Combination {
  ClassId label = 0;
  std::vector<double> likelihoods;  // per hypothesis class
};

/// Product over the predictions of p(predicted | actual = h), estimated
/// from the matrix columns after adding `alpha` to every cell. Ties go to the
/// lower class id.
Combination combine_observations(const ConfusionMatrix& cm, std::span<const ClassId> predictions,
                                 double alpha = 1.0);

struct ChanceBaselines {
  double constant_raw = 0.0;        // percent, always guessing the commonest class
  double proportional_adjusted = 0.0;  // percent, expected when guessing by frequency
};

ChanceBaselines chance_baselines(std::span<const std::size_t> class_counts);
ChanceBaselines chance_baselines(const LabeledDataset& ds);

/// Rounds a percentage to one decimal, as printed in reports.
double round1(double percent);

}  // namespace cnorm
