#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnorm/data.hpp"

namespace cnorm {

/// A uniformly sampled sensor trace: sample i is at start + i * step.
class TransientCurve {
public:
  TransientCurve() = default;
  TransientCurve(std::string name, double start, double step, std::vector<double> values);

  /// Builds a curve from (time, value) pairs. Times must be strictly
  /// increasing with a uniform step (1e-9 relative tolerance).
  static TransientCurve from_samples(std::string name,
                                     std::span<const std::pair<double, double>> samples);

  const std::string& name() const noexcept { return name_; }
  double start() const noexcept { return start_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double time(std::size_t i) const noexcept { return start_ + static_cast<double>(i) * step_; }
  double end() const noexcept { return size() ? time(size() - 1) : start_; }

  TransientCurve shifted(double dt) const { return {name_, start_ + dt, step_, values_}; }
  TransientCurve scaled(double factor) const;

private:
  std::string name_;
  double start_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
};

enum class DetectorKind { Peak, Valley, RiseCrossing, SettlePoint };

std::string to_string(DetectorKind kind);
DetectorKind detector_kind_from_string(const std::string& s);

/// Slope-threshold landmark detector for one feature.
///
/// Peak: slope rises to >= entry (> 0), later falls to <= exit (< 0); the
/// landmark is the highest sample between the two crossings.
/// Valley: mirror image of Peak (entry < 0, exit > 0, lowest sample).
/// RiseCrossing: slope >= entry, later <= exit; landmark is the steepest
/// sample between the crossings.
/// SettlePoint: |slope| >= entry, later |slope| <= exit; landmark is the
/// first settled sample.
struct FeatureDetectorSpec {
  std::string feature;
  std::string curve;
  DetectorKind kind = DetectorKind::Peak;
  double entry_slope = 0.0;
  double exit_slope = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;

  /// Throws ConfigError when the thresholds or window are inconsistent.
  void validate() const;
};

struct Landmark {
  double x = 0.0;
  double y = 0.0;
};

/// Centered 5-point moving average; the window shrinks at the ends.
std::vector<double> smooth5(std::span<const double> values);

/// Runs one detector. Returns nullopt when no sample in the window matches
/// the slope pattern.
std::optional<Landmark> detect_landmark(const TransientCurve& curve,
                                        const FeatureDetectorSpec& spec);

/// Applies every spec in order, producing an x/y slot pair per spec.
/// Throws ConfigError when a spec names an absent curve.
FeatureVector extract_features(std::span<const TransientCurve> curves,
                               std::span<const FeatureDetectorSpec> specs);

/// Two-column time,value CSV with a header row.
TransientCurve read_curve_csv(std::istream& in, std::string name);
TransientCurve load_curve_csv(const std::filesystem::path& path, std::string name = {});
void write_curve_csv(const TransientCurve& curve, std::ostream& out);

std::vector<FeatureDetectorSpec> load_detector_specs(const std::filesystem::path& path);

}  // namespace cnorm
