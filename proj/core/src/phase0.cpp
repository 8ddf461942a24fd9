#include "cnorm/phase0.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cnorm/error.hpp"

namespace cnorm {

TransientCurve::TransientCurve(std::string name, double start, double step,
                               std::vector<double> values)
    : name_(std::move(name)), start_(start), step_(step), values_(std::move(values)) {
  if (!(step_ > 0.0) || !std::isfinite(step_)) throw ConfigError("curve step must be positive");
  for (double v : values_)
    if (!std::isfinite(v)) throw ConfigError("curve '" + name_ + "' has a non-finite sample");
}

TransientCurve TransientCurve::from_samples(std::string name,
                                            std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 2) throw ConfigError("curve '" + name + "' needs at least two samples");
  const double t0 = samples.front().first;
  const double step = (samples.back().first - t0) / static_cast<double>(samples.size() - 1);
  if (!(step > 0.0)) throw ConfigError("curve '" + name + "' times are not increasing");
  std::vector<double> values;
  values.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double expected = t0 + static_cast<double>(i) * step;
    if (i > 0 && !(samples[i].first > samples[i - 1].first))
      throw ConfigError("curve '" + name + "' times are not strictly increasing");
    if (std::abs(samples[i].first - expected) > 1e-9 * std::max(std::abs(expected), step))
      throw ConfigError("curve '" + name + "' is not uniformly sampled");
    values.push_back(samples[i].second);
  }
  return {std::move(name), t0, step, std::move(values)};
}

TransientCurve TransientCurve::scaled(double factor) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= factor;
  return {name_, start_, step_, std::move(v)};
}

std::string to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::Peak: return "peak";
    case DetectorKind::Valley: return "valley";
    case DetectorKind::RiseCrossing: return "rise-crossing";
    case DetectorKind::SettlePoint: return "settle-point";
  }
  return "?";
}

DetectorKind detector_kind_from_string(const std::string& s) {
  if (s == "peak") return DetectorKind::Peak;
  if (s == "valley") return DetectorKind::Valley;
  if (s == "rise-crossing") return DetectorKind::RiseCrossing;
  if (s == "settle-point") return DetectorKind::SettlePoint;
  throw ConfigError("unknown detector kind '" + s + "'");
}

void FeatureDetectorSpec::validate() const {
  if (!(t_min < t_max)) throw ConfigError("detector '" + feature + "': t_min must be < t_max");
  switch (kind) {
    case DetectorKind::Peak:
      if (!(entry_slope > 0.0 && exit_slope < 0.0))
        throw ConfigError("peak detector '" + feature + "' needs entry > 0 > exit");
      break;
    case DetectorKind::Valley:
      if (!(entry_slope < 0.0 && exit_slope > 0.0))
        throw ConfigError("valley detector '" + feature + "' needs entry < 0 < exit");
      break;
    case DetectorKind::RiseCrossing:
      if (!(entry_slope > 0.0 && exit_slope < entry_slope))
        throw ConfigError("rise-crossing detector '" + feature + "' needs entry > 0 and exit < entry");
      break;
    case DetectorKind::SettlePoint:
      if (!(entry_slope > 0.0 && exit_slope >= 0.0 && exit_slope < entry_slope))
        throw ConfigError("settle-point detector '" + feature + "' needs entry > exit >= 0");
      break;
  }
}

std::vector<double> smooth5(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(n - 1, i + 2);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) s += values[j];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::optional<Landmark> detect_landmark(const TransientCurve& curve,
                                        const FeatureDetectorSpec& spec) {
  spec.validate();
  const auto& raw = curve.values();
  if (raw.size() < 2) return std::nullopt;

  // Window as an index range; ceil/floor keep it inside [t_min, t_max].
  const double first_idx = std::ceil((spec.t_min - curve.start()) / curve.step());
  const double last_idx = std::floor((spec.t_max - curve.start()) / curve.step());
  const double max_idx = static_cast<double>(raw.size() - 1);
  if (last_idx < 0.0 || first_idx > max_idx) return std::nullopt;
  const std::size_t lo = static_cast<std::size_t>(std::max(0.0, first_idx));
  const std::size_t hi = static_cast<std::size_t>(std::min(max_idx, last_idx));
  if (hi <= lo) return std::nullopt;

  // Forward-difference slope of the smoothed curve, slope[i] between i, i+1.
  const auto smooth = smooth5(raw);
  std::vector<double> slope(raw.size() - 1);
  for (std::size_t i = 0; i + 1 < raw.size(); ++i)
    slope[i] = (smooth[i + 1] - smooth[i]) / curve.step();

  auto entered = [&](double s) {
    switch (spec.kind) {
      case DetectorKind::Peak:
      case DetectorKind::RiseCrossing: return s >= spec.entry_slope;
      case DetectorKind::Valley: return s <= spec.entry_slope;
      case DetectorKind::SettlePoint: return std::abs(s) >= spec.entry_slope;
    }
    return false;
  };
  auto exited = [&](double s) {
    switch (spec.kind) {
      case DetectorKind::Peak:
      case DetectorKind::RiseCrossing: return s <= spec.exit_slope;
      case DetectorKind::Valley: return s >= spec.exit_slope;
      case DetectorKind::SettlePoint: return std::abs(s) <= spec.exit_slope;
    }
    return false;
  };

  std::size_t i = lo;
  while (i < hi && !entered(slope[i])) ++i;
  if (i >= hi) return std::nullopt;
  const std::size_t entry = i;
  while (i < hi && !exited(slope[i])) ++i;
  if (i >= hi) return std::nullopt;
  // The exit slope spans samples i and i+1; include both.
  const std::size_t exit = i + 1;

  std::size_t best = entry;
  switch (spec.kind) {
    case DetectorKind::Peak:
      for (std::size_t k = entry; k <= exit; ++k)
        if (raw[k] > raw[best]) best = k;
      break;
    case DetectorKind::Valley:
      for (std::size_t k = entry; k <= exit; ++k)
        if (raw[k] < raw[best]) best = k;
      break;
    case DetectorKind::RiseCrossing:
      for (std::size_t k = entry; k < exit; ++k)
        if (slope[k] > slope[best]) best = k;
      break;
    case DetectorKind::SettlePoint:
      best = i;
      break;
  }
  return Landmark{curve.time(best), raw[best]};
}

FeatureVector extract_features(std::span<const TransientCurve> curves,
                               std::span<const FeatureDetectorSpec> specs) {
  FeatureVector out;
  out.reserve(2 * specs.size());
  for (const auto& spec : specs) {
    auto it = std::find_if(curves.begin(), curves.end(),
                           [&](const TransientCurve& c) { return c.name() == spec.curve; });
    if (it == curves.end())
      throw ConfigError("detector '" + spec.feature + "' references absent curve '" + spec.curve +
                        "'");
    if (auto lm = detect_landmark(*it, spec)) {
      out.emplace_back(lm->x);
      out.emplace_back(lm->y);
    } else {
      out.emplace_back(std::nullopt);
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

TransientCurve read_curve_csv(std::istream& in, std::string name) {
  std::string line;
  std::vector<std::pair<double, double>> samples;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected time,value", row);
    auto parse = [&](std::string_view text, double& out) {
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
      return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
    };
    std::string_view sv(line);
    double t = 0.0, v = 0.0;
    const bool ok = parse(sv.substr(0, comma), t) && parse(sv.substr(comma + 1), v);
    if (!ok) {
      if (row == 1) continue;  // header
      throw ParseError("non-numeric sample", row);
    }
    samples.emplace_back(t, v);
  }
  return TransientCurve::from_samples(std::move(name), samples);
}

TransientCurve load_curve_csv(const std::filesystem::path& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open curve " + path.string());
  if (name.empty()) name = path.stem().string();
  return read_curve_csv(in, std::move(name));
}

void write_curve_csv(const TransientCurve& curve, std::ostream& out) {
  out << "time,value\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    out << format_number(curve.time(i)) << ',' << format_number(curve.values()[i]) << '\n';
}

std::vector<FeatureDetectorSpec> load_detector_specs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open detector specs " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    const auto& arr = j.is_array() ? j : j.at("detectors");
    std::vector<FeatureDetectorSpec> out;
    for (const auto& d : arr) {
      FeatureDetectorSpec s;
      s.feature = d.at("feature").get<std::string>();
      s.curve = d.at("curve").get<std::string>();
      s.kind = detector_kind_from_string(d.at("kind").get<std::string>());
      s.entry_slope = d.at("entry_slope").get<double>();
      s.exit_slope = d.at("exit_slope").get<double>();
      s.t_min = d.at("t_min").get<double>();
      s.t_max = d.at("t_max").get<double>();
      s.validate();
      out.push_back(std::move(s));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("detector specs " + path.string() + ": " + e.what());
  }
}

}  // namespace cnorm
