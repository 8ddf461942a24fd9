#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cnorm {

using ClassId = std::size_t;

enum class Axis { X, Y };

/// Ambient-condition values recorded with an observation.
using ContextVector = std::vector<double>;

/// Phase-0 output. Each named feature owns two consecutive slots, X then Y.
/// A disengaged optional is a Missing slot.
using FeatureVector = std::vector<std::optional<double>>;

/// Phase-1 output after missing/erroneous resolution; same slot layout as
/// the source FeatureVector.
using NormalizedFeatureVector = std::vector<double>;

/// Names of the context variables and features shared by every observation
/// of a dataset.
struct Schema {
  std::vector<std::string> context_names;
  std::vector<std::string> feature_names;

  std::size_t context_arity() const noexcept { return context_names.size(); }
  std::size_t slot_count() const noexcept { return 2 * feature_names.size(); }
  static Axis axis(std::size_t slot) noexcept { return slot % 2 == 0 ? Axis::X : Axis::Y; }
  static std::size_t slot_of(std::size_t feature, Axis axis) noexcept {
    return 2 * feature + (axis == Axis::X ? 0 : 1);
  }
  /// "name:x" / "name:y"
  std::string slot_label(std::size_t slot) const;

  bool operator==(const Schema&) const = default;

  /// The five ambient variables recorded in the engine test cell.
  static std::vector<std::string> default_context_names();
};

struct Observation {
  std::string id;
  std::string regime;
  ClassId label = 0;
  double severity = 0.0;
  ContextVector context;
  FeatureVector features;
};

/// Immutable collection of observations sharing one schema, with a declared
/// healthy class and a set of healthy baseline observations.
class LabeledDataset {
public:
  LabeledDataset() = default;

  /// Validates every invariant and throws cnorm::Error on violation.
  LabeledDataset(Schema schema, std::vector<std::string> class_names, ClassId healthy_class,
                 std::vector<Observation> observations, std::vector<std::string> baseline_ids);

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  std::size_t class_count() const noexcept { return class_names_.size(); }
  ClassId healthy_class() const noexcept { return healthy_; }
  const std::vector<Observation>& observations() const noexcept { return observations_; }
  std::size_t size() const noexcept { return observations_.size(); }
  bool empty() const noexcept { return observations_.empty(); }
  const std::vector<std::string>& baseline_ids() const noexcept { return baseline_ids_; }

  bool is_baseline(const std::string& id) const;
  /// Baseline observations, in dataset order.
  std::vector<const Observation*> baselines() const;
  std::optional<ClassId> find_class(const std::string& name) const;
  /// Regime tags in order of first appearance.
  std::vector<std::string> regimes() const;

  /// Same observations with a different baseline set.
  LabeledDataset with_baselines(std::vector<std::string> ids) const;
  /// Keeps the observations for which `keep` is true; baselines are
  /// restricted to the survivors.
  template <class Pred>
  LabeledDataset filtered(Pred keep) const {
    std::vector<Observation> out;
    for (const auto& o : observations_)
      if (keep(o)) out.push_back(o);
    return subset(std::move(out));
  }

private:
  LabeledDataset subset(std::vector<Observation> obs) const;

  Schema schema_;
  std::vector<std::string> class_names_;
  ClassId healthy_ = 0;
  std::vector<Observation> observations_;
  std::vector<std::string> baseline_ids_;
};

/// Optional explicit schema that overrides header inference when loading.
struct DatasetSchema {
  Schema schema;
  std::vector<std::string> class_names;
  std::string healthy_class;
};

DatasetSchema load_schema_json(const std::filesystem::path& path);

LabeledDataset read_dataset(std::istream& in, const std::optional<DatasetSchema>& schema = {});
LabeledDataset load_dataset(const std::filesystem::path& path,
                            const std::optional<DatasetSchema>& schema = {});
void write_dataset(const LabeledDataset& ds, std::ostream& out);
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path);

/// Greedy max-min dispersion over healthy observations in min/max-scaled
/// context space. Starts from the observation farthest from the centroid.
/// Returns at most `count` ids, in selection order.
std::vector<std::string> select_baselines(std::span<const Observation> observations,
                                          ClassId healthy_class, std::size_t count);

enum class BaselinePolicy {
  /// Re-select baselines among each side's healthy observations.
  Reselect,
  /// Keep the flagged baselines that fall on each side.
  KeepFlagged,
};

struct SplitOptions {
  std::size_t baseline_count = 16;
  BaselinePolicy policy = BaselinePolicy::Reselect;
};

struct RegimeSplit {
  LabeledDataset first;
  LabeledDataset second;
  std::vector<std::string> warnings;
};

/// Partitions by regime tag. Throws on observations carrying any other tag.
RegimeSplit split_by_regime(const LabeledDataset& ds, const std::string& regime_a,
                            const std::string& regime_b, const SplitOptions& options = {});

/// Drops faulted observations with severity below `min_severity`. Healthy
/// observations are always kept.
LabeledDataset filter_by_severity(const LabeledDataset& ds, double min_severity);

/// Shortest round-trip decimal representation.
std::string format_number(double value);

}  // namespace cnorm
