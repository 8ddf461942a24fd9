#include "cnorm/phase2.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cnorm/error.hpp"
#include "cnorm/phase1.hpp"

namespace cnorm {

namespace {

void check_training_set(const TrainingSet& t) {
  if (t.vectors.empty()) throw ConfigError("empty training set");
  if (t.labels.size() != t.vectors.size()) throw ConfigError("label count does not match vectors");
  const std::size_t n = t.arity();
  for (const auto& v : t.vectors)
    if (v.size() != n) throw ConfigError("training vectors have unequal arity");
  for (ClassId c : t.labels)
    if (c >= t.class_count) throw ConfigError("training label out of range");
}

}  // namespace

IblClassifier train_ibl(TrainingSet train, std::size_t k3) {
  check_training_set(train);
  if (k3 == 0) throw ConfigError("k3 must be >= 1");
  IblClassifier clf;
  clf.instances = std::move(train.vectors);
  clf.labels = std::move(train.labels);
  clf.class_count = train.class_count;
  clf.k3 = k3;
  return clf;
}

IblPrediction classify_ibl(const IblClassifier& clf, std::span<const double> q) {
  const std::size_t n = clf.instances.size();
  std::vector<double> sim(n);
  for (std::size_t i = 0; i < n; ++i) sim[i] = similarity(q, clf.instances[i]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t k = std::min(clf.k3, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return sim[a] != sim[b] ? sim[a] > sim[b] : a < b;
                    });

  IblPrediction out;
  out.votes.assign(clf.class_count, 0);
  // First rank at which each class appears among the neighbors.
  std::vector<std::size_t> first_rank(clf.class_count, k);
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t i = order[r];
    out.neighbors.push_back({i, clf.labels[i], sim[i]});
    ++out.votes[clf.labels[i]];
    first_rank[clf.labels[i]] = std::min(first_rank[clf.labels[i]], r);
  }
  ClassId best = clf.labels[order[0]];
  for (ClassId c = 0; c < clf.class_count; ++c) {
    if (out.votes[c] > out.votes[best] ||
        (out.votes[c] == out.votes[best] && first_rank[c] < first_rank[best]))
      best = c;
  }
  out.label = best;
  return out;
}

MlrClassifier train_mlr(const TrainingSet& train, std::size_t m) {
  check_training_set(train);
  if (train.size() < 2) throw NumericError("MLR classifier needs at least 2 training rows");
  const Design x(train.vectors);
  if (m > x.cols())
    throw ConfigError("m = " + std::to_string(m) + " exceeds the " + std::to_string(x.cols()) +
                      " feature slots");
  if (train.size() < m + 1)
    throw NumericError("MLR classifier: " + std::to_string(train.size()) + " rows for " +
                       std::to_string(m + 1) + " terms");
  MlrClassifier clf;
  clf.m = m;
  clf.arity = x.cols();
  std::vector<double> y(train.size());
  for (ClassId c = 0; c < train.class_count; ++c) {
    for (std::size_t r = 0; r < y.size(); ++r) y[r] = train.labels[r] == c ? 1.0 : 0.0;
    clf.models.push_back(forward_select_to_m(x, y, m));
  }
  return clf;
}

MlrPrediction classify_mlr(const MlrClassifier& clf, std::span<const double> q) {
  if (q.size() != clf.arity) throw ConfigError("query arity does not match the classifier");
  MlrPrediction out;
  double best_gap = 0.0;
  for (ClassId c = 0; c < clf.models.size(); ++c) {
    const double p = clf.models[c].predict(q);
    out.scores.push_back(p);
    const double gap = std::abs(p - 1.0);
    if (c == 0 || gap < best_gap - 1e-12) {
      best_gap = gap;
      out.label = c;
    }
  }
  return out;
}

}  // namespace cnorm
