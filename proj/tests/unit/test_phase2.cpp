#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cnorm/error.hpp"
#include "cnorm/phase2.hpp"
#include "support/oracles.hpp"

using namespace cnorm;

namespace {

TrainingSet make_set(std::vector<NormalizedFeatureVector> v, std::vector<ClassId> labels, std::size_t classes) {
  return {std::move(v), std::move(labels), classes};
}

/// Two clusters per class arranged as an exclusive-or, which no single
/// hyperplane separates.
TrainingSet xor_set(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 0.15);
  std::bernoulli_distribution coin(0.5);
  TrainingSet t;
  t.class_count = 2;
  for (std::size_t i = 0; i < n; ++i) {
    const bool a = coin(rng), b = coin(rng);
    t.vectors.push_back({(a ? 1.0 : -1.0) + g(rng), (b ? 1.0 : -1.0) + g(rng)});
    t.labels.push_back(a == b ? 0 : 1);
  }
  return t;
}

}  // namespace

TEST_SUITE("phase2") {
  TEST_CASE("a single instance decides everything") {
    const auto clf = train_ibl(make_set({{1.0, 2.0}}, {1}, 2), 3);
    CHECK(classify_ibl(clf, std::vector<double>{-50.0, 7.0}).label == 1);
    CHECK(classify_ibl(clf, std::vector<double>{-50.0, 7.0}).neighbors.size() == 1);
  }

  TEST_CASE("duplicate instances: the earlier one ranks first") {
    const auto clf = train_ibl(make_set({{0.5, 0.5}, {0.5, 0.5}}, {1, 0}, 2), 1);
    const auto p = classify_ibl(clf, std::vector<double>{0.0, 0.0});
    CHECK(p.label == 1);
    CHECK(p.neighbors[0].index == 0);
  }

  TEST_CASE("vote ties go to the class holding the nearest neighbour") {
    // Similarities to the zero query: 4.2 for class 1, 3.9 for class 0.
    const auto set = make_set({{1.1, 0, 0, 0, 0}, {0.8, 0, 0, 0, 0}}, {0, 1}, 2);
    const std::vector<double> q(5, 0.0);
    const auto p2 = classify_ibl(train_ibl(set, 2), q);
    CHECK(p2.label == 1);
    CHECK(p2.votes == std::vector<std::size_t>{1, 1});
    CHECK(p2.neighbors[0].similarity == doctest::Approx(4.2));
    CHECK(p2.neighbors[1].similarity == doctest::Approx(3.9));
    CHECK(classify_ibl(train_ibl(set, 1), q).label == 1);
  }

  TEST_CASE("plurality beats proximity") {
    const auto set = make_set({{0.8, 0, 0}, {1.1, 0, 0}, {1.2, 0, 0}}, {1, 0, 0}, 2);
    const std::vector<double> q(3, 0.0);
    CHECK(classify_ibl(train_ibl(set, 1), q).label == 1);
    CHECK(classify_ibl(train_ibl(set, 3), q).label == 0);
  }

  TEST_CASE("k3 = 2 always agrees with k3 = 1") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> cell(-2, 2);
    std::uniform_int_distribution<std::size_t> cls(0, 3);
    for (int trial = 0; trial < 300; ++trial) {
      TrainingSet t;
      t.class_count = 4;
      for (int i = 0; i < 12; ++i) {
        t.vectors.push_back({double(cell(rng)), double(cell(rng))});
        t.labels.push_back(cls(rng));
      }
      const std::vector<double> q = {double(cell(rng)), double(cell(rng))};
      CHECK(classify_ibl(train_ibl(t, 1), q).label == classify_ibl(train_ibl(t, 2), q).label);
    }
  }

  TEST_CASE("k-NN matches enumeration on random sets") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> cell(-3, 3), dims(1, 4), size(1, 25), classes(2, 5);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t dim = dims(rng), n = size(rng), c = classes(rng);
      std::uniform_int_distribution<std::size_t> lab(0, c - 1);
      TrainingSet t;
      t.class_count = c;
      for (std::size_t i = 0; i < n; ++i) {
        NormalizedFeatureVector v(dim);
        for (auto& x : v) x = cell(rng) * 0.5;  // coarse grid: many similarity ties
        t.vectors.push_back(v);
        t.labels.push_back(lab(rng));
      }
      std::vector<double> q(dim);
      for (auto& x : q) x = cell(rng) * 0.5;
      const std::size_t k3 = 1 + trial % 7;
      CAPTURE(trial);
      CHECK(classify_ibl(train_ibl(t, k3), q).label ==
            oracle::knn_vote(t.vectors, t.labels, c, q, std::min(k3, n)));
    }
  }

  TEST_CASE("instance order does not matter without similarity ties") {
    std::mt19937_64 rng(55);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> lab(0, 2);
    TrainingSet t;
    t.class_count = 3;
    for (int i = 0; i < 30; ++i) {
      t.vectors.push_back({g(rng), g(rng), g(rng)});
      t.labels.push_back(lab(rng));
    }
    std::vector<std::vector<double>> queries;
    for (int i = 0; i < 50; ++i) queries.push_back({g(rng), g(rng), g(rng)});
    std::vector<ClassId> before;
    for (const auto& q : queries) before.push_back(classify_ibl(train_ibl(t, 5), q).label);
    std::vector<std::size_t> perm(t.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    TrainingSet s;
    s.class_count = 3;
    for (std::size_t i : perm) {
      s.vectors.push_back(t.vectors[i]);
      s.labels.push_back(t.labels[i]);
    }
    for (std::size_t i = 0; i < queries.size(); ++i) CHECK(classify_ibl(train_ibl(s, 5), queries[i]).label == before[i]);
  }

  TEST_CASE("training set validation") {
    CHECK_THROWS_AS(train_ibl(make_set({}, {}, 2)), ConfigError);
    CHECK_THROWS_AS(train_ibl(make_set({{1.0}}, {0}, 2), 0), ConfigError);
    CHECK_THROWS_AS(train_ibl(make_set({{1.0}, {1.0, 2.0}}, {0, 1}, 2)), ConfigError);
    CHECK_THROWS_AS(train_ibl(make_set({{1.0}}, {2}, 2)), ConfigError);
    CHECK_THROWS_AS(train_mlr(make_set({{1.0}}, {0}, 2)), NumericError);
    CHECK_THROWS_AS(train_mlr(make_set({{1.0}, {2.0}}, {0, 1}, 2), 2), ConfigError);
    CHECK_THROWS_AS(train_mlr(make_set({{1.0, 1.0}, {2.0, 3.0}}, {0, 1}, 2), 2), NumericError);
    const auto clf = train_mlr(make_set({{1.0}, {2.0}, {3.0}}, {0, 1, 1}, 2), 1);
    CHECK_THROWS_AS(classify_mlr(clf, std::vector<double>{1.0, 2.0}), ConfigError);
  }

  TEST_CASE("MLR separates on the informative slot") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    TrainingSet t;
    t.class_count = 2;
    for (int i = 0; i < 80; ++i) {
      const ClassId c = i % 2;
      t.vectors.push_back({g(rng), g(rng), g(rng), (c ? 3.0 : -3.0) + 0.3 * g(rng)});
      t.labels.push_back(c);
    }
    const auto clf = train_mlr(t, 1);
    CHECK(clf.models[0].selected == std::vector<std::size_t>{3});
    CHECK(clf.models[1].selected == std::vector<std::size_t>{3});
    std::size_t right = 0;
    for (std::size_t i = 0; i < t.size(); ++i) right += classify_mlr(clf, t.vectors[i]).label == t.labels[i];
    CHECK(right == t.size());
  }

  TEST_CASE("MLR with m = 0 predicts class frequencies") {
    const auto t = make_set({{0.0}, {1.0}, {2.0}, {3.0}}, {0, 1, 1, 1}, 3);
    const auto clf = train_mlr(t, 0);
    const auto p = classify_mlr(clf, std::vector<double>{9.0});
    CHECK(p.scores[0] == doctest::Approx(0.25));
    CHECK(p.scores[1] == doctest::Approx(0.75));
    CHECK(p.scores[2] == doctest::Approx(0.0));
    CHECK(p.label == 1);
  }

  TEST_CASE("MLR ties go to the lower class id") {
    const auto t = make_set({{0.0}, {1.0}, {2.0}, {3.0}}, {1, 0, 1, 0}, 2);
    const auto p = classify_mlr(train_mlr(t, 0), std::vector<double>{0.0});
    CHECK(p.scores[0] == doctest::Approx(p.scores[1]));
    CHECK(p.label == 0);
  }

  TEST_CASE("a class without training rows fits all-zero targets") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    TrainingSet t;
    t.class_count = 3;
    for (int i = 0; i < 40; ++i) {
      const ClassId c = i % 2 ? 2 : 0;
      t.vectors.push_back({(c ? 2.0 : -2.0) + 0.2 * g(rng), g(rng)});
      t.labels.push_back(c);
    }
    const auto mlr = train_mlr(t, 2);
    CHECK(std::abs(mlr.models[1].intercept) < 1e-12);
    const auto ibl = train_ibl(t, 3);
    for (int i = 0; i < 100; ++i) {
      const std::vector<double> q = {3.0 * g(rng), g(rng)};
      CHECK(std::abs(classify_mlr(mlr, q).scores[1]) < 1e-12);
      CHECK(classify_ibl(ibl, q).label != 1);
    }
  }

  TEST_CASE("a constant slot changes nothing") {
    std::mt19937_64 rng(10);
    auto t = xor_set(rng, 60);
    for (std::size_t i = 0; i < t.size(); ++i) t.vectors[i][0] += 0.5 * t.labels[i];
    auto u = t;
    for (auto& v : u.vectors) v.push_back(4.0);
    const auto a = train_mlr(t, 2), b = train_mlr(u, 2);
    const auto ia = train_ibl(t, 3), ib = train_ibl(u, 3);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
      std::vector<double> q = {g(rng), g(rng)};
      std::vector<double> r = q;
      r.push_back(4.0);
      CHECK(classify_mlr(a, q).label == classify_mlr(b, r).label);
      CHECK(classify_ibl(ia, q).label == classify_ibl(ib, r).label);
    }
  }

  TEST_CASE("instance-based beats regression on weakly clustered classes") {
    std::mt19937_64 rng(99);
    const auto train = xor_set(rng, 200), test = xor_set(rng, 200);
    const auto ibl = train_ibl(train, 3);
    const auto mlr = train_mlr(train, 2);
    std::size_t ibl_right = 0, mlr_right = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      ibl_right += classify_ibl(ibl, test.vectors[i]).label == test.labels[i];
      mlr_right += classify_mlr(mlr, test.vectors[i]).label == test.labels[i];
    }
    CHECK(ibl_right >= 190);
    CHECK(mlr_right <= 140);
  }
}
