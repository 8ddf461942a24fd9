#include <doctest.h>

#include <set>

#include "cnorm/error.hpp"
#include "cnorm/experiment.hpp"
#include "support/fixtures.hpp"

using namespace cnorm;

namespace {

const SwapSplit& shared_split() {
  static const SwapSplit s = make_swap_split(fixture::small_dataset(120, 11));
  return s;
}

PipelineConfig with(NormMethod m, MissingPolicy p, ClassifierKind c) {
  PipelineConfig cfg;
  cfg.method = m;
  cfg.norm.missing = p;
  cfg.classifier = c;
  return cfg.canonical();
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("presets and labels") {
    const auto a = PipelineConfig::cnibl();
    CHECK(a.method == NormMethod::IblContextual);
    CHECK(a.label() == "method=6 missing=d_clamp ibl k1=2 k2=6 k3=1 d=50");
    const auto b = PipelineConfig::cnmlr();
    CHECK(b.label() == "method=7 missing=d_clamp mlr f=5 m=1 d=15");
    CHECK_NOTHROW(a.validate());
    CHECK_NOTHROW(b.validate());
    CHECK(classifier_from_string(to_string(ClassifierKind::Mlr)) == ClassifierKind::Mlr);
    CHECK_THROWS_AS(classifier_from_string("svm"), ConfigError);
  }

  TEST_CASE("canonical form ignores unread parameters") {
    auto a = PipelineConfig::cnibl();
    a.norm.f = 9.0;
    a.m = 4;
    CHECK(a.canonical() == PipelineConfig::cnibl());
    auto b = with(NormMethod::AvgDevTrain, MissingPolicy::Zero, ClassifierKind::Ibl);
    auto c = b;
    c.norm.k1 = 5;
    c.norm.d = 3.0;
    CHECK(c.canonical() == b);
    auto d = PipelineConfig::cnibl();
    d.norm.k1 = 3;
    CHECK_FALSE(d.canonical() == PipelineConfig::cnibl());
  }

  TEST_CASE("grid of one") {
    const auto cells = GridSpec{}.cells();
    REQUIRE(cells.size() == 1);
    CHECK(cells[0] == PipelineConfig::cnibl());
  }

  TEST_CASE("grid deduplicates equivalent cells") {
    GridSpec g;
    g.methods = {NormMethod::AvgDevTrain};
    g.missing = {MissingPolicy::Zero};
    g.k1 = {1, 2, 3};
    g.f = {1.0, 5.0};
    CHECK(g.cells().size() == 1);
    g.classifiers = {ClassifierKind::Ibl, ClassifierKind::Mlr};
    g.d = {5.0, 10.0};
    CHECK(g.cells().size() == 2);
  }

  TEST_CASE("comparison grid has 42 distinct cells") {
    const auto cells = comparison_grid().cells();
    CHECK(cells.size() == 42);
    std::set<std::string> labels;
    for (const auto& c : cells) labels.insert(c.label());
    CHECK(labels.size() == 42);
  }

  TEST_CASE("swap split needs two regimes") {
    const auto ds = fixture::small_dataset(20);
    const auto s = make_swap_split(ds);
    CHECK(s.regime_a == "a");
    CHECK(s.regime_b == "b");
    const auto swapped = make_swap_split(ds, "b", "a");
    CHECK(swapped.split.first.observations().front().regime == "b");
    const auto one = ds.filtered([](const Observation& o) { return o.regime == "a"; });
    CHECK_THROWS_AS(make_swap_split(one), ConfigError);
  }

  TEST_CASE("pooled matrix is the sum of both directions") {
    const auto& s = shared_split();
    const auto r = swap_evaluate(s, PipelineConfig::cnibl());
    REQUIRE(r.ok());
    auto sum = r.forward;
    sum += r.backward;
    CHECK(r.pooled == sum);
    CHECK(r.forward.total() == s.split.second.size());
    CHECK(r.backward.total() == s.split.first.size());
    CHECK(r.pooled.total() == 120);
    CHECK(r.raw == raw_score(r.pooled));
    CHECK(r.adjusted.adjusted == adjusted_score(r.pooled).adjusted);
  }

  TEST_CASE("well separated faults are classified perfectly") {
    const auto base = fixture::small_dataset(90, 2);
    std::vector<Observation> v = base.observations();
    for (auto& o : v)
      if (o.label == 0) *o.features[0] += 20.0;
    const LabeledDataset ds(base.schema(), base.class_names(), 1, v, {});
    for (const auto& cfg : {PipelineConfig::cnibl(), PipelineConfig::cnmlr()}) {
      CAPTURE(cfg.label());
      CHECK(swap_evaluate(ds, cfg).raw == 100.0);
    }
  }

  TEST_CASE("regression classifier is invariant to affine normalizations") {
    const auto& s = shared_split();
    for (auto p : {MissingPolicy::Zero, MissingPolicy::TrainAverage, MissingPolicy::XMaxYMin}) {
      const auto ref = swap_evaluate(s, with(NormMethod::None, p, ClassifierKind::Mlr)).pooled;
      for (auto m : {NormMethod::MinMaxTrain, NormMethod::AvgDevTrain}) {
        CAPTURE(static_cast<int>(m));
        CHECK(swap_evaluate(s, with(m, p, ClassifierKind::Mlr)).pooled == ref);
      }
    }
  }

  TEST_CASE("k3 = 2 matches k3 = 1") {
    const auto& s = shared_split();
    auto two = PipelineConfig::cnibl();
    two.k3 = 2;
    CHECK(swap_evaluate(s, two).pooled == swap_evaluate(s, PipelineConfig::cnibl()).pooled);
  }

  TEST_CASE("parallel runs match the serial run and keep cell order") {
    const auto& s = shared_split();
    GridSpec g;
    g.k1 = {1, 2, 3};
    g.k2 = {2, 4};
    g.classifiers = {ClassifierKind::Ibl, ClassifierKind::Mlr};
    const auto cells = g.cells();
    const auto serial = factorial_experiment(s, cells, 1);
    const auto parallel = factorial_experiment(s, cells, 4);
    REQUIRE(serial.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      CHECK(serial[i].config == cells[i]);
      CHECK(parallel[i].config == cells[i]);
      CHECK(parallel[i].pooled == serial[i].pooled);
    }
  }

  TEST_CASE("invalid cells report errors without stopping the others") {
    const auto& s = shared_split();
    auto bad = PipelineConfig::cnibl();
    bad.method = NormMethod::None;  // d_clamp is not allowed here
    auto huge = PipelineConfig::cnibl();
    huge.norm.k1 = 40;
    const auto res = factorial_experiment(s, {PipelineConfig::cnibl(), bad, huge}, 2);
    CHECK(res[0].ok());
    CHECK_FALSE(res[1].ok());
    CHECK(res[1].error.find("method=1") != std::string::npos);
    CHECK_FALSE(res[2].ok());
    CHECK(res[2].error.find("k1=40") != std::string::npos);
  }

  TEST_CASE("errors carry the configuration label") {
    auto bad = PipelineConfig::cnmlr();
    bad.m = 50;
    CHECK_THROWS_WITH_AS(swap_evaluate(shared_split(), bad), doctest::Contains("method=7"), ConfigError);
  }

  TEST_CASE("method comparison pairs matching cells") {
    const auto& s = shared_split();
    const auto cells = comparison_grid().cells();
    const auto results = factorial_experiment(s, cells, 4);
    for (const auto& r : results) CHECK(r.ok());
    const auto cmp = compare_methods(results, NormMethod::IblContextual,
                                     {NormMethod::None, NormMethod::MinMaxTrain, NormMethod::AvgDevTrain,
                                      NormMethod::PercentileTrain, NormMethod::AvgDevBaseline});
    CHECK(cmp.pairs.size() == 30);
    CHECK(cmp.test.n == 30);
    std::vector<double> a, b;
    for (auto [i, j] : cmp.pairs) {
      CHECK(results[i].config.method == NormMethod::IblContextual);
      CHECK(results[j].config.method != NormMethod::IblContextual);
      CHECK(results[i].config.norm.missing == results[j].config.norm.missing);
      CHECK(results[i].config.classifier == results[j].config.classifier);
      a.push_back(results[i].adjusted.adjusted);
      b.push_back(results[j].adjusted.adjusted);
    }
    const auto t = ratio_ttest(a, b);
    CHECK(t.mean_ratio == cmp.test.mean_ratio);
    CHECK(t.lower_bound == cmp.test.lower_bound);
  }
}
