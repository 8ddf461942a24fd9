#include <doctest.h>

#include "cnorm/error.hpp"
#include "cnorm/serialize.hpp"
#include "support/fixtures.hpp"

using namespace cnorm;
using nlohmann::json;

namespace {

json reparse(const json& j) { return json::parse(j.dump()); }

}  // namespace

TEST_SUITE("serialize") {
  TEST_CASE("fitted pipelines predict identically after a round trip") {
    auto ds = fixture::small_dataset(90, 6);
    std::vector<Observation> v = ds.observations();
    for (std::size_t i = 0; i < v.size(); i += 7) v[i].features[1].reset();
    ds = LabeledDataset(ds.schema(), ds.class_names(), 1, v, {});
    ds = ds.with_baselines(select_baselines(ds.observations(), 1, 16));

    std::vector<PipelineConfig> configs = {PipelineConfig::cnibl(), PipelineConfig::cnmlr()};
    for (int m = 1; m <= 5; ++m) {
      PipelineConfig c;
      c.method = static_cast<NormMethod>(m);
      c.norm.missing = MissingPolicy::TrainAverage;
      c.classifier = m % 2 ? ClassifierKind::Ibl : ClassifierKind::Mlr;
      configs.push_back(c.canonical());
    }
    for (const auto& cfg : configs) {
      CAPTURE(cfg.label());
      const auto fitted = fit_pipeline(cfg, ds);
      const auto text = to_json(fitted, ds.class_names());
      const auto back = fitted_pipeline_from_json(reparse(text));
      CHECK(back.config == cfg);
      CHECK(to_json(back, ds.class_names()) == text);
      for (const auto& o : ds.observations()) {
        const auto a = predict(fitted, o), b = predict(back, o);
        CHECK(a.label == b.label);
        CHECK(a.normalized == b.normalized);
      }
    }
  }

  TEST_CASE("pipeline config round trip") {
    auto c = PipelineConfig::cnibl();
    c.norm.neighborhood = NeighborhoodMode::Subset;
    c.norm.k1 = 4;
    CHECK(pipeline_config_from_json(reparse(to_json(c))) == c);
    auto m = PipelineConfig::cnmlr();
    m.norm.stepwise = StepwiseMode::AddOnly;
    m.norm.f = 2.5;
    CHECK(pipeline_config_from_json(reparse(to_json(m))) == m);
  }

  TEST_CASE("linear model and schema round trip") {
    LinearModel lm;
    lm.selected = {2, 0};
    lm.coefficients = {0.1, -1.0 / 3.0};
    lm.intercept = 7.25;
    lm.ssr = 1e-17;
    lm.rows = 9;
    const auto back = linear_model_from_json(reparse(to_json(lm)));
    CHECK(back.selected == lm.selected);
    CHECK(back.coefficients == lm.coefficients);
    CHECK(back.intercept == lm.intercept);
    CHECK(back.ssr == lm.ssr);
    CHECK(back.rows == lm.rows);
    CHECK(schema_from_json(reparse(to_json(fixture::small_schema()))) == fixture::small_schema());
  }

  TEST_CASE("corrupted normalizers are rejected") {
    const auto ds = fixture::small_dataset(30).with_baselines({"o100", "o101", "o103"});
    auto j = to_json(fit_normalizer(NormMethod::AvgDevTrain, ds, {.missing = MissingPolicy::Zero}));
    j["location"].erase(0);
    CHECK_THROWS_AS(normalizer_from_json(j), Error);
  }

  TEST_CASE("grid files") {
    const auto single = grid_file_from_json(json::parse(R"({"methods": [6, "mlr_contextual"], "k1": [1, 2]})"));
    REQUIRE(single.grids.size() == 1);
    CHECK(single.cells().size() == 3);
    CHECK(single.comparisons.empty());

    const auto multi = grid_file_from_json(json::parse(R"({
      "grids": [
        {"methods": [6], "k1": [1, 2]},
        {"methods": [6], "k1": [2, 3], "missing": ["d_clamp"], "classifiers": ["ibl"], "d": [50]}
      ],
      "compare": [{"numerator": 6, "denominators": [1, 2, "avgdev_base"]}]
    })"));
    CHECK(multi.grids.size() == 2);
    CHECK(multi.cells().size() == 3);
    REQUIRE(multi.comparisons.size() == 1);
    CHECK(multi.comparisons[0].first == NormMethod::IblContextual);
    CHECK(multi.comparisons[0].second ==
          std::vector<NormMethod>{NormMethod::None, NormMethod::MinMaxTrain, NormMethod::AvgDevBaseline});

    CHECK_THROWS_AS(grid_file_from_json(json::parse(R"({"methods": [9]})")), ConfigError);
  }

  TEST_CASE("experiment results serialize their scores") {
    const auto r = swap_evaluate(fixture::small_dataset(60), PipelineConfig::cnibl());
    const auto j = to_json(r);
    CHECK(j.at("raw").get<double>() == r.raw);
    CHECK(j.at("adjusted").at("adjusted").get<double>() == r.adjusted.adjusted);
    CHECK(j.dump().find("pooled") != std::string::npos);
  }
}
