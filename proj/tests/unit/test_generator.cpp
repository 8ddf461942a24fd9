#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cnorm/error.hpp"
#include "cnorm/generator.hpp"
#include "support/oracles.hpp"

using namespace cnorm;

namespace {

GeneratorConfig quiet(GeneratorConfig cfg) {
  for (auto& f : cfg.features) f.x.noise = f.y.noise = 0.0;
  cfg.missing = {};
  return cfg;
}

std::string csv(const LabeledDataset& ds) {
  std::ostringstream s;
  write_dataset(ds, s);
  return s.str();
}

/// Two context variables, one feature with a planted linear response.
GeneratorConfig planted() {
  GeneratorConfig cfg;
  cfg.context = {{"T", 10.0, 5.0}, {"P", 14.6, 0.1}};
  cfg.classes = {"bad", "good"};
  cfg.healthy_class = "good";
  FeatureResponse f;
  f.name = "F";
  f.x = {2.0, {1.5, -0.7}, {}, 0.01};
  f.y = {-1.0, {0.0, 3.0}, {0.2, 0.0}, 0.01};
  cfg.features = {f};
  cfg.regimes["r"] = {{10.0, 14.6}, {5.0, 0.1}, {}};
  cfg.composition.regimes = {"r"};
  cfg.composition.counts["r"]["good"] = 500;
  cfg.composition.baseline_count = 16;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_SUITE("generator") {
  TEST_CASE("zero noise reproduces the response exactly") {
    const auto cfg = quiet(GeneratorConfig::paper_shaped());
    const ContextVector c = {12.0, 11.0, 4.0, 14.6, 65.0};
    std::mt19937_64 rng(3);
    const auto healthy = generate_observation_at(cfg, cfg.class_id("class 8"), 0.0, c, "october", rng);
    CHECK(healthy.features == cfg.healthy_response(c));

    const ClassId k = cfg.class_id("class 1");
    const auto faulted = generate_observation_at(cfg, k, 0.5, c, "october", rng);
    FeatureVector expected = cfg.healthy_response(c);
    for (const auto& e : cfg.faults.at("class 1"))
      for (std::size_t f = 0; f < cfg.features.size(); ++f)
        if (cfg.features[f].name == e.feature) {
          *expected[2 * f] += 0.5 * e.x_shift;
          *expected[2 * f + 1] += 0.5 * e.y_shift;
        }
    CHECK(faulted.features == expected);
    CHECK(faulted.severity == 0.5);
  }

  TEST_CASE("healthy observations carry zero severity") {
    const auto cfg = GeneratorConfig::paper_shaped();
    std::mt19937_64 rng(1);
    const auto o = generate_observation(cfg, cfg.class_id("class 8"), 0.9, "october", rng);
    CHECK(o.severity == 0.0);
  }

  TEST_CASE("noise averages out") {
    auto cfg = GeneratorConfig::paper_shaped();
    cfg.missing = {};
    const ContextVector c = {12.0, 11.0, 4.0, 14.6, 65.0};
    const auto truth = cfg.healthy_response(c);
    const ClassId h = cfg.class_id("class 8");
    std::mt19937_64 rng(11);
    const std::size_t n = 1000;
    std::vector<double> sum(truth.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto o = generate_observation_at(cfg, h, 0.0, c, "october", rng);
      for (std::size_t s = 0; s < sum.size(); ++s) sum[s] += *o.features[s];
    }
    for (std::size_t s = 0; s < sum.size(); ++s) {
      const auto& f = cfg.features[s / 2];
      const double sigma = s % 2 ? f.y.noise : f.x.noise;
      CAPTURE(s);
      CHECK(std::abs(sum[s] / n - *truth[s]) <= 3.0 * sigma / std::sqrt(double(n)));
    }
  }

  TEST_CASE("paper-shaped composition") {
    const auto cfg = GeneratorConfig::paper_shaped();
    const auto ds = generate_dataset(cfg);
    CHECK(ds.size() == 242);
    CHECK(ds.class_count() == 8);
    CHECK(ds.class_names()[ds.healthy_class()] == "class 8");
    std::vector<std::size_t> counts(8, 0);
    for (const auto& o : ds.observations()) ++counts[o.label];
    CHECK(counts == std::vector<std::size_t>{52, 12, 36, 39, 15, 5, 5, 78});
    CHECK(ds.baseline_ids().size() == 16);
    CHECK(ds.regimes() == std::vector<std::string>{"october", "november"});
    CHECK(ds.schema().context_arity() == 5);
    CHECK(ds.schema().slot_count() == 20);
  }

  TEST_CASE("regimes differ in their context means") {
    const auto cfg = GeneratorConfig::paper_shaped();
    const auto ds = generate_dataset(cfg);
    double oct = 0, nov = 0;
    std::size_t n_oct = 0, n_nov = 0;
    for (const auto& o : ds.observations()) {
      if (o.regime == "october") oct += o.context[0], ++n_oct;
      else nov += o.context[0], ++n_nov;
    }
    CHECK(oct / n_oct - nov / n_nov > 5.0);
  }

  TEST_CASE("generation is deterministic and seed dependent") {
    const auto cfg = GeneratorConfig::paper_shaped(42);
    const auto a = csv(generate_dataset(cfg));
    CHECK(a == csv(generate_dataset(cfg)));
    CHECK(a != csv(generate_dataset(GeneratorConfig::paper_shaped(43))));
  }

  TEST_CASE("healthy-only composition selects baselines among all observations") {
    auto cfg = planted();
    const auto ds = generate_dataset(cfg);
    CHECK(ds.size() == 500);
    CHECK(ds.baseline_ids().size() == 16);
  }

  TEST_CASE("zero-count composition writes a header-only CSV") {
    auto cfg = planted();
    cfg.composition.counts["r"]["good"] = 0;
    const auto ds = generate_dataset(cfg);
    CHECK(ds.empty());
    const auto text = csv(ds);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  }

  TEST_CASE("planted coefficients are recovered") {
    const auto cfg = planted();
    const auto ds = generate_dataset(cfg);
    std::vector<std::vector<double>> z;
    std::vector<double> x;
    for (const auto& o : ds.observations()) {
      z.push_back(cfg.standardize(o.context));
      x.push_back(*o.features[0]);
    }
    const auto fit = oracle::normal_equations(z, x, {0, 1});
    CHECK(double(fit.intercept) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(double(fit.coefficients[0]) == doctest::Approx(1.5).epsilon(0.01));
    CHECK(double(fit.coefficients[1]) == doctest::Approx(-0.7).epsilon(0.01));
  }

  TEST_CASE("JSON round trip preserves the dataset") {
    const auto cfg = GeneratorConfig::paper_shaped(7);
    const auto back = generator_config_from_json(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
    CHECK(csv(generate_dataset(back)) == csv(generate_dataset(cfg)));
  }

  TEST_CASE("invalid configurations are rejected") {
    auto cfg = planted();
    cfg.healthy_class = "unknown";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = planted();
    cfg.features[0].x.noise = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = planted();
    cfg.missing.base = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = planted();
    cfg.regimes["r"].loading = {2.0, 0.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = planted();
    cfg.composition.counts["elsewhere"]["good"] = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_NOTHROW(planted().validate());
    CHECK_NOTHROW(GeneratorConfig::paper_shaped().validate());
  }

  TEST_CASE("observation streams are independent of order") {
    auto a = observation_rng(1994, 5);
    auto b = observation_rng(1994, 5);
    CHECK(a() == b());
    auto c = observation_rng(1994, 6);
    CHECK(observation_rng(1994, 5)() != c());
  }
}
