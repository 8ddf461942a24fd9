#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cnorm/data.hpp"
#include "cnorm/error.hpp"
#include "support/fixtures.hpp"

using namespace cnorm;

namespace {

std::string to_csv(const LabeledDataset& ds) {
  std::ostringstream s;
  write_dataset(ds, s);
  return s.str();
}

LabeledDataset from_csv(const std::string& text) {
  std::istringstream in(text);
  return read_dataset(in);
}

std::size_t parse_error_row(const std::string& text) {
  try {
    from_csv(text);
  } catch (const ParseError& e) {
    return e.row();
  }
  return 0;
}

const std::string kHeader =
    "id,regime,label:fault|*healthy,severity,is_baseline,ctx:T1,ctx:BARO,feat:A:x,feat:A:y\n";

std::set<std::string> ids_of(const LabeledDataset& ds) {
  std::set<std::string> s;
  for (const auto& o : ds.observations()) s.insert(o.id);
  return s;
}

}  // namespace

TEST_SUITE("data") {
  TEST_CASE("three-row file loads and saves byte-identically") {
    const std::string text = kHeader +
                             "r1,oct,healthy,0,1,10.5,14.6,2.25,100\n"
                             "r2,oct,fault,0.75,0,11,14.5,3.5,80\n"
                             "r3,nov,healthy,0,0,-2,14.7,1.5,110\n";
    const auto ds = from_csv(text);
    CHECK(ds.size() == 3);
    CHECK(ds.baseline_ids() == std::vector<std::string>{"r1"});
    CHECK(ds.class_names() == std::vector<std::string>{"fault", "healthy"});
    CHECK(ds.healthy_class() == 1);
    CHECK(ds.observations()[1].severity == 0.75);
    CHECK(to_csv(ds) == text);
  }

  TEST_CASE("generated dataset round-trips through CSV") {
    const auto ds = fixture::small_dataset(30).with_baselines({"o100", "o101"});
    const auto text = to_csv(ds);
    const auto back = from_csv(text);
    CHECK(to_csv(back) == text);
    REQUIRE(back.size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(back.observations()[i].context == ds.observations()[i].context);
      CHECK(back.observations()[i].features == ds.observations()[i].features);
    }
  }

  TEST_CASE("empty feature cell is Missing") {
    const auto ds = from_csv(kHeader + "r1,oct,healthy,0,0,10,14.6,,100\n");
    CHECK_FALSE(ds.observations()[0].features[0].has_value());
    CHECK(ds.observations()[0].features[1] == 100.0);
  }

  TEST_CASE("baseline flag on a faulted row names the row") {
    const std::string text = kHeader +
                             "r1,oct,healthy,0,1,10,14.6,2,100\n"
                             "r2,oct,fault,0.5,1,10,14.6,2,100\n";
    CHECK(parse_error_row(text) == 3);
    CHECK_THROWS_WITH_AS(from_csv(text), doctest::Contains("r2"), ParseError);
  }

  TEST_CASE("malformed rows report their row number") {
    CHECK(parse_error_row(kHeader + "r1,oct,healthy,0,0,10,14.6,2\n") == 2);
    CHECK(parse_error_row(kHeader + "r1,oct,healthy,0,0,10,14.6,2,1\nr2,oct,healthy,0,0,x,14.6,2,1\n") == 3);
    CHECK(parse_error_row(kHeader + "r1,oct,healthy,0,0,10,14.6,nan,1\n") == 2);
    CHECK(parse_error_row(kHeader + "r1,oct,healthy,0,0,10,14.6,inf,1\n") == 2);
    CHECK(parse_error_row(kHeader + "r1,oct,broken,0,0,10,14.6,2,1\n") == 2);
    CHECK(parse_error_row(kHeader + "r1,oct,healthy,0,0,,14.6,2,1\n") == 2);
    CHECK(parse_error_row(kHeader + "r1,oct,fault,1.5,0,10,14.6,2,1\n") == 2);
  }

  TEST_CASE("header problems are row 1") {
    CHECK(parse_error_row("id,regime,label,severity\n") == 1);
    CHECK(parse_error_row("id,regime,label,severity,is_baseline,ctx:T1,feat:A:y,feat:A:x\n") == 1);
    CHECK(parse_error_row("id,regime,label,severity,is_baseline,ctx:T1,feat:A:x\n") == 1);
  }

  TEST_CASE("bare label column infers classes in order of appearance") {
    const auto ds = from_csv(
        "id,regime,label,severity,is_baseline,ctx:T1,feat:A:x,feat:A:y\n"
        "a,r,stall,1,0,1,2,3\n"
        "b,r,healthy,0,1,1,2,3\n");
    CHECK(ds.class_names() == std::vector<std::string>{"stall", "healthy"});
    CHECK(ds.healthy_class() == 1);
  }

  TEST_CASE("sidecar schema overrides header inference") {
    const auto dir = std::filesystem::temp_directory_path() / "cnorm_data_test";
    std::filesystem::create_directories(dir);
    const auto csv = dir / "d.csv";
    std::ofstream(csv) << "id,regime,label,severity,is_baseline,ctx:T1,feat:A:x,feat:A:y\n"
                          "a,r,ok,0,1,1,2,3\n";
    std::ofstream(dir / "d.csv.schema.json")
        << R"({"context":["T1"],"features":["A"],"classes":["bad","ok"],"healthy_class":"ok"})";
    const auto ds = load_dataset(csv);
    CHECK(ds.class_names() == std::vector<std::string>{"bad", "ok"});
    CHECK(ds.healthy_class() == 1);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("split_by_regime partitions") {
    const auto ds = fixture::small_dataset(10);
    const auto s = split_by_regime(ds, "a", "b", {2, BaselinePolicy::Reselect});
    CHECK(s.first.size() == 5);
    CHECK(s.second.size() == 5);
    auto a = ids_of(s.first), b = ids_of(s.second);
    std::set<std::string> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(both, both.end()));
    CHECK(both.empty());
    a.insert(b.begin(), b.end());
    CHECK(a == ids_of(ds));
    for (const auto* o : s.first.baselines()) CHECK(o->regime == "a");
    for (const auto* o : s.second.baselines()) CHECK(o->regime == "b");
  }

  TEST_CASE("split with one tag absent warns") {
    const auto ds = fixture::small_dataset(10).filtered([](const Observation& o) { return o.regime == "a"; });
    const auto s = split_by_regime(ds, "a", "b", {2, BaselinePolicy::Reselect});
    CHECK(s.second.empty());
    CHECK_FALSE(s.warnings.empty());
  }

  TEST_CASE("split rejects unknown tags") {
    CHECK_THROWS_AS(split_by_regime(fixture::small_dataset(10), "a", "c"), ConfigError);
  }

  TEST_CASE("keep-flagged policy restricts flagged baselines to each side") {
    const auto ds = fixture::small_dataset(10).with_baselines({"o100", "o101", "o103"});
    const auto s = split_by_regime(ds, "a", "b", {16, BaselinePolicy::KeepFlagged});
    CHECK(s.first.baseline_ids() == std::vector<std::string>{"o100"});
    CHECK(s.second.baseline_ids() == std::vector<std::string>{"o101", "o103"});
  }

  TEST_CASE("filter_by_severity") {
    const auto ds = fixture::small_dataset(30);
    CHECK(ids_of(filter_by_severity(ds, 0.0)) == ids_of(ds));
    const auto healthy_only = filter_by_severity(ds, 1.01);
    for (const auto& o : healthy_only.observations()) CHECK(o.label == ds.healthy_class());
    CHECK(healthy_only.size() == 20);
    const auto f = filter_by_severity(ds, 0.5);
    CHECK(ids_of(filter_by_severity(f, 0.5)) == ids_of(f));
    const auto g = filter_by_severity(ds, 0.6);
    const auto fi = ids_of(f), gi = ids_of(g);
    CHECK(std::includes(fi.begin(), fi.end(), gi.begin(), gi.end()));
  }

  TEST_CASE("select_baselines spreads over healthy contexts") {
    const auto ds = fixture::small_dataset(60);
    const auto ids = select_baselines(ds.observations(), ds.healthy_class(), 16);
    CHECK(ids.size() == 16);
    CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 16);
    for (const auto& id : ids) {
      const auto it = std::find_if(ds.observations().begin(), ds.observations().end(),
                                   [&](const Observation& o) { return o.id == id; });
      CHECK(it->label == ds.healthy_class());
    }
    CHECK(select_baselines(ds.observations(), ds.healthy_class(), 16) == ids);
    CHECK(select_baselines(ds.observations(), ds.healthy_class(), 1000).size() == 40);
  }

  TEST_CASE("dataset invariants are enforced") {
    auto o = fixture::obs("x", "a", 1, 0.0, {1.0, 2.0}, {1.0, 2.0, 3.0, 4.0});
    auto bad_arity = o;
    bad_arity.context.pop_back();
    CHECK_THROWS_AS(LabeledDataset(fixture::small_schema(), {"fault", "healthy"}, 1, {bad_arity}, {}),
                    ConfigError);
    auto sick = o;
    sick.label = 0;
    CHECK_THROWS_AS(LabeledDataset(fixture::small_schema(), {"fault", "healthy"}, 1, {sick}, {"x"}),
                    ConfigError);
    auto sev = o;
    sev.severity = 0.3;
    CHECK_THROWS_AS(LabeledDataset(fixture::small_schema(), {"fault", "healthy"}, 1, {sev}, {}),
                    ConfigError);
    CHECK_NOTHROW(LabeledDataset(fixture::small_schema(), {"fault", "healthy"}, 1, {o}, {"x"}));
  }

  TEST_CASE("slot layout") {
    const Schema s = fixture::small_schema();
    CHECK(s.slot_count() == 4);
    CHECK(Schema::axis(0) == Axis::X);
    CHECK(Schema::axis(3) == Axis::Y);
    CHECK(Schema::slot_of(1, Axis::Y) == 3);
    CHECK(s.slot_label(2) == "B:x");
  }

  TEST_CASE("format_number is shortest round-trip") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0) == "2");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  }
}
