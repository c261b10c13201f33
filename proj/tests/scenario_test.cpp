#include "utorsion/scenario.hpp"

#include <doctest.h>

#include <fstream>

using namespace utorsion;

namespace {

std::string scenario_path(const char* file) {
  return std::string(UTORSION_SCENARIO_DIR) + "/" + file;
}

Json strip_timestamp(Json j) {
  j.erase("timestamp");
  return j;
}

}  // namespace

TEST_CASE("scenario files run with documented exit codes") {
  {
    Scenario s = load_scenario_file(scenario_path("noWC.json"));
    ScenarioOutcome o = run_scenario(s);
    CHECK(o.exit_code == 0);
    CHECK(o.report["decide"]["value"] == "In");
  }
  {
    // opaque digit tails leave the decision undetermined
    Scenario s = load_scenario_file(scenario_path("opaque-tail.json"));
    ScenarioOutcome o = run_scenario(s);
    CHECK(o.exit_code == 2);
    CHECK(o.report["decide"]["value"] == "Unknown");
  }
  {
    Scenario s = load_scenario_file(scenario_path("wave-probe.json"));
    ScenarioOutcome o = run_scenario(s);
    CHECK(o.exit_code == 0);
    CHECK(o.report["nested_probe"]["value"] == "Fails");
  }
}

TEST_CASE("malformed scenarios raise parse errors") {
  CHECK_THROWS_AS(load_scenario_file(scenario_path("missing.json")), scenario_parse_error);
  CHECK_THROWS_AS(parse_scenario(Json::parse("{\"schema_version\": 1}")), scenario_parse_error);
  CHECK_THROWS_AS(parse_scenario(Json::parse(R"({
    "schema_version": 1, "name": "bad",
    "ratio": {"kind": "constant", "b": 2},
    "ideal": {"family": "density", "alpha": "1"},
    "digits": {"source": "pattern", "components": [{"set": "nowhere", "value": {"value": "const", "c": "1"}}]}
  })")),
                  scenario_parse_error);
  CHECK_THROWS_AS(parse_scenario(Json::parse("{\"schema_version\": 7, \"name\": \"x\"}")),
                  scenario_parse_error);
}

TEST_CASE("reports are deterministic modulo the timestamp") {
  Scenario s = load_scenario_file(scenario_path("ce.json"));
  Json a = strip_timestamp(run_scenario(s).report);
  Json b = strip_timestamp(run_scenario(s).report);
  CHECK(a.dump() == b.dump());
}

TEST_CASE("built-in catalog") {
  auto ids = builtin_scenario_ids();
  CHECK(ids.size() == 8);
  for (const auto& id : ids) CHECK_NOTHROW(builtin_scenario(id));
  CHECK_THROWS_AS(builtin_scenario("nope"), std::invalid_argument);
}

TEST_CASE("reproduce asserts the documented outcomes") {
  {
    ReproduceOutcome r = reproduce("counterexample-wave");
    CHECK(r.all_passed);
    CHECK(r.outcome.report["nested_probe"]["value"] == "Fails");
  }
  {
    ReproduceOutcome r = reproduce("Exa2osserv");
    CHECK(r.all_passed);
  }
}
