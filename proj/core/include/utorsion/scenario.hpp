#pragma once

#include "utorsion/verifier.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace utorsion {

using Json = nlohmann::ordered_json;

struct ScenarioExpectations {
  std::optional<DecisionValue> decide;
  std::optional<DecisionRule> decide_rule;
  std::optional<Truth> cond_i, cond_ii, cond_iii;
  std::optional<Truth> a1, a2, star;
  std::optional<Truth> cond_I, cond_II;
  std::optional<ConsistencyFlag> verify_flag;
  std::optional<Truth> nested_probe;
};

struct Scenario {
  std::string name;
  RatioSequence::Ptr ratio;
  DigitStream::Ptr digits;  // may be null for ideal-only scenarios
  IdealSpec::Ptr ideal;
  std::vector<std::pair<std::string, SymbolicSet>> witnesses;
  std::optional<std::pair<SymbolicSet, SymbolicSet>> partition;
  std::vector<NestedPair> probe_pairs;
  bool run_conditions = true;
  bool run_decide = true;
  bool run_verify = true;
  bool run_probe = false;
  std::vector<Rat> eps_list = {Rat(1, 4), Rat(1, 10), Rat(1, 100)};
  std::vector<long long> horizons = {1000};
  ConditionConfig config;
  ScenarioExpectations expect;

  TorsionContext context() const;
};

class scenario_parse_error : public std::runtime_error {
 public:
  explicit scenario_parse_error(const std::string& what) : std::runtime_error(what) {}
};

Scenario parse_scenario(const Json& doc);
Scenario load_scenario_file(const std::string& path);

// Exit codes: 0 all definitive, consistent and as expected; 1 an expectation
// failed; 2 verdicts contain Unknown / INCONCLUSIVE; 3 CONTRADICTION;
// 4 parse or reference errors (raised as scenario_parse_error by the loader).
struct ScenarioOutcome {
  Json report;
  int exit_code = 0;
  std::string summary;
};

ScenarioOutcome run_scenario(const Scenario& scenario);

std::vector<std::string> builtin_scenario_ids();
Scenario builtin_scenario(const std::string& id);

struct ReproduceOutcome {
  ScenarioOutcome outcome;
  std::vector<std::pair<std::string, bool>> assertions;
  bool all_passed = true;
};

// Builds the named built-in scenario, runs every check and asserts the
// documented outcome for it.
ReproduceOutcome reproduce(const std::string& id);

// Report fragments (shared with the CLI).
Json verdict_json(const Verdict& v);
Json decision_json(const Decision& d);
Json verification_json(const VerificationReport& r);

}  // namespace utorsion
