// Command-line runner for torsion scenarios: deciding whether an element of
// the circle with a given digit expansion is topologically torsion under
// ideal convergence, and cross-checking the decision with exact norm data.

#include "utorsion/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace utorsion;

long long default_budget() {
  if (const char* env = std::getenv("UTORSION_BUDGET")) {
    try {
      long long v = std::stoll(env);
      if (v > 0) return v;
    } catch (...) {
    }
    std::cerr << "warning: ignoring malformed UTORSION_BUDGET\n";
  }
  return 512;
}

void emit_report(const Json& report, const std::string& path) {
  if (path.empty()) return;
  std::ofstream out(path);
  out << report.dump(2) << "\n";
}

void print_verdict_line(const char* label, const Json& v) {
  std::cout << "  " << label << ": " << v["value"].get<std::string>();
  if (v.contains("catalog_relative")) std::cout << " [catalog-relative]";
  std::cout << "  — " << v["rule"].get<std::string>() << "\n";
}

void print_human(const Json& report) {
  std::cout << "scenario: " << report["scenario"].get<std::string>() << "\n";
  if (report.contains("ratio")) std::cout << "ratio:    " << report["ratio"].get<std::string>() << "\n";
  std::cout << "ideal:    " << report["ideal"].get<std::string>() << "\n";
  if (report.contains("supports")) {
    std::cout << "supports: S = " << report["supports"]["S"].get<std::string>()
              << ", S_b = " << report["supports"]["S_b"].get<std::string>() << "\n";
  }
  if (report.contains("conditions")) {
    const Json& c = report["conditions"];
    std::cout << "conditions:\n";
    for (const char* key : {"i", "ii", "iii", "a1", "a2", "star", "I", "II"}) {
      if (c.contains(key)) print_verdict_line(key, c[key]);
    }
    if (c.contains("splitting")) {
      std::cout << "splitting:\n";
      print_verdict_line("(1)&(2)&(3)", c["splitting"]["overall"]);
      print_verdict_line("reduction A_{x_B}", c["splitting"]["reduction_A_xB"]);
      print_verdict_line("reduction (I_{x_D})", c["splitting"]["reduction_I_xD"]);
      print_verdict_line("reduction (II_{x_D})", c["splitting"]["reduction_II_xD"]);
    }
  }
  if (report.contains("decide")) {
    std::cout << "decision: " << report["decide"]["value"].get<std::string>() << " via "
              << report["decide"]["rule"].get<std::string>() << "\n";
  }
  if (report.contains("verification")) {
    const Json& v = report["verification"];
    std::cout << "verification: " << v["flag"].get<std::string>() << " — "
              << v["note"].get<std::string>() << "\n";
    for (const auto& run : v["runs"]) {
      std::cout << "  eps=" << run["eps"].get<std::string>() << " N=" << run["N"]
                << ": members=" << run["members"] << " unresolved=" << run["unresolved"]
                << " trend=" << run["trend"].get<std::string>() << "\n";
      for (const auto& pt : run["trail"]) {
        std::cout << "    n=" << pt["n"] << "  value=" << pt["value"].get<std::string>()
                  << "  ≈" << pt["approx"].get<double>() << "\n";
      }
    }
  }
  if (report.contains("nested_probe")) print_verdict_line("nested_probe", report["nested_probe"]);
  const auto& failed = report["expectations"]["failed"];
  if (!failed.empty()) {
    std::cout << "failed expectations:\n";
    for (const auto& f : failed) std::cout << "  " << f.get<std::string>() << "\n";
  }
  std::cout << "exit code: " << report["exit_code"] << "\n";
}

RatioSequence::Ptr parse_ratio_arg(const std::string& spec) {
  if (spec == "affine") return RatioSequence::affine();
  auto colon = spec.find(':');
  if (colon != std::string::npos && spec.substr(0, colon) == "constant")
    return RatioSequence::constant(std::stoll(spec.substr(colon + 1)));
  throw scenario_parse_error("ratio spec must be 'affine' or 'constant:<b>' (files cover the rest)");
}

IdealSpec::Ptr parse_ideal_arg(const std::string& spec) {
  if (spec == "fin") return IdealSpec::fin();
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    std::string head = spec.substr(0, colon), tail = spec.substr(colon + 1);
    if (head == "density") return IdealSpec::density(parse_rat(tail));
    if (head == "wave") return IdealSpec::wave(parse_rat(tail));
    if (head == "summable" && tail == "reciprocal")
      return IdealSpec::summable({WeightRule::Kind::Reciprocal});
  }
  throw scenario_parse_error("ideal spec: fin | density:<alpha> | wave:<q> | summable:reciprocal");
}

// "a2,a1,a0:a2,a1,a0" -> nested pair of quadratic index rules.
NestedPair parse_pair_arg(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw scenario_parse_error("pair spec needs 'l2,l1,l0:r2,r1,r0'");
  auto coeffs = [](const std::string& s) {
    long long c[3] = {0, 0, 0};
    std::stringstream ss(s);
    std::string item;
    for (int i = 0; i < 3 && std::getline(ss, item, ','); ++i) c[i] = std::stoll(item);
    return IndexRule::quadratic(c[0], c[1], c[2]);
  };
  return NestedPair(coeffs(spec.substr(0, colon)), coeffs(spec.substr(colon + 1)));
}

int exit_with_report(const ScenarioOutcome& outcome, const std::string& report_path) {
  emit_report(outcome.report, report_path);
  print_human(outcome.report);
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact decision and verification of topological torsion under ideal convergence"};
  app.require_subcommand(1);

  std::string report_path;
  long long budget = default_budget();
  std::string resolution = "1/1000000000";
  app.add_option("--report", report_path, "write the machine-readable report to this path");
  app.add_option("--budget", budget, "norm evaluation step budget (env UTORSION_BUDGET)");
  app.add_option("--resolution", resolution, "norm interval resolution as an exact rational");

  auto apply_params = [&](Scenario& s) {
    s.config.norm_budget = budget;
    s.config.resolution = parse_rat(resolution);
  };

  // run <file>
  std::string run_path;
  CLI::App* cmd_run = app.add_subcommand("run", "run a scenario file");
  cmd_run->add_option("file", run_path, "scenario JSON file")->required();

  // reproduce <id>
  std::string repro_id;
  CLI::App* cmd_repro = app.add_subcommand("reproduce", "run a built-in scenario and its assertions");
  cmd_repro->add_option("id", repro_id, "built-in scenario id (or 'list')")->required();

  // digits <x> <ratio> <n>
  std::string digits_x, digits_ratio;
  long long digits_n = 20;
  CLI::App* cmd_digits = app.add_subcommand("digits", "print the canonical digit expansion of a rational");
  cmd_digits->add_option("x", digits_x, "rational in [0,1), e.g. 5/8")->required();
  cmd_digits->add_option("ratio", digits_ratio, "ratio spec: affine | constant:<b>")->required();
  cmd_digits->add_option("n", digits_n, "number of digits");

  // norms <scenario> --eps --N
  std::string norms_path;
  std::vector<std::string> norms_eps;
  std::vector<long long> norms_N;
  CLI::App* cmd_norms = app.add_subcommand("norms", "exception sets for a scenario (file or built-in id)");
  cmd_norms->add_option("scenario", norms_path, "scenario file or built-in id")->required();
  cmd_norms->add_option("--eps", norms_eps, "thresholds (exact rationals)");
  cmd_norms->add_option("--N", norms_N, "horizons");

  // probe-nested <ideal> <pair>
  std::string probe_ideal, probe_pair;
  CLI::App* cmd_probe = app.add_subcommand("probe-nested", "probe an ideal for nestedness with a pair");
  cmd_probe->add_option("ideal", probe_ideal, "fin | density:<alpha> | wave:<q> | summable:reciprocal")
      ->required();
  cmd_probe->add_option("pair", probe_pair, "'l2,l1,l0:r2,r1,r0' or 'wave' for the canonical witness")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_run) {
      Scenario s = load_scenario_file(run_path);
      apply_params(s);
      return exit_with_report(run_scenario(s), report_path);
    }
    if (*cmd_repro) {
      if (repro_id == "list") {
        for (const auto& id : builtin_scenario_ids()) std::cout << id << "\n";
        return 0;
      }
      ReproduceOutcome r = reproduce(repro_id);
      emit_report(r.outcome.report, report_path);
      print_human(r.outcome.report);
      std::cout << "assertions:\n";
      for (const auto& [what, ok] : r.assertions)
        std::cout << "  [" << (ok ? "pass" : "FAIL") << "] " << what << "\n";
      if (!r.all_passed) return 1;
      return r.outcome.exit_code;
    }
    if (*cmd_digits) {
      RatioSequence::Ptr ratio = parse_ratio_arg(digits_ratio);
      auto d = DigitStream::from_rational(ratio, parse_rat(digits_x));
      std::cout << "n : b_n : c_n\n";
      for (long long n = 1; n <= digits_n; ++n)
        std::cout << n << " : " << ratio->ratio_at(n) << " : " << d->digit_at(n) << "\n";
      EvalResult ev = d->eval_with_tail(digits_n);
      std::cout << "partial sum: " << rat_str(ev.lo) << "  (tail bound " << rat_str(ev.hi - ev.lo)
                << ")\n";
      if (ev.exact) std::cout << "exact value: " << rat_str(*ev.exact) << "\n";
      return 0;
    }
    if (*cmd_norms) {
      Scenario s;
      try {
        s = load_scenario_file(norms_path);
      } catch (const scenario_parse_error&) {
        s = builtin_scenario(norms_path);
      }
      apply_params(s);
      if (!s.digits) throw scenario_parse_error("scenario has no digit stream");
      if (!norms_eps.empty()) {
        s.eps_list.clear();
        for (const auto& e : norms_eps) s.eps_list.push_back(parse_rat(e));
      }
      if (!norms_N.empty()) s.horizons = norms_N;
      Json out;
      out["scenario"] = s.name;
      Json runs = Json::array();
      for (const Rat& eps : s.eps_list) {
        for (long long N : s.horizons) {
          ExceptionReport rep = exception_set(*s.digits, eps, N, s.config.resolution,
                                              s.config.norm_budget);
          Json j;
          j["eps"] = rat_str(eps);
          j["N"] = N;
          j["members"] = rep.members;
          j["unresolved"] = rep.unresolved;
          runs.push_back(j);
          std::cout << "eps=" << rat_str(eps) << " N=" << N << ": |E|=" << rep.members.size()
                    << " unresolved=" << rep.unresolved.size() << "\n";
        }
      }
      out["runs"] = runs;
      emit_report(out, report_path);
      return 0;
    }
    if (*cmd_probe) {
      IdealSpec::Ptr ideal = parse_ideal_arg(probe_ideal);
      std::vector<NestedPair> pairs;
      if (probe_pair == "wave") {
        auto w = ideal->nested_witness();
        if (!w) throw scenario_parse_error("this ideal has no canonical witness pair");
        pairs.push_back(*w);
      } else {
        pairs.push_back(parse_pair_arg(probe_pair));
      }
      Verdict v = nestedness_probe(*ideal, pairs);
      Json j = verdict_json(v);
      std::cout << "nestedness: " << j.dump(2) << "\n";
      emit_report(j, report_path);
      return v.unknown_val() ? 2 : 0;
    }
  } catch (const scenario_parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
