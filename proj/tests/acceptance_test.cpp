// Acceptance suite: one line per criterion, exact tolerances, no floats on
// the assertion path. Returns nonzero if any criterion fails.

#include "utorsion/scenario.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

using namespace utorsion;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& title, const std::function<bool(std::string&)>& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                  t0)
                .count();
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << number << ". " << title << "  (" << ms << " ms)";
  if (!detail.empty()) std::cout << "  -- " << detail;
  std::cout << "\n";
  if (!ok) ++g_failures;
}

std::mt19937_64 rng(0xace5);

RatioSequence::Ptr random_ratio() {
  std::uniform_int_distribution<int> kind_d(0, 3), b_d(2, 9), m_d(2, 6);
  switch (kind_d(rng)) {
    case 0:
      return RatioSequence::constant(b_d(rng));
    case 1:
      return RatioSequence::affine();
    case 2: {
      long long m = m_d(rng);
      return RatioSequence::piecewise(SymbolicSet::residue(m, {1 % m}),
                                      RatioRule::constant(b_d(rng)), RatioRule::constant(b_d(rng)));
    }
    default:
      return RatioSequence::explicit_prefix({b_d(rng), b_d(rng)}, RatioRule::constant(b_d(rng)));
  }
}

}  // namespace

int main() {
  criterion(1, "telescoping identity over random ratio sequences", [](std::string&) {
    std::uniform_int_distribution<long long> idx_d(1, 30);
    for (int trial = 0; trial < 1000; ++trial) {
      auto seq = random_ratio();
      long long l = idx_d(rng), r = idx_d(rng);
      if (l > r) std::swap(l, r);
      Rat sum = 0;
      for (long long i = l; i <= r; ++i) sum += Rat(seq->ratio_at(i) - 1, seq->scale_at(i));
      if (sum != Rat(1, seq->scale_at(l - 1)) - Rat(1, seq->scale_at(r))) return false;
    }
    return true;
  });

  criterion(2, "round trip: extraction and evaluation enclose the input", [](std::string&) {
    std::uniform_int_distribution<long long> q_d(2, 10000);
    for (int trial = 0; trial < 500; ++trial) {
      long long q = q_d(rng);
      std::uniform_int_distribution<long long> p_d(0, q - 1);
      Rat x(p_d(rng), q);
      auto seq = random_ratio();
      auto d = DigitStream::from_rational(seq, x);
      for (long long n = 1; n <= 40; ++n) {
        EvalResult ev = d->eval_with_tail(n);
        if (!(ev.lo <= x && x <= ev.hi)) return false;
        if (ev.hi - ev.lo != Rat(1, seq->scale_at(n))) return false;
      }
    }
    return true;
  });

  criterion(3, "block-union counting closed form and density window", [](std::string& detail) {
    SymbolicSet x = SymbolicSet::interval_union(IndexRule::quadratic(4, 0, 0),
                                                IndexRule::quadratic(4, 4, 1));
    for (long long k = 0; k <= 200; ++k) {
      long long n = (2 * k + 1) * (2 * k + 1);
      if (x.count_leq(n) != Int(2 * k * k + 4 * k + 2)) return false;
    }
    Rat ratio(x.count_leq(1000000), 1000000);
    detail = "|X(1e6)|/1e6 = " + rat_str(ratio);
    return ratio >= Rat(48, 100) && ratio <= Rat(52, 100);
  });

  criterion(4, "wave weights, partial masses and the non-nested witness", [](std::string&) {
    auto ideal = IdealSpec::wave(Rat(3, 5));
    const auto* w = ideal->wave_structure();
    for (long long n = 0; n <= 50; ++n) {
      if (w->gamma(n * n + n + 1) != 1) return false;
      if (w->gamma(n * n + 1) != pow_rat(Rat(3, 5), static_cast<unsigned long>(n))) return false;
    }
    long long w50 = 50 * 50 + 1, z50 = 50 * 50 + 50 + 1;
    if (!(submeasure_partial(*ideal, w->W, w50) <= Rat(1) / (1 - Rat(3, 5)))) return false;
    if (submeasure_partial(*ideal, w->Z, z50) != 51) return false;
    Verdict probe = nestedness_probe(*ideal, {*ideal->nested_witness()});
    return probe.fails_val() && probe.evidence.witness.has_value();
  });

  criterion(5, "pole element: exact norms, decision and trail", [](std::string&) {
    Scenario s = builtin_scenario("prufer");
    for (long long k = 0; k <= 50; ++k) {
      NormInterval nv = s.digits->circle_norm(k, Rat(1, 1000000000), 512);
      if (!(nv.exact && nv.lo == Rat(1, 2) && nv.hi == Rat(1, 2))) return false;
    }
    TorsionContext ctx = s.context();
    VerificationReport vr = run_verification(ctx, {Rat(1, 4)}, {1000});
    if (vr.decision.value != DecisionValue::NotIn) return false;
    if (vr.decision.rule != DecisionRule::BoundedSequence) return false;
    for (const auto& pt : vr.runs.at(0).smallness.trail)
      if (pt.value < 1) return false;
    return vr.flag == ConsistencyFlag::Consistent;
  });

  criterion(6, "factorial-base element: decision and norm decay", [](std::string&) {
    Scenario s = builtin_scenario("ce");
    TorsionContext ctx = s.context();
    Decision d = decide(ctx);
    if (d.value != DecisionValue::In || d.rule != DecisionRule::DivergentSupport) return false;
    ConditionTriple t = check_i_ii_iii(ctx);
    if (!(t.i.fails_val() && t.ii.fails_val() && t.iii.fails_val())) return false;
    for (long long k = 5; k <= 200; ++k) {
      NormInterval nv = s.digits->circle_norm(k, Rat(1, 1000000000), 512);
      if (!(nv.hi <= Rat(1, k + 1))) return false;
    }
    return true;
  });

  criterion(7, "atomic element: exact fractional bounds and decision", [](std::string&) {
    Scenario s = builtin_scenario("atomic-PropoNew");
    for (long long n = 0; n <= 100; ++n) {
      NormInterval nv = s.digits->circle_norm(3 * n + 1, Rat(1, 1000000000), 512);
      if (!nv.exact) return false;
      if (!(nv.frac_lo >= Rat(1, 2) && nv.frac_lo <= Rat(5, 6))) return false;
    }
    TorsionContext ctx = s.context();
    if (!ctx.ideal->membership(ctx.support).fails_val()) return false;  // density 1/3
    Decision d = decide(ctx);
    return d.value == DecisionValue::NotIn;
  });

  criterion(8, "block-union element end to end at N = 10^4", [](std::string& detail) {
    Scenario s = builtin_scenario("NoWC");
    TorsionContext ctx = s.context();
    Decision d = decide(ctx);
    if (d.value != DecisionValue::In || d.rule != DecisionRule::TripleSufficient) return false;
    ExceptionReport rep = exception_set(*s.digits, Rat(1, 4), 10000, ctx.config.resolution,
                                        ctx.config.norm_budget);
    Rat density(Int(rep.members.size() + rep.unresolved.size()), 10000);
    std::ostringstream os;
    os << "|E|/N = " << rat_str(density) << ", unresolved = " << rep.unresolved.size();
    detail = os.str();
    if (density > Rat(5, 100)) return false;
    SmallnessAssessment sa = smallness_assessment(rep, *ctx.ideal, {1000, 3000, 10000});
    if (sa.trail.size() != 3) return false;
    return sa.trail[0].value > sa.trail[1].value && sa.trail[1].value > sa.trail[2].value;
  });

  criterion(9, "implication chain and consistency across the catalog", [](std::string& detail) {
    int scenarios_checked = 0;
    for (const auto& id : builtin_scenario_ids()) {
      Scenario s = builtin_scenario(id);
      if (!s.digits) {
        // ideal-only scenario: the probe is its whole content
        Verdict pv = nestedness_probe(*s.ideal, s.probe_pairs);
        if (s.expect.nested_probe && pv.value != *s.expect.nested_probe) return false;
        ++scenarios_checked;
        continue;
      }
      TorsionContext ctx = s.context();
      ConditionTriple t = check_i_ii_iii(ctx);
      BoundedConditions bc = check_a1_a2(ctx);
      Verdict T = conjoin({t.i, t.ii, t.iii}, "T");
      Verdict A = conjoin({t.i, t.ii, bc.a2}, "A");
      Verdict ii2 = conjoin({t.i, t.ii}, "(i)&(ii)");
      if (T.holds_val() && A.fails_val()) return false;
      if (ii2.holds_val() && bc.a1.fails_val()) return false;
      if (t.iii.holds_val() && bc.a2.fails_val()) return false;
      if (ctx.ratio->classify_bbound(ctx.support, ctx.config.window).bounded() &&
          bc.a1.value != ii2.value)
        return false;
      VerificationReport vr = run_verification(ctx, s.eps_list, s.horizons);
      if (vr.flag == ConsistencyFlag::Contradiction) return false;
      ++scenarios_checked;
    }
    detail = std::to_string(scenarios_checked) + " scenarios";
    return scenarios_checked >= 8;
  });

  criterion(10, "digit patches inside the ideal leave the decision fixed", [](std::string&) {
    Scenario s = builtin_scenario("NoWC");
    SymbolicSet squares = SymbolicSet::interval_union(IndexRule::quadratic(1, 4, 4),
                                                      IndexRule::quadratic(1, 4, 4), {{0, 1}});
    if (!s.ideal->membership(squares).holds_val()) return false;
    auto patched = DigitStream::modified(s.digits, {{squares, ValueRule::constant(0)}});
    TorsionContext ctx = TorsionContext::make(patched, s.ideal);
    Decision d = decide(ctx);
    return d.value == DecisionValue::In;
  });

  std::cout << (g_failures == 0 ? "acceptance: all criteria passed\n"
                                : "acceptance: FAILURES present\n");
  return g_failures == 0 ? 0 : 1;
}
