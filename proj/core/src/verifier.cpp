#include "utorsion/verifier.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace utorsion {

namespace {

enum class NormClass { Member, Excluded, Unresolved };

NormClass classify_norm(const DigitStream& digits, long long k, const Rat& epsilon,
                        const Rat& resolution, long long step_budget) {
  NormInterval nv = digits.circle_norm(k, resolution, step_budget);
  if (nv.lo >= epsilon) return NormClass::Member;
  if (nv.hi < epsilon) return NormClass::Excluded;
  if (nv.exact) return NormClass::Unresolved;  // exact tie is already decided above
  // Sharpen: finer resolution and a larger budget before giving up.
  nv = digits.circle_norm(k, resolution * Rat(1, 1 << 20), step_budget * 4);
  if (nv.lo >= epsilon) return NormClass::Member;
  if (nv.hi < epsilon) return NormClass::Excluded;
  return NormClass::Unresolved;
}

}  // namespace

ExceptionReport exception_set(const DigitStream& digits, const Rat& epsilon, long long horizon,
                              const Rat& resolution, long long step_budget) {
  if (!(epsilon > 0 && epsilon <= Rat(1, 2)))
    throw std::invalid_argument("exception threshold must lie in (0, 1/2]");
  if (horizon < 1) throw std::invalid_argument("exception horizon must be >= 1");
  ExceptionReport out;
  out.epsilon = epsilon;
  out.horizon = horizon;
  out.norms_exact = digits.exactly_evaluable();

  std::optional<long long> period, periodic_from;
  if (out.norms_exact) {
    // With a constant ratio and periodic digit regions the exact tails repeat:
    // T_{k+P} = T_k once k is past every region prefix.
    long long P = 1;
    long long from = 1;
    for (const auto& comp : digits.regions(1)) {
      auto pv = comp.set.periodic_view();
      if (!pv) {
        P = 0;
        break;
      }
      P = std::lcm(P, pv->modulus);
      from = std::max(from, static_cast<long long>(pv->prefix->size()));
    }
    const auto& ovr = digits.pattern_equivalent()->overrides();
    for (const auto& [n, c] : ovr) from = std::max(from, n + 1);
    if (P > 0) {
      period = P;
      periodic_from = from;
    }
  }

  std::map<long long, NormClass> residue_class;
  for (long long k = 0; k <= horizon; ++k) {
    NormClass c;
    if (period && k >= *periodic_from) {
      long long r = (k - *periodic_from) % *period;
      auto it = residue_class.find(r);
      if (it == residue_class.end()) {
        c = classify_norm(digits, k, epsilon, resolution, step_budget);
        residue_class[r] = c;
      } else {
        c = it->second;
      }
    } else {
      c = classify_norm(digits, k, epsilon, resolution, step_budget);
    }
    if (c == NormClass::Member) out.members.push_back(k);
    if (c == NormClass::Unresolved) out.unresolved.push_back(k);
  }

  if (period) {
    out.period = period;
    out.periodic_from = periodic_from;
    bool all_excluded = true;
    for (long long r = 0; r < *period; ++r) {
      auto it = residue_class.find(r);
      NormClass c = it != residue_class.end()
                        ? it->second
                        : classify_norm(digits, *periodic_from + r, epsilon, resolution,
                                        step_budget);
      if (c == NormClass::Member) {
        out.member_residues.push_back((*periodic_from + r) % *period);
        all_excluded = false;
      } else if (c == NormClass::Unresolved) {
        all_excluded = false;
      }
    }
    std::sort(out.member_residues.begin(), out.member_residues.end());
    out.cofinal_exclusion_certified = all_excluded && out.unresolved.empty();
  }
  return out;
}

SmallnessAssessment smallness_assessment(const ExceptionReport& report, const IdealSpec& ideal,
                                         const std::vector<long long>& schedule) {
  SmallnessAssessment out;
  std::vector<long long> combined = report.members;
  combined.insert(combined.end(), report.unresolved.begin(), report.unresolved.end());
  std::sort(combined.begin(), combined.end());
  SymbolicSet E = SymbolicSet::prefix_only(combined, report.horizon);

  for (long long cp : schedule) {
    if (cp < 1 || cp > report.horizon) continue;
    Int count = E.count_leq(cp);
    SmallnessPoint pt;
    pt.checkpoint = cp;
    switch (ideal.family()) {
      case IdealFamily::Fin:
        pt.value = Rat(count);
        break;
      case IdealFamily::DensityAlpha: {
        // |E(n)| / n for the default order; finer orders go through the trail op
        pt.value = Rat(count, cp);
        break;
      }
      case IdealFamily::Summable:
      case IdealFamily::WaveGamma:
        pt.value = submeasure_partial(ideal, E, cp);
        break;
    }
    out.trail.push_back(pt);
  }

  if (out.trail.size() >= 2) {
    const Rat& first = out.trail.front().value;
    const Rat& last = out.trail.back().value;
    if (last < first)
      out.trend = "decreasing";
    else if (last > first)
      out.trend = "increasing";
    else
      out.trend = "flat";
  } else {
    out.trend = "n/a";
  }

  if (report.cofinal_exclusion_certified) {
    out.verdict = Verdict::holds(
        "exceptions are finite: every residue class past the prefix is certified below ε");
    return out;
  }
  if (report.period && !report.member_residues.empty() && report.unresolved.empty()) {
    SymbolicSet periodic_part =
        SymbolicSet::residue(*report.period, report.member_residues)
            .intersect(SymbolicSet::tail_from(*report.periodic_from));
    Verdict v = ideal.membership(periodic_part);
    if (v.fails_val()) {
      out.verdict = Verdict::fails(
          "exceptions contain an eventually periodic set outside the ideal: " + v.evidence.rule);
      return out;
    }
    if (v.holds_val()) {
      out.verdict =
          Verdict::holds("exceptions lie in an eventually periodic ideal member: " + v.evidence.rule);
      return out;
    }
  }
  if (combined.empty()) {
    out.verdict = Verdict::holds("no exceptions up to the horizon; empty set");
    return out;
  }
  out.verdict = Verdict::unknown("finite window; smallness judged by the trail (trend: " +
                                 out.trend + ")");
  return out;
}

const char* consistency_flag_name(ConsistencyFlag flag) {
  switch (flag) {
    case ConsistencyFlag::Consistent:
      return "CONSISTENT";
    case ConsistencyFlag::Inconclusive:
      return "INCONCLUSIVE";
    case ConsistencyFlag::Contradiction:
      return "CONTRADICTION";
  }
  return "?";
}

VerificationReport run_verification(const TorsionContext& ctx, const std::vector<Rat>& eps_list,
                                    const std::vector<long long>& horizons) {
  VerificationReport out;
  out.decision = decide(ctx);

  bool any_notsmall_definitive = false;
  bool any_bounded_below_trail = false;
  bool all_finite_certified = true;
  bool any_run = false;

  for (const Rat& eps : eps_list) {
    for (long long N : horizons) {
      any_run = true;
      VerificationRun run;
      run.report =
          exception_set(*ctx.digits, eps, N, ctx.config.resolution, ctx.config.norm_budget);
      std::vector<long long> schedule = {N / 10, 3 * N / 10, N};
      run.smallness = smallness_assessment(run.report, *ctx.ideal, schedule);
      if (run.smallness.verdict.fails_val()) any_notsmall_definitive = true;
      if (!run.smallness.verdict.holds_val()) all_finite_certified = false;
      // Trail bounded below: no decay across the checkpoints, exact members
      // only. Meaningful for density ratio trails; submeasure trails are
      // partial sums and always nondecreasing.
      if (ctx.ideal->family() == IdealFamily::DensityAlpha && run.report.unresolved.empty() &&
          run.smallness.trail.size() >= 2) {
        const Rat& first = run.smallness.trail.front().value;
        bool bounded_below = first > 0;
        for (const auto& pt : run.smallness.trail)
          bounded_below &= pt.value >= first / 2;
        if (bounded_below) any_bounded_below_trail = true;
      }
      out.runs.push_back(std::move(run));
    }
  }

  if (!any_run) {
    out.flag = ConsistencyFlag::Inconclusive;
    out.note = "no (eps, N) runs requested";
    return out;
  }
  if (out.decision.value == DecisionValue::In &&
      (any_notsmall_definitive || any_bounded_below_trail)) {
    out.flag = ConsistencyFlag::Contradiction;
    out.note = any_notsmall_definitive
                   ? "membership decided In but an exception set is certified non-small"
                   : "membership decided In but an exception trail stays bounded below";
    return out;
  }
  if (out.decision.value == DecisionValue::NotIn && all_finite_certified) {
    out.flag = ConsistencyFlag::Contradiction;
    out.note = "membership decided NotIn but every exception set is certified finite";
    return out;
  }
  if (out.decision.value == DecisionValue::Unknown) {
    out.flag = ConsistencyFlag::Inconclusive;
    out.note = "membership undecided; trails reported for inspection";
    return out;
  }
  out.flag = ConsistencyFlag::Consistent;
  out.note = "empirical layer agrees with the decision";
  return out;
}

}  // namespace utorsion
