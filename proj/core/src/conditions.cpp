#include "utorsion/conditions.hpp"

#include <algorithm>
#include <sstream>

namespace utorsion {

namespace {

SymbolicSet positive_indices() { return SymbolicSet::tail_from(1); }

MembershipBudget budget_of(const ConditionConfig& cfg) {
  return MembershipBudget{cfg.window, cfg.checkpoints};
}

std::string v_str(const char* label, const Verdict& v) {
  return std::string(label) + ": " + truth_name(v.value) + " (" + v.evidence.rule + ")";
}

}  // namespace

TorsionContext TorsionContext::make(
    DigitStream::Ptr digits, IdealSpec::Ptr ideal,
    std::vector<std::pair<std::string, SymbolicSet>> extra_witnesses,
    std::optional<std::pair<SymbolicSet, SymbolicSet>> partition, ConditionConfig config) {
  if (!digits || !ideal) throw std::invalid_argument("context needs digits and an ideal");
  TorsionContext ctx;
  ctx.digits = std::move(digits);
  ctx.ratio = ctx.digits->ratio();
  ctx.ideal = std::move(ideal);
  ctx.config = config;
  auto [support, bsupport] = ctx.digits->supports(config.window);
  ctx.support = support;
  ctx.bsupport = bsupport;
  // Canonical witnesses: the two boundary sets and the support itself; these
  // are exactly the sets the universal conditions get refuted with.
  if (!support.is_empty()) {
    Boundaries bd = boundaries(support);
    ctx.witness_catalog.emplace_back("rho(S)", bd.right);
    ctx.witness_catalog.emplace_back("lambda(S)-1", bd.left.shift(-1));
  }
  ctx.witness_catalog.emplace_back("S", support);
  for (auto& w : extra_witnesses) ctx.witness_catalog.push_back(std::move(w));
  ctx.partition = std::move(partition);
  return ctx;
}

// ---------------------------------------------------------------------------
// (i), (ii), (iii)
// ---------------------------------------------------------------------------

ConditionTriple check_i_ii_iii(const TorsionContext& ctx) {
  const auto budget = budget_of(ctx.config);
  if (ctx.support.is_empty()) {
    return {Verdict::holds("empty support"), Verdict::holds("empty support"),
            Verdict::holds("empty support")};
  }
  Boundaries bd = boundaries(ctx.support);
  Verdict i = ctx.ideal->membership(bd.right, budget);
  i.evidence.rule = "(i) ⟺ ρ(S) ∈ I: " + i.evidence.rule;
  Verdict ii = ctx.ideal->membership(ctx.support.diff(ctx.bsupport), budget);
  ii.evidence.rule = "(ii) ⟺ S∖S_b ∈ I: " + ii.evidence.rule;
  Verdict iii = ctx.ideal->membership(bd.left, budget);
  iii.evidence.rule = "(iii) ⟺ λ(S) ∈ I: " + iii.evidence.rule;
  return {i, ii, iii};
}

// ---------------------------------------------------------------------------
// Limit certificates
// ---------------------------------------------------------------------------

namespace {

enum class LimitKind { PhiZero, PlainZero, PlainOne };

struct LimitAnalysis {
  SymbolicSet good = SymbolicSet::empty();     // limit certified on these indices
  SymbolicSet bad = SymbolicSet::empty();      // bounded away from the target
  SymbolicSet unknown = SymbolicSet::empty();  // no certificate
};

// Classifies one (region, rule) fragment of the stream against the target
// limit, splitting along the ratio sequence's bounded/divergent regions.
void classify_fragment(LimitKind kind, const RatioSequence& ratio, const SymbolicSet& region,
                       const ValueRule& rule, LimitAnalysis& out) {
  if (region.is_empty()) return;
  auto br = ratio.bounded_region();
  auto dr = ratio.divergent_region();
  if (!br || !dr) {
    out.unknown = out.unknown.unite(region);
    return;
  }
  SymbolicSet div_part = region.intersect(*dr);
  SymbolicSet bdd_part = region.intersect(br->first);
  SymbolicSet leftover = region.diff(*dr).diff(br->first);
  out.unknown = out.unknown.unite(leftover);

  auto good = [&](const SymbolicSet& s) { out.good = out.good.unite(s); };
  auto bad = [&](const SymbolicSet& s) { out.bad = out.bad.unite(s); };

  switch (rule.kind) {
    case ValueRule::Kind::Const: {
      if (rule.c == 0) {
        switch (kind) {
          case LimitKind::PhiZero:
          case LimitKind::PlainZero:
            good(region);
            return;
          case LimitKind::PlainOne:
            // (0+1)/b = 1/b never reaches 1
            bad(region);
            return;
        }
      }
      switch (kind) {
        case LimitKind::PhiZero:
        case LimitKind::PlainZero:
          good(div_part);  // c/b -> 0 along divergent ratios
          bad(bdd_part);   // c/b bounded inside (0, 1)
          return;
        case LimitKind::PlainOne: {
          SymbolicSet exact = ratio.where_ratio_equals(rule.c + 1);
          good(region.intersect(exact));
          bad(div_part.diff(exact));
          bad(bdd_part.diff(exact));
          return;
        }
      }
      return;
    }
    case ValueRule::Kind::BMinusConst: {
      SymbolicSet zero = ratio.where_ratio_equals(rule.c);  // digit 0 there
      switch (kind) {
        case LimitKind::PhiZero:
          // ||(b-k)/b|| = ||-k/b|| -> 0 iff b -> oo
          good(div_part);
          good(bdd_part.intersect(zero));
          bad(bdd_part.diff(zero));
          return;
        case LimitKind::PlainZero:
          good(region.intersect(zero));
          bad(div_part.diff(zero));  // (b-k)/b -> 1
          bad(bdd_part.diff(zero));
          return;
        case LimitKind::PlainOne:
          if (rule.c == 1) {
            good(region);  // (b-1+1)/b = 1 identically
            return;
          }
          good(div_part);  // 1 - (k-1)/b -> 1
          bad(bdd_part);
          return;
      }
      return;
    }
    case ValueRule::Kind::FloorHalfB: {
      switch (kind) {
        case LimitKind::PhiZero:
        case LimitKind::PlainZero:
          bad(region);  // ||floor(b/2)/b|| >= 1/3 for every b >= 2
          return;
        case LimitKind::PlainOne: {
          SymbolicSet two = ratio.where_ratio_equals(2);
          good(region.intersect(two));  // (1+1)/2 = 1
          bad(region.diff(two));
          return;
        }
      }
      return;
    }
  }
}

// Full-cover fragments of the stream restricted to D (explicit rules plus the
// implicit zero region); pinned digits are finitely many and dropped into the
// matching bucket by direct evaluation.
LimitAnalysis analyze_limit(LimitKind kind, const TorsionContext& ctx, const SymbolicSet& D) {
  LimitAnalysis out;
  const DigitStream& stream = *ctx.digits;
  std::vector<PatternComponent> regions = stream.regions(ctx.config.window);
  SymbolicSet coverage = SymbolicSet::empty();
  for (const auto& comp : regions) coverage = coverage.unite(comp.set);
  SymbolicSet base = D.intersect(positive_indices());
  for (const auto& comp : regions) {
    classify_fragment(kind, *ctx.ratio, base.intersect(comp.set), comp.rule, out);
  }
  classify_fragment(kind, *ctx.ratio, base.diff(coverage), ValueRule::constant(0), out);
  return out;
}

// "There is an infinite D' contained in D mod the ideal along which the limit
// holds." Limits along sets are only meaningful on infinite sets, so a finite
// surviving part refutes the search.
Verdict limit_exists_verdict(const TorsionContext& ctx, const LimitAnalysis& analysis,
                             const std::string& what, const Verdict& domain_membership) {
  const auto budget = budget_of(ctx.config);
  Verdict bad = ctx.ideal->membership(analysis.bad, budget);
  if (bad.fails_val()) {
    Verdict v = Verdict::fails(what + " bounded away from the target on a non-ideal set");
    v.note(bad.evidence.rule);
    return v;
  }
  auto finite = [](const SymbolicSet& s) { return s.cardinality() == SetCardinality::Finite; };
  if (finite(analysis.good) && finite(analysis.unknown) && !analysis.bad.is_empty()) {
    return Verdict::fails(what +
                          " fails along every infinite subset: only finitely many indices "
                          "approach the target");
  }
  Verdict off = ctx.ideal->membership(analysis.bad.unite(analysis.unknown), budget);
  if (off.holds_val()) {
    auto gc = analysis.good.cardinality();
    bool good_infinite =
        gc == SetCardinality::Cofinite || gc == SetCardinality::InfiniteCoinfinite;
    // With the whole domain outside the ideal, a small exception set forces
    // the surviving part to be infinite.
    if (good_infinite || domain_membership.fails_val()) {
      Verdict v = Verdict::holds(what + " certified off an ideal-small exception set");
      v.note("exceptions: " + off.evidence.rule);
      return v;
    }
    return Verdict::unknown(what + ": exception set small but the surviving set may be finite");
  }
  return Verdict::unknown(what + ": no certificate either way");
}

struct WitnessCheck {
  bool applicable = false;
  std::vector<std::string> skip_reasons;
};

}  // namespace

// ---------------------------------------------------------------------------
// Bounded-support conditions (a1), (a2) and the star variant
// ---------------------------------------------------------------------------

BoundedConditions check_a1_a2(const TorsionContext& ctx) {
  const auto budget = budget_of(ctx.config);
  const SymbolicSet& S = ctx.support;
  const SymbolicSet& Sb = ctx.bsupport;

  // (a2) in its two-step form: A outside the ideal, b-bounded, with A ∩ S in
  // the ideal must push (A+1) ∩ S into the ideal.
  Verdict a2 = Verdict::holds("(a2): no applicable catalog witness");
  a2.catalog_relative();
  bool a2_unknown = false;
  std::vector<std::string> a2_notes;
  for (const auto& [label, A] : ctx.witness_catalog) {
    Verdict vA = ctx.ideal->membership(A, budget);
    if (!vA.fails_val()) {
      a2_notes.push_back(label + ": skipped (not outside the ideal: " +
                         truth_name(vA.value) + ")");
      continue;
    }
    BClassification cls = ctx.ratio->classify_bbound(A, ctx.config.window);
    if (!cls.bounded()) {
      a2_notes.push_back(label + ": skipped (not b-bounded: " + cls.rule + ")");
      continue;
    }
    Verdict vAS = ctx.ideal->membership(A.intersect(S), budget);
    if (!vAS.holds_val()) {
      a2_notes.push_back(label + ": skipped (A∩S not in the ideal: " +
                         truth_name(vAS.value) + ")");
      continue;
    }
    Verdict conclusion = ctx.ideal->membership(A.shift(1).intersect(S), budget);
    if (conclusion.fails_val()) {
      a2 = Verdict::fails("(a2) refuted: (A+1)∩S outside the ideal");
      a2.with_witness(label);
      a2.note(conclusion.evidence.rule);
      break;
    }
    if (conclusion.unknown_val()) {
      a2_unknown = true;
      a2_notes.push_back(label + ": inconclusive");
      continue;
    }
    a2_notes.push_back(label + ": passes");
  }
  if (!a2.fails_val() && a2_unknown) a2 = Verdict::unknown("(a2): a catalog witness is inconclusive");
  for (auto& n : a2_notes) a2.note(n);

  // (a1): for b-bounded support it is equivalent to (i)&(ii); otherwise the
  // catalog route through the star variant plus a limit certificate.
  BClassification s_cls = ctx.ratio->classify_bbound(S, ctx.config.window);
  Verdict a1;
  Verdict star = Verdict::holds("(*): no applicable catalog witness");
  star.catalog_relative();
  {
    bool star_unknown = false;
    bool a1_unknown = false;
    std::optional<Verdict> a1_failure;
    std::vector<std::string> star_notes, a1_notes;
    for (const auto& [label, A] : ctx.witness_catalog) {
      Verdict vA = ctx.ideal->membership(A, budget);
      if (!vA.fails_val()) {
        star_notes.push_back(label + ": skipped (not outside the ideal)");
        continue;
      }
      BClassification cls = ctx.ratio->classify_bbound(A, ctx.config.window);
      if (!cls.bounded()) {
        star_notes.push_back(label + ": skipped (not b-bounded)");
        continue;
      }
      Verdict vAs = ctx.ideal->membership(A.diff(S), budget);
      if (!vAs.holds_val()) {
        star_notes.push_back(label + ": skipped (A ⊆ S mod the ideal not established)");
        continue;
      }
      Verdict p1 = ctx.ideal->membership(A.shift(1).diff(S), budget);
      Verdict p2 = ctx.ideal->membership(A.diff(Sb), budget);
      Verdict p3_star = ctx.ideal->membership(A.diff(Sb.shift(-1)), budget);
      if (p1.fails_val() || p2.fails_val() || p3_star.fails_val()) {
        if (star.value != Truth::Fails) {
          star = Verdict::fails("(*) refuted on a catalog witness");
          star.with_witness(label);
          star.note(v_str("A+1 ⊆ S mod I", p1));
          star.note(v_str("A ⊆ S_b mod I", p2));
          star.note(v_str("A∩(S_b−1) ⊆ A mod I", p3_star));
        }
      } else if (p1.unknown_val() || p2.unknown_val() || p3_star.unknown_val()) {
        star_unknown = true;
      }
      // (a1): first two parts are shared; the third asks only for a limit.
      if (p1.fails_val() || p2.fails_val()) {
        if (!a1_failure) {
          Verdict f = Verdict::fails("(a1) refuted: inclusion part fails");
          f.with_witness(label);
          f.note(v_str("A+1 ⊆ S mod I", p1));
          f.note(v_str("A ⊆ S_b mod I", p2));
          a1_failure = f;
        }
        continue;
      }
      Verdict limit_part;
      if (p3_star.holds_val()) {
        limit_part = Verdict::holds("A∩(S_b−1) exhausts A: digits b−1 give the limit exactly");
      } else {
        LimitAnalysis la = analyze_limit(LimitKind::PlainOne, ctx, A.shift(1));
        // A outside the ideal puts A+1 outside it too (translation invariance)
        limit_part = limit_exists_verdict(ctx, la, "(c_n+1)/b_n → 1 along A+1", vA);
      }
      if (limit_part.fails_val() && !a1_failure) {
        Verdict f = Verdict::fails("(a1) refuted: the limit part fails definitively");
        f.with_witness(label);
        f.note(limit_part.evidence.rule);
        a1_failure = f;
      } else if (p1.unknown_val() || p2.unknown_val() || limit_part.unknown_val()) {
        a1_unknown = true;
        a1_notes.push_back(label + ": inconclusive");
      } else {
        a1_notes.push_back(label + ": passes (" + limit_part.evidence.rule + ")");
      }
    }
    if (star.value == Truth::Holds && star_unknown)
      star = Verdict::unknown("(*): a catalog witness is inconclusive");
    for (auto& n : star_notes) star.note(n);

    if (s_cls.bounded()) {
      ConditionTriple t = check_i_ii_iii(ctx);
      a1 = conjoin({t.i, t.ii}, "(a1) ⟺ (i)&(ii) for b-bounded support");
      a1.note(v_str("(i)", t.i));
      a1.note(v_str("(ii)", t.ii));
    } else if (a1_failure) {
      a1 = *a1_failure;
    } else if (a1_unknown) {
      a1 = Verdict::unknown("(a1): a catalog witness is inconclusive");
    } else {
      a1 = Verdict::holds("(a1): all applicable catalog witnesses pass");
      a1.catalog_relative();
      for (auto& n : a1_notes) a1.note(n);
    }
  }
  return {a1, a2, star};
}

// ---------------------------------------------------------------------------
// Divergent-support conditions (I), (II)
// ---------------------------------------------------------------------------

DivergentConditions check_I_II(const TorsionContext& ctx) {
  const auto budget = budget_of(ctx.config);
  const SymbolicSet& S = ctx.support;

  Verdict vS = ctx.ideal->membership(S, budget);
  LimitAnalysis la = analyze_limit(LimitKind::PhiZero, ctx, S);
  Verdict limit_search = limit_exists_verdict(ctx, la, "φ(c_n/b_n) → 0 along S", vS);
  Verdict I;
  if (vS.holds_val()) {
    I = Verdict::holds("(I): S lies in the ideal");
    I.note(v_str("limit-search sub-check", limit_search));
  } else if (limit_search.holds_val()) {
    I = Verdict::holds("(I): " + limit_search.evidence.rule);
  } else if (limit_search.fails_val() && vS.fails_val()) {
    I = Verdict::fails("(I): S outside the ideal and no co-small subset carries the limit");
    I.note(limit_search.evidence.rule);
  } else {
    I = Verdict::unknown("(I): neither branch certified");
  }

  // (II): quantified over D outside the ideal with D ⊆ S mod the ideal and
  // D−1 b-bounded; checked against the catalog plus the bounded-ratio slice.
  std::vector<std::pair<std::string, SymbolicSet>> candidates = ctx.witness_catalog;
  if (auto br = ctx.ratio->bounded_region()) {
    candidates.emplace_back("S∩(bounded+1)", S.intersect(br->first.shift(1)));
  }
  Verdict II = Verdict::holds("(II): no applicable witness");
  II.catalog_relative();
  bool unknown_seen = false;
  std::vector<std::string> notes;
  for (const auto& [label, D] : candidates) {
    Verdict vD = ctx.ideal->membership(D, budget);
    if (!vD.fails_val()) {
      notes.push_back(label + ": skipped (not outside the ideal)");
      continue;
    }
    Verdict vDS = ctx.ideal->membership(D.diff(S), budget);
    if (!vDS.holds_val()) {
      notes.push_back(label + ": skipped (not inside S mod the ideal)");
      continue;
    }
    BClassification cls = ctx.ratio->classify_bbound(D.shift(-1), ctx.config.window);
    if (!cls.bounded()) {
      notes.push_back(label + ": skipped (D−1 not b-bounded: " + cls.rule + ")");
      continue;
    }
    LimitAnalysis da = analyze_limit(LimitKind::PlainZero, ctx, D);
    Verdict lim = limit_exists_verdict(ctx, da, "c_n/b_n → 0 along " + label, vD);
    if (lim.fails_val()) {
      II = Verdict::fails("(II) refuted along a witness");
      II.with_witness(label);
      II.note(lim.evidence.rule);
      break;
    }
    if (lim.unknown_val()) {
      unknown_seen = true;
      notes.push_back(label + ": inconclusive");
      continue;
    }
    notes.push_back(label + ": passes");
  }
  if (II.value == Truth::Holds && unknown_seen)
    II = Verdict::unknown("(II): a witness is inconclusive");
  for (auto& n : notes) II.note(n);
  return {I, II, limit_search};
}

// ---------------------------------------------------------------------------
// Bounded / divergent mod the ideal
// ---------------------------------------------------------------------------

Verdict bounded_mod_ideal(const TorsionContext& ctx, const SymbolicSet& A) {
  const auto budget = budget_of(ctx.config);
  Verdict vA = ctx.ideal->membership(A, budget);
  if (vA.holds_val())
    return Verdict::holds("A lies in the ideal; the empty set is the bounded part");
  BClassification cls = ctx.ratio->classify_bbound(A, ctx.config.window);
  if (cls.bounded()) return Verdict::holds("A itself is b-bounded: " + cls.rule);
  if (auto br = ctx.ratio->bounded_region()) {
    SymbolicSet rest = A.intersect(positive_indices()).diff(br->first);
    Verdict vRest = ctx.ideal->membership(rest, budget);
    if (vRest.holds_val())
      return Verdict::holds("A minus the bounded-ratio region lies in the ideal");
    if (vRest.fails_val() && ctx.ratio->divergent_region())
      return Verdict::fails(
          "the part of A with divergent ratios stays outside the ideal for every bounded subset");
    return Verdict::unknown("membership of the divergent part undetermined");
  }
  return Verdict::unknown("no analytic ratio regions available");
}

Verdict divergent_mod_ideal(const TorsionContext& ctx, const SymbolicSet& A) {
  const auto budget = budget_of(ctx.config);
  auto dr = ctx.ratio->divergent_region();
  if (!dr) return Verdict::unknown("no analytic ratio regions available");
  SymbolicSet A1 = A.intersect(positive_indices());
  if (auto br = ctx.ratio->bounded_region()) {
    if (provably_subset(A1, br->first))
      return Verdict::fails("A lies in the bounded-ratio region; no divergent subset exists");
  }
  SymbolicSet core = A1.intersect(*dr);
  SymbolicSet rest = A1.diff(*dr);
  auto core_card = core.cardinality();
  bool core_infinite = core_card == SetCardinality::Cofinite ||
                       core_card == SetCardinality::InfiniteCoinfinite;
  if (core_card == SetCardinality::Finite)
    return Verdict::fails("A meets the divergent-ratio region only finitely often");
  Verdict vRest = ctx.ideal->membership(rest, budget);
  if (core_infinite && vRest.holds_val())
    return Verdict::holds("A∩(divergent region) is a divergent subset; the remainder is small");
  if (vRest.fails_val())
    return Verdict::fails("the b-bounded part of A stays outside the ideal");
  return Verdict::unknown("divergent-mod-ideal undetermined");
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

SplitConditions check_splitting(const TorsionContext& ctx, const SymbolicSet& B,
                                const SymbolicSet& D) {
  const auto budget = budget_of(ctx.config);
  if (!B.intersect(D).is_empty() || !B.unite(D).structurally_equal(SymbolicSet::naturals()))
    throw std::invalid_argument("splitting needs a partition N = B ⊔ D");
  Verdict vB = bounded_mod_ideal(ctx, B);
  Verdict vD = divergent_mod_ideal(ctx, D);
  Verdict vBI = ctx.ideal->membership(B, budget);
  Verdict vDI = ctx.ideal->membership(D, budget);
  if (vB.fails_val() && !vBI.holds_val())
    throw std::invalid_argument("B is provably not b-bounded mod the ideal");
  if (vD.fails_val() && !vDI.holds_val())
    throw std::invalid_argument("D is provably not b-divergent mod the ideal");

  const SymbolicSet& S = ctx.support;
  const SymbolicSet& Sb = ctx.bsupport;
  SymbolicSet BS = B.intersect(S);
  SymbolicSet BnotS = B.intersect(positive_indices()).diff(S);
  SymbolicSet DS = D.intersect(S);

  // (1): (B∩S)+1 ⊆ S mod I, B∩S ⊆ S_b mod I, and the (c+1)/b → 1 limit when
  // B∩S stays outside the ideal.
  Verdict q1 = ctx.ideal->membership(BS.shift(1).diff(S), budget);
  q1.evidence.rule = "(B∩S)+1 ⊆ S mod I: " + q1.evidence.rule;
  Verdict q2 = ctx.ideal->membership(BS.diff(Sb), budget);
  q2.evidence.rule = "B∩S ⊆ S_b mod I: " + q2.evidence.rule;
  Verdict q3;
  Verdict vBS = ctx.ideal->membership(BS, budget);
  if (vBS.holds_val()) {
    q3 = Verdict::holds("B∩S lies in the ideal; the limit clause is vacuous");
  } else {
    Verdict direct = ctx.ideal->membership(BS.diff(Sb.shift(-1)), budget);
    if (direct.holds_val()) {
      q3 = Verdict::holds("B∩S∩(S_b−1) exhausts B∩S: digits b−1 give the limit exactly");
    } else {
      LimitAnalysis la = analyze_limit(LimitKind::PlainOne, ctx, BS.shift(1));
      q3 = limit_exists_verdict(ctx, la, "(c_n+1)/b_n → 1 along (B∩S)+1", vBS);
    }
  }
  Verdict cond1 = conjoin({q1, q2, q3}, "(1): bounded part behaves like a b-adic tail");
  cond1.note(v_str("inclusion into S", q1));
  cond1.note(v_str("inclusion into S_b", q2));
  cond1.note(v_str("limit clause", q3));

  // (2): off-support bounded part has a c/b → 0 subset.
  Verdict cond2;
  Verdict vBnotS = ctx.ideal->membership(BnotS, budget);
  if (vBnotS.holds_val()) {
    cond2 = Verdict::holds("(2): B∖S lies in the ideal; vacuous");
  } else {
    Verdict direct = ctx.ideal->membership(BnotS.intersect(S.shift(-1)), budget);
    if (direct.holds_val()) {
      cond2 = Verdict::holds("(2): off (S−1) the successor digits vanish");
    } else {
      LimitAnalysis la = analyze_limit(LimitKind::PlainZero, ctx, BnotS.shift(1));
      cond2 = limit_exists_verdict(ctx, la, "(2): c_n/b_n → 0 along (B∖S)+1", vBnotS);
    }
  }

  // (3): divergent support part carries a φ(c/b) → 0 subset.
  Verdict cond3;
  Verdict vDS = ctx.ideal->membership(DS, budget);
  if (vDS.holds_val()) {
    cond3 = Verdict::holds("(3): D∩S lies in the ideal; vacuous");
  } else {
    LimitAnalysis la = analyze_limit(LimitKind::PhiZero, ctx, DS);
    cond3 = limit_exists_verdict(ctx, la, "(3): φ(c_n/b_n) → 0 along D∩S", vDS);
  }

  Verdict overall = conjoin({cond1, cond2, cond3}, "partition characterization (1)&(2)&(3)");
  overall.note(v_str("(1)", cond1));
  overall.note(v_str("(2)", cond2));
  overall.note(v_str("(3)", cond3));

  // Reduction list on the restricted elements, for comparison.
  SplitConditions out;
  out.overall = overall;
  out.cond1 = cond1;
  out.cond2 = cond2;
  out.cond3 = cond3;
  {
    TorsionContext ctx_b =
        TorsionContext::make(ctx.digits->masked(B), ctx.ideal, {}, std::nullopt, ctx.config);
    ConditionTriple tb = check_i_ii_iii(ctx_b);
    BoundedConditions bb = check_a1_a2(ctx_b);
    out.reduction_A_xB = conjoin({tb.i, tb.ii, bb.a2}, "A_{x_B} = (i)&(ii)&(a2) on x_B");
    out.reduction_A_xB.note(v_str("(i) on x_B", tb.i));
    out.reduction_A_xB.note(v_str("(ii) on x_B", tb.ii));
    out.reduction_A_xB.note(v_str("(a2) on x_B", bb.a2));

    TorsionContext ctx_d =
        TorsionContext::make(ctx.digits->masked(D), ctx.ideal, {}, std::nullopt, ctx.config);
    DivergentConditions dd = check_I_II(ctx_d);
    out.reduction_I_xD = dd.cond_I;
    out.reduction_II_xD = dd.cond_II;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The decision procedure
// ---------------------------------------------------------------------------

const char* decision_rule_name(DecisionRule rule) {
  switch (rule) {
    case DecisionRule::EquivalentModIdeal:
      return "equivalent-mod-ideal";
    case DecisionRule::SupportSmall:
      return "support-in-ideal";
    case DecisionRule::FlatSupportCofinal:
      return "b-support-cofinal-mod-ideal";
    case DecisionRule::RightBoundaryBBounded:
      return "right-boundary-necessity";
    case DecisionRule::LeftBoundaryBBounded:
      return "left-boundary-necessity";
    case DecisionRule::TripleSufficient:
      return "triple-condition-sufficiency";
    case DecisionRule::NestedIdeal:
      return "nested-ideal-sufficiency";
    case DecisionRule::BoundedSequence:
      return "b-bounded-sequence-characterization";
    case DecisionRule::BoundedSupport:
      return "b-bounded-support-characterization";
    case DecisionRule::DivergentSupport:
      return "b-divergent-support-characterization";
    case DecisionRule::DivergentNaturals:
      return "b-divergent-naturals-characterization";
    case DecisionRule::Splitting:
      return "splitting-partition-characterization";
    case DecisionRule::NoRule:
      return "no-rule";
  }
  return "?";
}

const char* decision_value_name(DecisionValue value) {
  switch (value) {
    case DecisionValue::In:
      return "In";
    case DecisionValue::NotIn:
      return "NotIn";
    case DecisionValue::Unknown:
      return "Unknown";
  }
  return "?";
}

namespace {

DecisionValue truth_to_decision(Truth t) {
  switch (t) {
    case Truth::Holds:
      return DecisionValue::In;
    case Truth::Fails:
      return DecisionValue::NotIn;
    case Truth::Unknown:
      return DecisionValue::Unknown;
  }
  return DecisionValue::Unknown;
}

}  // namespace

Decision decide(const TorsionContext& ctx) {
  const auto budget = budget_of(ctx.config);
  Decision d;
  auto note = [&](std::string s) { d.trail.push_back(std::move(s)); };

  // (0) Digit patches inside the ideal never change the answer: decide the base.
  if (ctx.digits->source() == DigitStream::Source::Modified) {
    Disagreement dis = disagreement_bounds(*ctx.digits, *ctx.digits->base(), ctx.config.window);
    Verdict vp = ctx.ideal->membership(dis.superset, budget);
    if (vp.holds_val()) {
      TorsionContext base_ctx =
          TorsionContext::make(ctx.digits->base(), ctx.ideal, {}, ctx.partition, ctx.config);
      Decision base = decide(base_ctx);
      if (base.value != DecisionValue::Unknown) {
        d.value = base.value;
        d.rule = DecisionRule::EquivalentModIdeal;
        d.catalog_relative = base.catalog_relative;
        note("digits differ from the base only on an ideal set: " + vp.evidence.rule);
        note(std::string("base decision: ") + decision_value_name(base.value) + " via " +
             decision_rule_name(base.rule));
        for (auto& t : base.trail) d.trail.push_back("  " + t);
        return d;
      }
      note("base stream decision was Unknown; evaluating the patched stream directly");
    }
  }

  // (1) S in the ideal.
  Verdict vS = ctx.ideal->membership(ctx.support, budget);
  note(v_str("S ∈ I", vS));
  if (vS.holds_val()) {
    d.value = DecisionValue::In;
    d.rule = DecisionRule::SupportSmall;
    return d;
  }

  // (2) complement of S_b in the ideal.
  Verdict vSb = ctx.ideal->membership(ctx.bsupport.complement(), budget);
  note(v_str("N∖S_b ∈ I", vSb));
  if (vSb.holds_val()) {
    d.value = DecisionValue::In;
    d.rule = DecisionRule::FlatSupportCofinal;
    return d;
  }

  std::optional<Boundaries> bd;
  if (!ctx.support.is_empty()) bd = boundaries(ctx.support);

  // (3) rho(S) b-bounded and outside the ideal.
  if (bd) {
    BClassification cls = ctx.ratio->classify_bbound(bd->right, ctx.config.window);
    if (cls.bounded()) {
      Verdict v = ctx.ideal->membership(bd->right, budget);
      note(v_str("ρ(S) b-bounded; ρ(S) ∈ I", v));
      if (v.fails_val()) {
        d.value = DecisionValue::NotIn;
        d.rule = DecisionRule::RightBoundaryBBounded;
        return d;
      }
    }
  }

  // (4) lambda(S)-1 b-bounded and lambda(S) outside the ideal.
  if (bd) {
    BClassification cls = ctx.ratio->classify_bbound(bd->left.shift(-1), ctx.config.window);
    if (cls.bounded()) {
      Verdict v = ctx.ideal->membership(bd->left, budget);
      note(v_str("λ(S)−1 b-bounded; λ(S) ∈ I", v));
      if (v.fails_val()) {
        d.value = DecisionValue::NotIn;
        d.rule = DecisionRule::LeftBoundaryBBounded;
        return d;
      }
    }
  }

  // (5) The triple condition is sufficient unconditionally.
  ConditionTriple t = check_i_ii_iii(ctx);
  Verdict T = conjoin({t.i, t.ii, t.iii}, "T = (i)&(ii)&(iii)");
  note(v_str("(i)", t.i));
  note(v_str("(ii)", t.ii));
  note(v_str("(iii)", t.iii));
  if (T.holds_val()) {
    d.value = DecisionValue::In;
    d.rule = DecisionRule::TripleSufficient;
    return d;
  }

  // (6) Nested ideal: (i)&(ii) suffice.
  if (ctx.ideal->nested() == TriState::Yes) {
    Verdict ii2 = conjoin({t.i, t.ii}, "(i)&(ii)");
    note(v_str("nested ideal; (i)&(ii)", ii2));
    if (ii2.holds_val()) {
      d.value = DecisionValue::In;
      d.rule = DecisionRule::NestedIdeal;
      return d;
    }
  }

  // (7) b-bounded sequence: membership is equivalent to the triple.
  BClassification seq_cls = ctx.ratio->classify_bbound(SymbolicSet::naturals(), ctx.config.window);
  if (seq_cls.bounded()) {
    note("sequence b-bounded: verdict equals T = " + std::string(truth_name(T.value)));
    d.value = truth_to_decision(T.value);
    d.rule = DecisionRule::BoundedSequence;
    return d;
  }

  // (8) S b-bounded mod the ideal: membership is equivalent to A = (i)&(ii)&(a2).
  Verdict b_mod = bounded_mod_ideal(ctx, ctx.support);
  note(v_str("S b-bounded mod I", b_mod));
  if (b_mod.holds_val()) {
    BoundedConditions bc = check_a1_a2(ctx);
    Verdict A = conjoin({t.i, t.ii, bc.a2}, "A = (i)&(ii)&(a2)");
    note(v_str("(a2)", bc.a2));
    d.value = truth_to_decision(A.value);
    d.rule = DecisionRule::BoundedSupport;
    d.catalog_relative = A.evidence.catalog_relative;
    return d;
  }

  // (9) S b-divergent mod the ideal: membership is equivalent to (I)&(II).
  Verdict d_mod = divergent_mod_ideal(ctx, ctx.support);
  note(v_str("S b-divergent mod I", d_mod));
  if (d_mod.holds_val()) {
    DivergentConditions dc = check_I_II(ctx);
    Verdict DI = conjoin({dc.cond_I, dc.cond_II}, "(I)&(II)");
    note(v_str("(I)", dc.cond_I));
    note(v_str("(II)", dc.cond_II));
    d.value = truth_to_decision(DI.value);
    d.rule = DecisionRule::DivergentSupport;
    d.catalog_relative = DI.evidence.catalog_relative;
    return d;
  }

  // (10) The whole index set b-divergent mod the ideal: (I) alone decides.
  Verdict n_mod = divergent_mod_ideal(ctx, SymbolicSet::naturals());
  note(v_str("N b-divergent mod I", n_mod));
  if (n_mod.holds_val()) {
    DivergentConditions dc = check_I_II(ctx);
    note(v_str("(I)", dc.cond_I));
    d.value = truth_to_decision(dc.cond_I.value);
    d.rule = DecisionRule::DivergentNaturals;
    d.catalog_relative = dc.cond_I.evidence.catalog_relative;
    return d;
  }

  // (11) Declared splitting partition.
  if (ctx.partition) {
    SplitConditions sc = check_splitting(ctx, ctx.partition->first, ctx.partition->second);
    note(v_str("splitting (1)&(2)&(3)", sc.overall));
    note(v_str("reduction A_{x_B}", sc.reduction_A_xB));
    note(v_str("reduction (I_{x_D})", sc.reduction_I_xD));
    note(v_str("reduction (II_{x_D})", sc.reduction_II_xD));
    d.value = truth_to_decision(sc.overall.value);
    d.rule = DecisionRule::Splitting;
    d.catalog_relative = sc.overall.evidence.catalog_relative;
    return d;
  }

  d.value = DecisionValue::Unknown;
  d.rule = DecisionRule::NoRule;
  return d;
}

}  // namespace utorsion
