#include "utorsion/conditions.hpp"

#include "utorsion/scenario.hpp"

#include <doctest.h>

using namespace utorsion;

namespace {

TorsionContext ctx_of(const char* id) { return builtin_scenario(id).context(); }

}  // namespace

TEST_CASE("boundary conditions (i), (ii), (iii)") {
  {
    TorsionContext c = ctx_of("NoWC");
    ConditionTriple t = check_i_ii_iii(c);
    CHECK(t.i.holds_val());
    CHECK(t.ii.holds_val());
    CHECK(t.iii.holds_val());
  }
  {
    TorsionContext c = ctx_of("ce");
    ConditionTriple t = check_i_ii_iii(c);
    CHECK(t.i.fails_val());
    CHECK(t.ii.fails_val());
    CHECK(t.iii.fails_val());
  }
  {
    TorsionContext c = ctx_of("notnested");
    ConditionTriple t = check_i_ii_iii(c);
    CHECK(t.i.holds_val());
    CHECK(t.ii.holds_val());
    CHECK(t.iii.fails_val());
  }
  {
    // empty support: everything vacuous
    auto zero = DigitStream::from_rational(RatioSequence::constant(2), Rat(0));
    TorsionContext c = TorsionContext::make(zero, IdealSpec::density(1));
    ConditionTriple t = check_i_ii_iii(c);
    CHECK(t.i.holds_val());
    CHECK(t.ii.holds_val());
    CHECK(t.iii.holds_val());
  }
}

TEST_CASE("bounded-support conditions") {
  {
    // (a2) holds on the witness catalog although (iii) fails
    TorsionContext c = ctx_of("Exa2osserv");
    BoundedConditions bc = check_a1_a2(c);
    CHECK(bc.a2.holds_val());
    CHECK(bc.a2.evidence.catalog_relative);
    ConditionTriple t = check_i_ii_iii(c);
    CHECK(t.iii.fails_val());
  }
  {
    // (a1) holds while the stronger star variant is refuted
    TorsionContext c = ctx_of("ax1p-b");
    BoundedConditions bc = check_a1_a2(c);
    CHECK(bc.a1.holds_val());
    CHECK(bc.star.fails_val());
    CHECK(bc.star.evidence.witness.has_value());
  }
  {
    // S in the ideal and b-bounded: both conditions are immediate
    auto c2 = RatioSequence::constant(2);
    SymbolicSet sq1 = SymbolicSet::interval_union(IndexRule::quadratic(1, 2, 1),
                                                  IndexRule::quadratic(1, 2, 1));  // {(n+1)^2}
    auto d = DigitStream::pattern(c2, {{sq1, ValueRule::constant(1)}});
    TorsionContext c = TorsionContext::make(d, IdealSpec::density(1));
    BoundedConditions bc = check_a1_a2(c);
    CHECK(bc.a1.holds_val());
    CHECK(bc.a2.holds_val());
  }
  {
    // lambda(S)-1 b-bounded: (a2) is refuted exactly when (iii) fails
    TorsionContext c = ctx_of("notnested");
    BoundedConditions bc = check_a1_a2(c);
    CHECK(bc.a2.fails_val());
    CHECK(bc.a2.evidence.witness.has_value());
  }
}

TEST_CASE("divergent-support conditions") {
  {
    TorsionContext c = ctx_of("ce");
    DivergentConditions dc = check_I_II(c);
    CHECK(dc.cond_I.holds_val());
    CHECK(dc.cond_II.holds_val());
  }
  {
    // S in the ideal makes (I) hold even though the limit search fails:
    // digits floor(b/2) keep ||c_n/b_n|| near 1/2 along the support
    auto affine = RatioSequence::affine();
    SymbolicSet sq1 = SymbolicSet::interval_union(IndexRule::quadratic(1, 2, 1),
                                                  IndexRule::quadratic(1, 2, 1));
    auto d = DigitStream::pattern(affine, {{sq1, ValueRule::floor_half_b()}});
    TorsionContext c = TorsionContext::make(d, IdealSpec::density(1));
    DivergentConditions dc = check_I_II(c);
    CHECK(dc.cond_I.holds_val());
    CHECK(dc.limit_search.fails_val());
    CHECK(dc.cond_II.holds_val());  // vacuous
  }
}

TEST_CASE("bounded and divergent mod ideal") {
  {
    TorsionContext c = ctx_of("Exa2osserv");
    CHECK(bounded_mod_ideal(c, c.support).holds_val());
    CHECK(divergent_mod_ideal(c, c.support).fails_val());
  }
  {
    TorsionContext c = ctx_of("ce");
    CHECK(bounded_mod_ideal(c, c.support).fails_val());
    CHECK(divergent_mod_ideal(c, c.support).holds_val());
    CHECK(divergent_mod_ideal(c, SymbolicSet::naturals()).holds_val());
  }
  {
    // a set inside the ideal is b-bounded mod the ideal for free
    TorsionContext c = ctx_of("NoWC");
    SymbolicSet sq1 = SymbolicSet::interval_union(IndexRule::quadratic(1, 2, 1),
                                                  IndexRule::quadratic(1, 2, 1));
    CHECK(bounded_mod_ideal(c, sq1).holds_val());
    // but it has no divergent subset under a constant ratio
    CHECK(divergent_mod_ideal(c, sq1).fails_val());
  }
}

TEST_CASE("splitting evaluation") {
  SymbolicSet odds = SymbolicSet::residue(2, {1});
  SymbolicSet evens = SymbolicSet::residue(2, {0});
  {
    // support confined to the bounded side and small in the ideal
    auto ratio = RatioSequence::piecewise(odds, RatioRule::constant(2), RatioRule::pow_two());
    SymbolicSet odd_squares = SymbolicSet::interval_union(IndexRule::quadratic(4, 4, 1),
                                                          IndexRule::quadratic(4, 4, 1));
    auto d = DigitStream::pattern(ratio, {{odd_squares, ValueRule::constant(1)}});
    TorsionContext c = TorsionContext::make(d, IdealSpec::density(1));
    SplitConditions sc = check_splitting(c, odds, evens);
    CHECK(sc.overall.holds_val());
    CHECK(sc.cond3.holds_val());  // D∩S is empty
  }
  {
    // built-in instance with both sides active
    Scenario s = builtin_scenario("ax1p-b");
    TorsionContext c = s.context();
    SplitConditions sc = check_splitting(c, s.partition->first, s.partition->second);
    CHECK(sc.overall.holds_val());
    // the reduction list on the restricted elements diverges from the
    // partition characterization here: the masked bounded part loses the
    // carry structure of the full element
    CHECK(sc.reduction_A_xB.fails_val());
    CHECK(sc.reduction_II_xD.fails_val());
    CHECK(sc.reduction_I_xD.holds_val());
  }
  {
    // b-support missing on the bounded side refutes the second clause
    auto ratio = RatioSequence::piecewise(odds, RatioRule::constant(3), RatioRule::pow_two());
    auto d = DigitStream::pattern(ratio, {{odds.intersect(SymbolicSet::tail_from(1)),
                                           ValueRule::constant(1)}});
    TorsionContext c = TorsionContext::make(d, IdealSpec::density(1));
    SplitConditions sc = check_splitting(c, odds, evens);
    CHECK(sc.cond1.fails_val());
    CHECK(sc.overall.fails_val());
  }
  {
    // malformed partitions are rejected
    Scenario s = builtin_scenario("ax1p-b");
    TorsionContext c = s.context();
    CHECK_THROWS_AS(check_splitting(c, odds, odds), std::invalid_argument);
  }
}

TEST_CASE("decision procedure on the catalog") {
  struct Expected {
    const char* id;
    DecisionValue value;
    DecisionRule rule;
  };
  const Expected table[] = {
      {"ce", DecisionValue::In, DecisionRule::DivergentSupport},
      {"NoWC", DecisionValue::In, DecisionRule::TripleSufficient},
      {"Exa2osserv", DecisionValue::In, DecisionRule::BoundedSupport},
      {"notnested", DecisionValue::NotIn, DecisionRule::LeftBoundaryBBounded},
      {"prufer", DecisionValue::NotIn, DecisionRule::BoundedSequence},
      {"atomic-PropoNew", DecisionValue::NotIn, DecisionRule::RightBoundaryBBounded},
      {"ax1p-b", DecisionValue::In, DecisionRule::Splitting},
  };
  for (const auto& e : table) {
    CAPTURE(e.id);
    Decision d = decide(ctx_of(e.id));
    CHECK(d.value == e.value);
    CHECK(d.rule == e.rule);
  }
}

TEST_CASE("support in the ideal decides immediately") {
  auto affine = RatioSequence::affine();
  SymbolicSet sq1 = SymbolicSet::interval_union(IndexRule::quadratic(1, 2, 1),
                                                IndexRule::quadratic(1, 2, 1));
  auto d = DigitStream::pattern(affine, {{sq1, ValueRule::floor_half_b()}});
  TorsionContext c = TorsionContext::make(d, IdealSpec::density(1));
  Decision dec = decide(c);
  CHECK(dec.value == DecisionValue::In);
  CHECK(dec.rule == DecisionRule::SupportSmall);
}

TEST_CASE("cofinal b-support decides membership") {
  // digits b-1 outside a sparse set: S_b is cofinite mod the ideal
  auto c2 = RatioSequence::constant(2);
  SymbolicSet sq1 = SymbolicSet::interval_union(IndexRule::quadratic(1, 2, 1),
                                                IndexRule::quadratic(1, 2, 1));
  auto d = DigitStream::pattern(
      c2, {{sq1.complement().intersect(SymbolicSet::tail_from(1)), ValueRule::b_minus_one()}});
  TorsionContext c = TorsionContext::make(d, IdealSpec::density(1));
  Decision dec = decide(c);
  CHECK(dec.value == DecisionValue::In);
  CHECK(dec.rule == DecisionRule::FlatSupportCofinal);
}

TEST_CASE("digit patches in the ideal never flip the decision") {
  Scenario s = builtin_scenario("NoWC");
  SymbolicSet squares = SymbolicSet::interval_union(IndexRule::quadratic(1, 4, 4),
                                                    IndexRule::quadratic(1, 4, 4), {{0, 1}});
  REQUIRE(s.ideal->membership(squares).holds_val());
  auto patched = DigitStream::modified(s.digits, {{squares, ValueRule::constant(0)}});
  TorsionContext c = TorsionContext::make(patched, s.ideal);
  Decision dec = decide(c);
  CHECK(dec.value == DecisionValue::In);
  CHECK(dec.rule == DecisionRule::EquivalentModIdeal);
}

TEST_CASE("implication chain across the catalog") {
  for (const auto& id : builtin_scenario_ids()) {
    Scenario s = builtin_scenario(id);
    if (!s.digits) continue;
    CAPTURE(id);
    TorsionContext c = s.context();
    ConditionTriple t = check_i_ii_iii(c);
    BoundedConditions bc = check_a1_a2(c);
    Verdict T = conjoin({t.i, t.ii, t.iii}, "T");
    Verdict A = conjoin({t.i, t.ii, bc.a2}, "A");
    Verdict ii2 = conjoin({t.i, t.ii}, "(i)&(ii)");
    // T => A, (i)&(ii) => (a1), (iii) => (a2): dominance on verdicts
    if (T.holds_val()) CHECK_FALSE(A.fails_val());
    if (ii2.holds_val()) CHECK_FALSE(bc.a1.fails_val());
    if (t.iii.holds_val()) CHECK_FALSE(bc.a2.fails_val());
    // b-bounded support: (a1) coincides with (i)&(ii)
    if (c.ratio->classify_bbound(c.support, c.config.window).bounded()) {
      CHECK(bc.a1.value == ii2.value);
    }
    // lambda(S)-1 b-bounded: (a2) and (iii) agree on definitive outcomes
    if (!c.support.is_empty()) {
      Boundaries bd = boundaries(c.support);
      if (c.ratio->classify_bbound(bd.left.shift(-1), c.config.window).bounded()) {
        if (!bc.a2.unknown_val() && !t.iii.unknown_val()) CHECK(bc.a2.value == t.iii.value);
      }
    }
  }
}
