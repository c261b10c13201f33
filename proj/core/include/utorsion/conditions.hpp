#pragma once

#include "utorsion/digit_stream.hpp"
#include "utorsion/ideal.hpp"
#include "utorsion/ratio_sequence.hpp"
#include "utorsion/symbolic_set.hpp"
#include "utorsion/verdict.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace utorsion {

struct ConditionConfig {
  long long window = 512;
  std::vector<long long> checkpoints = {1000, 10000};
  Rat resolution = Rat(1, 1000000000);
  long long norm_budget = 512;
};

// Everything the condition checkers consume: the element (as digits), its
// supports, the ideal, and the finite witness catalog for the universally
// quantified conditions.
struct TorsionContext {
  DigitStream::Ptr digits;
  RatioSequence::Ptr ratio;
  IdealSpec::Ptr ideal;
  SymbolicSet support;   // S
  SymbolicSet bsupport;  // S_b
  std::vector<std::pair<std::string, SymbolicSet>> witness_catalog;
  std::optional<std::pair<SymbolicSet, SymbolicSet>> partition;  // (B, D), declared
  ConditionConfig config;

  static TorsionContext make(
      DigitStream::Ptr digits, IdealSpec::Ptr ideal,
      std::vector<std::pair<std::string, SymbolicSet>> extra_witnesses = {},
      std::optional<std::pair<SymbolicSet, SymbolicSet>> partition = std::nullopt,
      ConditionConfig config = {});
};

// (i): rho(S) in the ideal, (ii): S \ S_b in the ideal, (iii): lambda(S) in it.
struct ConditionTriple {
  Verdict i, ii, iii;
};
ConditionTriple check_i_ii_iii(const TorsionContext& ctx);

// The bounded-support conditions: the catalog-checked universal statements.
struct BoundedConditions {
  Verdict a1, a2, star;
};
BoundedConditions check_a1_a2(const TorsionContext& ctx);

struct DivergentConditions {
  Verdict cond_I, cond_II;
  Verdict limit_search;  // the existence sub-check inside (I), reported separately
};
DivergentConditions check_I_II(const TorsionContext& ctx);

// Splitting evaluation for a declared partition N = B ⊔ D. The overall verdict
// follows the partition-level condition list (1)(2)(3); the reduction list on
// the restricted elements x_B, x_D is evaluated alongside for comparison.
struct SplitConditions {
  Verdict overall;
  Verdict cond1, cond2, cond3;
  Verdict reduction_A_xB, reduction_I_xD, reduction_II_xD;
};
SplitConditions check_splitting(const TorsionContext& ctx, const SymbolicSet& B,
                                const SymbolicSet& D);

enum class DecisionValue { In, NotIn, Unknown };

enum class DecisionRule {
  EquivalentModIdeal,     // digits patched on an ideal set; decided via the base
  SupportSmall,           // S in the ideal
  FlatSupportCofinal,     // complement of S_b in the ideal
  RightBoundaryBBounded,  // rho(S) b-bounded and outside the ideal
  LeftBoundaryBBounded,   // lambda(S)-1 b-bounded and lambda(S) outside the ideal
  TripleSufficient,       // (i)&(ii)&(iii) hold
  NestedIdeal,            // nested ideal and (i)&(ii) hold
  BoundedSequence,        // the whole sequence is b-bounded: verdict = T_x
  BoundedSupport,         // S b-bounded mod ideal: verdict = A_x
  DivergentSupport,       // S b-divergent mod ideal: verdict = (I)&(II)
  DivergentNaturals,      // N b-divergent mod ideal: verdict = (I)
  Splitting,              // declared partition characterization
  NoRule,
};

const char* decision_rule_name(DecisionRule rule);
const char* decision_value_name(DecisionValue value);

struct Decision {
  DecisionValue value = DecisionValue::Unknown;
  DecisionRule rule = DecisionRule::NoRule;
  bool catalog_relative = false;
  std::vector<std::string> trail;
};

Decision decide(const TorsionContext& ctx);

// "A is b-bounded (b-divergent) mod the ideal": a bounded (divergent) subset
// whose complement inside A lies in the ideal.
Verdict bounded_mod_ideal(const TorsionContext& ctx, const SymbolicSet& A);
Verdict divergent_mod_ideal(const TorsionContext& ctx, const SymbolicSet& A);

}  // namespace utorsion
