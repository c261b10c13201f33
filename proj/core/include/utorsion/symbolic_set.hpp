#pragma once

#include "utorsion/index_rule.hpp"
#include "utorsion/rational.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace utorsion {

// Cardinality classification derivable from the structural form.
enum class SetCardinality { Finite, Cofinite, InfiniteCoinfinite, Unknown };

constexpr long long kUnlimitedHorizon = std::numeric_limits<long long>::max();

enum class SetOp { Union, Intersect, Diff };

struct SetAlgebraView;

// An immutable subset of N with a total membership test (within its validity
// horizon) and enough structure for exact counting and boundary combinatorics.
//
// Forms:
//   Periodic       eventually periodic sets: explicit prefix bits, then residues
//                  mod m. Subsumes Empty, Finite, Cofinite, Residue and N.
//   IntervalUnion  union of blocks [lo(n), hi(n)] for strictly increasing
//                  affine/quadratic index rules, plus explicit head blocks.
//   PrefixOnly     an enumerated sample valid up to a horizon; queries past the
//                  horizon are refused rather than guessed.
//   Algebra        lazy union/intersection/difference when no exact
//                  normalization applies.
class SymbolicSet {
 public:
  enum class Form { Periodic, IntervalUnion, PrefixOnly, Algebra };

  SymbolicSet();  // empty set

  // -- construction ----------------------------------------------------------
  static SymbolicSet empty();
  static SymbolicSet naturals();
  static SymbolicSet finite(std::vector<long long> members);
  static SymbolicSet cofinite(std::vector<long long> excluded);
  static SymbolicSet residue(long long modulus, std::vector<long long> residues);
  // All n >= from.
  static SymbolicSet tail_from(long long from);
  // Blocks [lo(n), hi(n)] for n >= 0 after the explicit head blocks.
  // Requires lo(n) <= hi(n) and hi(n) + 1 < lo(n+1) for all n (proved, not sampled).
  static SymbolicSet interval_union(IndexRule lo, IndexRule hi,
                                    std::vector<std::pair<long long, long long>> head = {});
  static SymbolicSet prefix_only(std::vector<long long> members, long long horizon);

  // -- algebra ---------------------------------------------------------------
  SymbolicSet unite(const SymbolicSet& other) const;
  SymbolicSet intersect(const SymbolicSet& other) const;
  SymbolicSet diff(const SymbolicSet& other) const;
  SymbolicSet complement() const;
  SymbolicSet shift(long long k) const;  // n -> n + k, clipped to N

  // -- queries ---------------------------------------------------------------
  Form form() const;
  bool member(long long n) const;  // throws beyond_horizon_error past horizon()
  Int count_leq(long long n) const;  // |A(n)| = |A \cap [0, n]|
  long long horizon() const;
  SetCardinality cardinality() const;
  bool is_empty() const;
  // Members as a list when the form proves the set finite.
  std::optional<std::vector<long long>> finite_members() const;
  bool structurally_equal(const SymbolicSet& other) const;

  // Smallest member, if derivable.
  std::optional<long long> min_member() const;

  // -- structure access (for analytic certificates) ---------------------------
  struct PeriodicView {
    long long modulus;
    const std::vector<char>* residues;
    const std::vector<char>* prefix;
    long long residue_count;  // number of set residues mod modulus
  };
  std::optional<PeriodicView> periodic_view() const;

  struct IntervalUnionView {
    IndexRule lo, hi;
    const std::vector<std::pair<long long, long long>>* head;
  };
  std::optional<IntervalUnionView> interval_union_view() const;

  std::optional<SetAlgebraView> algebra_view() const;

  std::optional<std::vector<long long>> prefix_members(long long* horizon_out = nullptr) const;

  std::string str() const;

 public:
  struct Node;  // implementation detail, defined in symbolic_set.cpp

 private:
  explicit SymbolicSet(std::shared_ptr<const Node> node);
  friend SymbolicSet detail_wrap_set(std::shared_ptr<const Node> node);
  friend std::shared_ptr<const Node> detail_unwrap_set(const SymbolicSet& s);
  std::shared_ptr<const Node> node_;
};

struct SetAlgebraView {
  SetOp op;
  SymbolicSet a;
  SymbolicSet b;
};

struct Boundaries {
  SymbolicSet left;      // lambda(S) = S \ (S+1)
  SymbolicSet right;     // rho(S)    = S \ (S-1)
  SymbolicSet isolated;  // i(S)      = lambda(S) \cap rho(S)
};

// Left/right boundary and isolated points. Rejects the empty set.
Boundaries boundaries(const SymbolicSet& s);

// Sound one-sided proofs; false means "not proved", never "disproved".
bool provably_subset(const SymbolicSet& a, const SymbolicSet& b);
bool provably_empty_intersection(const SymbolicSet& a, const SymbolicSet& b);

struct Block {
  long long lo, hi;
  bool may_extend;  // last block might continue past the window
};

// Maximal intervals of A \cap [0, window], in order.
std::vector<Block> blocks(const SymbolicSet& s, long long window);

// A pair of strictly increasing index sequences (l_n), (r_n). The pair is
// "left nested" when l_n <= r_n < l_{n+1} - 1 for every n; exactly the pairs
// arising as (lambda(S), rho(S)) of an infinite non-cofinite S.
struct NestedPair {
  IndexRule lefts;
  IndexRule rights;
  std::string label;  // optional display name

  NestedPair(IndexRule l, IndexRule r, std::string label = "");
};

struct PairValidation {
  bool holds;
  long long first_violation;  // -1 when holds
  std::string detail;
};

PairValidation validate_left_nested(const NestedPair& p, long long window);

// S = union of [l_n, r_n]; boundaries(S) recovers the pair. Rejects invalid pairs.
SymbolicSet realize_from_pair(const NestedPair& p);

}  // namespace utorsion
