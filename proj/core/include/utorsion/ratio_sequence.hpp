#pragma once

#include "utorsion/rational.hpp"
#include "utorsion/symbolic_set.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace utorsion {

// Elementary closed-form rules for a single ratio value b_n >= 2.
struct RatioRule {
  enum class Kind { Const, NPlusOne, IdentityN, PowTwo };
  Kind kind = Kind::Const;
  long long c = 2;

  static RatioRule constant(long long c) {
    if (c < 2) throw std::invalid_argument("ratios must be >= 2");
    return {Kind::Const, c};
  }
  static RatioRule n_plus_one() { return {Kind::NPlusOne, 0}; }
  static RatioRule identity_n() { return {Kind::IdentityN, 0}; }  // valid on n >= 2 only
  static RatioRule pow_two() { return {Kind::PowTwo, 0}; }

  Int at(long long n) const;
  bool divergent() const { return kind != Kind::Const; }
  std::optional<long long> const_value() const {
    return kind == Kind::Const ? std::optional<long long>(c) : std::nullopt;
  }
  // Indices n >= 1 with at(n) == v; caller intersects with the rule's region.
  SymbolicSet where_equals(const Int& v) const;
  std::string str() const;
};

struct BClassification {
  enum class Tag { BBounded, BDivergent, Mixed, Unknown };
  Tag tag = Tag::Unknown;
  long long bound = 0;  // valid when BBounded
  long long window = 0;
  std::string rule;  // analytic rule applied, or a sampling note

  bool bounded() const { return tag == Tag::BBounded; }
  bool divergent() const { return tag == Tag::BDivergent; }
};

// An arithmetic sequence u_0 = 1, u_n = u_{n-1} * b_n with b_n >= 2, given by
// its ratio stream. Immutable; the u_n memo is internally synchronized.
class RatioSequence {
 public:
  using Ptr = std::shared_ptr<const RatioSequence>;

  static Ptr constant(long long b);
  static Ptr affine();  // b_n = n + 1, i.e. u_n = (n+1)!
  static Ptr piecewise(SymbolicSet on_set, RatioRule on, RatioRule off);
  static Ptr explicit_prefix(std::vector<long long> prefix, RatioRule tail);
  // Always classifies Unknown beyond the inspected window.
  static Ptr opaque(std::function<long long(long long)> fn);

  Int ratio_at(long long n) const;  // n >= 1
  Int scale_at(long long n) const;  // u_n, memoized, n >= 0

  BClassification classify_bbound(const SymbolicSet& A, long long window) const;

  // Maximal region (set, bound) where b is provably bounded; nullopt when the
  // kind admits no analytic answer.
  std::optional<std::pair<SymbolicSet, long long>> bounded_region() const;
  // Region where b provably diverges along every infinite subset.
  std::optional<SymbolicSet> divergent_region() const;

  SymbolicSet where_ratio_equals(const Int& v, long long opaque_window = 4096) const;

  // Single constant ratio, when the whole sequence is one value.
  std::optional<long long> constant_value() const;
  // Eventual period of n -> b_n when the ratio stream is eventually periodic:
  // returns (period, prefix length).
  std::optional<std::pair<long long, long long>> eventual_period() const;

  std::string str() const;

 private:
  enum class Kind { Constant, Affine, Piecewise, ExplicitPrefix, Opaque };
  RatioSequence() = default;

  Kind kind_ = Kind::Constant;
  RatioRule on_{}, off_{};      // Piecewise; on_ doubles as the single rule elsewhere
  SymbolicSet on_set_;          // Piecewise
  std::vector<long long> prefix_;  // ExplicitPrefix, values for n = 1..len
  std::function<long long(long long)> fn_;  // Opaque

  mutable std::mutex memo_mutex_;
  mutable std::vector<Int> u_memo_;
};

}  // namespace utorsion
