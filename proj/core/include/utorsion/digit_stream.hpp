#pragma once

#include "utorsion/ideal.hpp"
#include "utorsion/ratio_sequence.hpp"
#include "utorsion/symbolic_set.hpp"
#include "utorsion/verdict.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace utorsion {

// Digit value rules on a component set: c_n = c, c_n = b_n - k, c_n = floor(b_n/2).
struct ValueRule {
  enum class Kind { Const, BMinusConst, FloorHalfB };
  Kind kind = Kind::Const;
  Int c = 0;

  static ValueRule constant(Int v) {
    if (v < 0) throw std::invalid_argument("digits are nonnegative");
    return {Kind::Const, std::move(v)};
  }
  static ValueRule b_minus(Int k) {
    if (k < 1) throw std::invalid_argument("b minus k needs k >= 1");
    return {Kind::BMinusConst, std::move(k)};
  }
  static ValueRule b_minus_one() { return b_minus(1); }
  static ValueRule floor_half_b() { return {Kind::FloorHalfB, 0}; }

  Int apply(const Int& b) const;
  std::string str() const;
  bool operator==(const ValueRule&) const = default;
};

struct PatternComponent {
  SymbolicSet set;
  ValueRule rule;
};

// Exact partial sum with the tail enclosure [s_n, s_n + 1/u_n]; `exact` is set
// when the tail has a recognized closed form.
struct EvalResult {
  Rat lo, hi;
  std::optional<Rat> exact;
};

struct NormInterval {
  Rat lo, hi;     // enclosure of ||u_k x|| inside [0, 1/2]
  bool resolved;  // enclosure narrower than the requested resolution
  bool exact;     // point value
  Rat frac_lo, frac_hi;  // enclosure of the fractional part {u_k x}
};

// The canonical digit expansion x = sum c_n / u_n with 0 <= c_n < b_n and
// c_n < b_n - 1 infinitely often. Immutable; memo state is synchronized.
class DigitStream : public std::enable_shared_from_this<DigitStream> {
 public:
  using Ptr = std::shared_ptr<const DigitStream>;
  enum class Source { Pattern, FromRational, Modified };

  // Ordered components: the first set containing n decides c_n; zero elsewhere.
  // `overrides` pins individual indices (highest precedence).
  static Ptr pattern(RatioSequence::Ptr ratio, std::vector<PatternComponent> components,
                     std::vector<std::pair<long long, Int>> overrides = {});
  // Greedy expansion of an exact rational in [0, 1).
  static Ptr from_rational(RatioSequence::Ptr ratio, Rat x);
  // Patches take precedence over the base stream.
  static Ptr modified(Ptr base, std::vector<PatternComponent> patches,
                      std::vector<std::pair<long long, Int>> overrides = {});

  Source source() const { return source_; }
  const RatioSequence::Ptr& ratio() const { return ratio_; }
  Ptr base() const { return base_; }  // Modified only, else nullptr
  const std::vector<PatternComponent>& components() const { return components_; }
  const std::vector<std::pair<long long, Int>>& overrides() const { return overrides_; }
  // Self for pattern/modified sources; for rational sources the materialized
  // pattern when the expansion terminates or cycles, else nullptr.
  const DigitStream* pattern_equivalent() const;

  Int digit_at(long long n) const;  // n >= 1

  // Effective disjoint (set, rule) regions with nonzero-capable rules, highest
  // precedence first; indices outside every region carry digit 0.
  std::vector<PatternComponent> regions(long long window) const;
  // Union of the patch regions of a Modified stream (superset of indices where
  // it may disagree with its base).
  SymbolicSet patch_region() const;

  EvalResult eval_with_tail(long long n) const;
  NormInterval circle_norm(long long k, const Rat& resolution, long long step_budget = 512) const;

  std::pair<SymbolicSet, SymbolicSet> supports(long long window) const;
  Ptr flat_truncation(long long window) const;
  std::pair<Ptr, Ptr> atomic_components(long long window) const;
  Verdict is_atomic(long long window) const;

  // Zeroes every digit outside `keep`.
  Ptr masked(const SymbolicSet& keep) const;

  // Closed-form tail sums are available (constant ratio, periodic regions).
  bool exactly_evaluable() const;
  // The scaled tail sum_{n > k} c_n u_k / u_n, i.e. the fractional part of
  // u_k x, when a closed form exists.
  std::optional<Rat> exact_tail(long long k) const;

  std::string str() const;

 private:
  DigitStream() = default;
  void materialize_rational() const;
  Int digit_unlocked(long long n) const;

  Source source_ = Source::Pattern;
  RatioSequence::Ptr ratio_;
  std::vector<PatternComponent> components_;
  std::vector<std::pair<long long, Int>> overrides_;
  Ptr base_;

  // FromRational state (shared so streams stay copyable)
  struct GreedyState {
    Rat x = 0;
    std::mutex mutex;
    std::vector<Int> digits;
    std::vector<Rat> remainders;
    std::optional<Ptr> materialized;  // pattern equivalent, when derivable
  };
  std::shared_ptr<GreedyState> greedy_;
};

// Superset / provable subset of the index set where the two streams disagree.
struct Disagreement {
  SymbolicSet superset;
  SymbolicSet provable_subset;
};

Disagreement disagreement_bounds(const DigitStream& a, const DigitStream& b, long long window);

// Whether {n : c_n(a) != c_n(b)} lies in the ideal. Requires the same ratio
// sequence object.
Verdict digit_equiv(const DigitStream& a, const DigitStream& b, const IdealSpec& ideal,
                    long long window);

}  // namespace utorsion
