#pragma once

#include "utorsion/rational.hpp"
#include "utorsion/symbolic_set.hpp"
#include "utorsion/verdict.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace utorsion {

enum class IdealFamily { Fin, DensityAlpha, Summable, WaveGamma };
enum class TriState { Yes, No, Undeclared };

// Weight rules for summable ideals I_gamma = {A : sum_{n in A} gamma_n < oo}.
struct WeightRule {
  enum class Kind { Reciprocal, ReciprocalFactorial };
  Kind kind = Kind::Reciprocal;

  Rat at(long long n) const;  // n >= 1
  bool total_divergent() const { return kind == Kind::Reciprocal; }
  std::string str() const;
};

// The wave weight: peaks of height 1 on Z = {n^2+n+1}, decaying geometrically
// (ratio q) towards the block seams W = {n^2+1}; gamma_m = q^dist(m, peak of
// the block containing m).
struct WaveStructure {
  Rat q;
  SymbolicSet W;  // {n^2 + 1}
  SymbolicSet Z;  // {n^2 + n + 1}
  NestedPair canonical_witness;  // the tail of (Z, W minus its first point)

  explicit WaveStructure(Rat q);
  long long block_index(long long m) const;   // k with m in B_k = [w_k, w_{k+1}-1], m >= 1
  long long dist_to_peak(long long m) const;  // |m - z_{block_index(m)}|
  Rat gamma(long long m) const;
  std::pair<long long, long long> block(long long n) const;  // B_n as [lo, hi]
};

struct MembershipBudget {
  long long window = 4096;                 // sampling window for Unknown evidence
  std::vector<long long> checkpoints{};    // optional trail checkpoints
};

// A free ideal of N as a three-valued membership oracle plus declared flags.
class IdealSpec {
 public:
  using Ptr = std::shared_ptr<const IdealSpec>;

  static Ptr fin();
  static Ptr density(Rat alpha);        // I_alpha, 0 < alpha <= 1; alpha = 1 is I_d
  static Ptr summable(WeightRule rule);
  static Ptr wave(Rat q);               // requires 1/2 < q < 1

  IdealFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  const Rat& alpha() const { return alpha_; }
  const WeightRule& weight() const { return weight_; }
  const WaveStructure* wave_structure() const { return wave_ ? &*wave_ : nullptr; }

  bool translation_invariant() const { return translation_invariant_; }
  TriState p_ideal() const { return p_ideal_; }
  TriState nested() const { return nested_; }
  std::optional<NestedPair> nested_witness() const { return nested_witness_; }
  // False when the weight has finite total mass (the "ideal" is all of P(N)).
  bool proper() const { return proper_; }

  Rat gamma_at(long long n) const;  // Summable / WaveGamma families

  Verdict membership(const SymbolicSet& A, const MembershipBudget& budget = {}) const;

 private:
  IdealSpec() = default;

  IdealFamily family_ = IdealFamily::Fin;
  std::string name_;
  Rat alpha_ = 1;
  WeightRule weight_{};
  std::optional<WaveStructure> wave_;
  bool translation_invariant_ = true;
  TriState p_ideal_ = TriState::Yes;
  TriState nested_ = TriState::Undeclared;
  std::optional<NestedPair> nested_witness_;
  bool proper_ = true;
};

// One checkpoint of a density estimate trail: |A(n)| / n^alpha as an exact
// rational enclosure (lo = hi when n^alpha is rational).
struct DensityPoint {
  long long checkpoint;
  Int count;
  Rat lo, hi;
};

struct DensityTrail {
  Rat alpha;
  std::vector<DensityPoint> points;
  std::optional<Rat> closed_form_limit;  // when the structural form gives one
  std::string note;
};

DensityTrail density_alpha(const SymbolicSet& A, const Rat& alpha,
                           const std::vector<long long>& checkpoints);

// Sum of gamma over A(N), exact.
Rat submeasure_partial(const IdealSpec& ideal, const SymbolicSet& A, long long N);

Verdict translation_invariance_check(const IdealSpec& ideal, long long k_max);

// Fails (with the witness pair) when some validated pair has R in the ideal
// but L outside it; Holds only via an analytic family rule.
Verdict nestedness_probe(const IdealSpec& ideal, const std::vector<NestedPair>& pairs,
                         const MembershipBudget& budget = {});

}  // namespace utorsion
