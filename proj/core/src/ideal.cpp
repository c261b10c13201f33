#include "utorsion/ideal.hpp"

#include <algorithm>
#include <sstream>

namespace utorsion {

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

Rat WeightRule::at(long long n) const {
  if (n < 1) throw std::domain_error("weights are defined for n >= 1");
  switch (kind) {
    case Kind::Reciprocal:
      return Rat(1, n);
    case Kind::ReciprocalFactorial: {
      Int f = 1;
      for (long long i = 2; i <= n; ++i) f *= i;
      return Rat(1, f);
    }
  }
  return 1;
}

std::string WeightRule::str() const {
  switch (kind) {
    case Kind::Reciprocal:
      return "1/n";
    case Kind::ReciprocalFactorial:
      return "1/n!";
  }
  return "?";
}

WaveStructure::WaveStructure(Rat q_)
    : q(std::move(q_)),
      // w_0 = 1 and w_1 = 2 are adjacent, so they form one maximal block.
      W(SymbolicSet::interval_union(IndexRule::quadratic(1, 4, 5), IndexRule::quadratic(1, 4, 5),
                                    {{1, 2}})),
      Z(SymbolicSet::interval_union(IndexRule::quadratic(1, 1, 1), IndexRule::quadratic(1, 1, 1))),
      // The pair (z_{n+1}), (w_{n+2}): the inequality l_n <= r_n < l_{n+1}-1
      // holds from the start here, while for (z_n), (w_{n+1}) it only holds
      // from n = 1 on. Same sets modulo finitely many points.
      canonical_witness(IndexRule::quadratic(1, 3, 3), IndexRule::quadratic(1, 4, 5),
                        "(Z, W∖{w₀})") {}

long long WaveStructure::block_index(long long m) const {
  if (m < 1) throw std::domain_error("wave weights live on n >= 1");
  // B_k = [k^2+1, (k+1)^2], so k = floor(sqrt(m-1)).
  long long k = isqrt(Int(m - 1)).convert_to<long long>();
  return k;
}

long long WaveStructure::dist_to_peak(long long m) const {
  long long k = block_index(m);
  long long z = k * k + k + 1;
  return m >= z ? m - z : z - m;
}

Rat WaveStructure::gamma(long long m) const {
  return pow_rat(q, static_cast<unsigned long>(dist_to_peak(m)));
}

std::pair<long long, long long> WaveStructure::block(long long n) const {
  return {n * n + 1, (n + 1) * (n + 1)};
}

// ---------------------------------------------------------------------------
// IdealSpec construction
// ---------------------------------------------------------------------------

IdealSpec::Ptr IdealSpec::fin() {
  auto p = std::shared_ptr<IdealSpec>(new IdealSpec());
  p->family_ = IdealFamily::Fin;
  p->name_ = "Fin";
  p->nested_ = TriState::Yes;
  return p;
}

IdealSpec::Ptr IdealSpec::density(Rat alpha) {
  if (alpha <= 0 || alpha > 1) throw std::invalid_argument("density order needs 0 < alpha <= 1");
  auto p = std::shared_ptr<IdealSpec>(new IdealSpec());
  p->family_ = IdealFamily::DensityAlpha;
  p->alpha_ = alpha;
  p->name_ = alpha == 1 ? "I_d" : "I_alpha(" + rat_str(alpha) + ")";
  p->nested_ = TriState::Yes;
  return p;
}

IdealSpec::Ptr IdealSpec::summable(WeightRule rule) {
  auto p = std::shared_ptr<IdealSpec>(new IdealSpec());
  p->family_ = IdealFamily::Summable;
  p->weight_ = rule;
  p->name_ = "I_gamma(" + rule.str() + ")";
  p->proper_ = rule.total_divergent();
  // P-ideal: exhaustive-submeasure fact, declared rather than computed.
  p->p_ideal_ = TriState::Yes;
  // Translation invariance only certified through the consecutive-ratio bound.
  p->translation_invariant_ = rule.kind == WeightRule::Kind::Reciprocal;
  return p;
}

IdealSpec::Ptr IdealSpec::wave(Rat q) {
  if (!(q > Rat(1, 2) && q < 1))
    throw std::invalid_argument("wave ideal requires 1/2 < q < 1");
  auto p = std::shared_ptr<IdealSpec>(new IdealSpec());
  p->family_ = IdealFamily::WaveGamma;
  p->wave_.emplace(q);
  p->name_ = "I_gamma(wave q=" + rat_str(q) + ")";
  p->p_ideal_ = TriState::Yes;
  p->nested_ = TriState::No;
  p->nested_witness_ = p->wave_->canonical_witness;
  return p;
}

Rat IdealSpec::gamma_at(long long n) const {
  if (family_ == IdealFamily::WaveGamma) return wave_->gamma(n);
  if (family_ == IdealFamily::Summable) return weight_.at(n);
  throw std::domain_error("gamma_at needs a summable-type ideal");
}

// ---------------------------------------------------------------------------
// Membership certificates
// ---------------------------------------------------------------------------

namespace {

struct IUShape {
  // lo/hi rules with identical leading coefficient (construction guarantees it).
  IndexRule lo, hi;
  long long lead;       // common a2 (0 for affine)
  long long len_slope;  // hi.a1 - lo.a1 (>= 0)
  long long len0;       // hi.a0 - lo.a0 (block length - 1 at slope 0)
  bool degenerate;      // lo == hi
};

std::optional<IUShape> iu_shape(const SymbolicSet& A) {
  auto v = A.interval_union_view();
  if (!v) return std::nullopt;
  IUShape s;
  s.lo = v->lo;
  s.hi = v->hi;
  if (v->lo.a2 != v->hi.a2) return std::nullopt;  // cannot happen for valid unions
  s.lead = v->lo.a2;
  s.len_slope = v->hi.a1 - v->lo.a1;
  s.len0 = v->hi.a0 - v->lo.a0;
  s.degenerate = v->lo == v->hi;
  return s;
}

Verdict density_certificate(const SymbolicSet& A, const Rat& alpha) {
  if (auto pv = A.periodic_view()) {
    // Infinite eventually-periodic set: |A(n)|/n -> residue density > 0.
    Rat dens(pv->residue_count, pv->modulus);
    if (alpha == 1)
      return Verdict::fails("eventually periodic with positive density " + rat_str(dens));
    return Verdict::fails("eventually periodic: |A(n)|/n^α diverges for α < 1");
  }
  if (auto s = iu_shape(A)) {
    if (s->lead == 0) {
      Rat dens(s->len0 + 1, s->lo.a1);
      if (alpha == 1)
        return Verdict::fails("affine block union with density " + rat_str(dens));
      return Verdict::fails("affine block union: |A(n)|/n^α diverges for α < 1");
    }
    if (s->len_slope > 0) {
      Rat dens(s->len_slope, 2 * s->lead);
      if (alpha == 1)
        return Verdict::fails("growing quadratic blocks with density " + rat_str(dens));
      return Verdict::fails("growing quadratic blocks: |A(n)|/n^α diverges for α < 1");
    }
    // Constant block length L over quadratically spaced blocks: |A(n)| ~ L*sqrt(n/a2).
    long long L = s->len0 + 1;
    if (alpha > Rat(1, 2)) {
      std::ostringstream os;
      os << "quadratically spaced blocks of length " << L
         << ": |A(n)| ≤ L·(√(n/" << s->lead << ")+1)+head, so |A(n)|/n^α → 0";
      return Verdict::holds(os.str());
    }
    if (alpha == Rat(1, 2))
      return Verdict::fails("√n many members below n: |A(n)|/n^(1/2) has a positive limit");
    return Verdict::fails("√n many members below n: |A(n)|/n^α diverges for α < 1/2");
  }
  return Verdict::unknown("no closed-form counting for this set form");
}

Verdict reciprocal_sum_certificate(const SymbolicSet& A) {
  if (A.periodic_view())
    return Verdict::fails("harmonic sum over an eventually periodic set diverges");
  if (auto s = iu_shape(A)) {
    if (s->lead == 0) return Verdict::fails("harmonic sum over affine blocks diverges");
    if (s->len_slope > 0)
      return Verdict::fails("blocks of linearly growing length dominate a harmonic tail");
    return Verdict::holds("quadratically spaced blocks of bounded length give a convergent sum");
  }
  return Verdict::unknown("no closed-form tail bound for this set form");
}

// Eventual distance of the monic quadratic sequence a(n) = n^2 + B n + C to
// the wave peaks: constant when B is odd, linearly growing when B is even.
struct WaveDistance {
  bool constant;
  long long value;  // the constant distance, when constant
};

std::optional<WaveDistance> monic_quadratic_peak_distance(const IndexRule& r) {
  if (r.a2 != 1) return std::nullopt;
  long long B = r.a1, C = r.a0;
  if (B < 0) return std::nullopt;
  if (B % 2 == 1) {
    long long t = (B - 1) / 2;
    // For n >= max(0, t^2+1-C, C-(t+1)^2) the block index of a(n) is n + t.
    long long dist = std::llabs(C - (t * t + t + 1));
    return WaveDistance{true, dist};
  }
  long long t = B / 2;
  if (C >= t * t + 1) {
    // block index n + t; distance |C - t^2 - t - 1 - n| grows linearly
    return WaveDistance{false, 0};
  }
  // block index n + t - 1; distance n + (C - t^2 + t - 1) grows linearly
  return WaveDistance{false, 0};
}

Verdict wave_sequence_certificate(const IndexRule& r, const Rat& q) {
  if (r.a2 == 0) {
    // Arithmetic progression with step p: every large block has a member within
    // ceil(p/2) of its peak, so gamma >= q^ceil(p/2) infinitely often.
    long long p = r.a1;
    std::ostringstream os;
    os << "progression of step " << p << " comes within " << (p + 1) / 2
       << " of infinitely many peaks; terms bounded below";
    return Verdict::fails(os.str());
  }
  if (auto d = monic_quadratic_peak_distance(r)) {
    if (d->constant) {
      std::ostringstream os;
      os << "sequence sits at eventual distance " << d->value
         << " from the peak sequence; γ = q^" << d->value << " infinitely often";
      return Verdict::fails(os.str());
    }
    return Verdict::holds(
        "distance to the peak sequence grows linearly; tail dominated by a geometric series");
  }
  return Verdict::unknown("no exact peak-distance analysis for this sequence rule");
}

Verdict wave_certificate(const SymbolicSet& A, const WaveStructure& wave) {
  if (auto pv = A.periodic_view()) {
    std::ostringstream os;
    os << "progression mod " << pv->modulus
       << " comes within " << (pv->modulus + 1) / 2 << " of infinitely many peaks";
    return Verdict::fails(os.str());
  }
  if (auto s = iu_shape(A)) {
    Verdict lo_v = wave_sequence_certificate(s->lo, wave.q);
    if (s->degenerate) return lo_v;
    Verdict hi_v = wave_sequence_certificate(s->hi, wave.q);
    if (lo_v.fails_val()) return lo_v.note("witnessed by the block-start sequence");
    if (hi_v.fails_val()) return hi_v.note("witnessed by the block-end sequence");
    if (lo_v.holds_val() && hi_v.holds_val() && s->len_slope == 0) {
      return Verdict::holds(
          "blocks of bounded length whose endpoints drift linearly away from the peaks");
    }
    return Verdict::unknown("block interiors not covered by the endpoint analysis");
  }
  return Verdict::unknown("no exact wave-mass analysis for this set form");
}

}  // namespace

Verdict IdealSpec::membership(const SymbolicSet& A, const MembershipBudget& budget) const {
  // Free ideal: every finite set belongs.
  SetCardinality card = A.cardinality();
  if (card == SetCardinality::Finite) return Verdict::holds("finite set; the ideal is free");

  if (!proper_) {
    return Verdict::holds("improper weight: total mass is finite, every set has finite measure");
  }

  switch (family_) {
    case IdealFamily::Fin: {
      if (card == SetCardinality::Cofinite || card == SetCardinality::InfiniteCoinfinite)
        return Verdict::fails("infinite by structural form");
      break;
    }
    case IdealFamily::DensityAlpha: {
      Verdict v = density_certificate(A, alpha_);
      if (!v.unknown_val()) return v;
      break;
    }
    case IdealFamily::Summable: {
      Verdict v = reciprocal_sum_certificate(A);
      if (!v.unknown_val()) return v;
      break;
    }
    case IdealFamily::WaveGamma: {
      if (card == SetCardinality::Cofinite)
        return Verdict::fails("cofinite sets contain all but finitely many peaks");
      Verdict v = wave_certificate(A, *wave_);
      if (!v.unknown_val()) return v;
      break;
    }
  }

  // Structural recursion through lazy algebra nodes. Free ideals ignore
  // finite perturbations, which gives a few extra exact reductions.
  if (auto av = A.algebra_view()) {
    auto card_a = av->a.cardinality();
    auto card_b = av->b.cardinality();
    switch (av->op) {
      case SetOp::Union:
        if (card_b == SetCardinality::Finite) return membership(av->a, budget);
        if (card_a == SetCardinality::Finite) return membership(av->b, budget);
        break;
      case SetOp::Intersect:
        if (card_b == SetCardinality::Cofinite) return membership(av->a, budget);
        if (card_a == SetCardinality::Cofinite) return membership(av->b, budget);
        break;
      case SetOp::Diff:
        if (card_b == SetCardinality::Finite) return membership(av->a, budget);
        break;
    }
    Verdict va = membership(av->a, budget);
    Verdict vb = membership(av->b, budget);
    switch (av->op) {
      case SetOp::Union:
        if (va.holds_val() && vb.holds_val())
          return Verdict::holds("union of two members of the ideal");
        if (va.fails_val())
          return Verdict::fails("contains a non-member: " + va.evidence.rule);
        if (vb.fails_val())
          return Verdict::fails("contains a non-member: " + vb.evidence.rule);
        break;
      case SetOp::Intersect:
        if (va.holds_val())
          return Verdict::holds("subset of a member: " + va.evidence.rule);
        if (vb.holds_val())
          return Verdict::holds("subset of a member: " + vb.evidence.rule);
        break;
      case SetOp::Diff:
        if (va.holds_val())
          return Verdict::holds("subset of a member: " + va.evidence.rule);
        if (va.fails_val() && vb.holds_val())
          return Verdict::fails(
              "removing an ideal set cannot make a non-member small: " + va.evidence.rule);
        break;
    }
  }

  // Sampling evidence only; never a definitive answer.
  Verdict out = Verdict::unknown("no analytic certificate for this set");
  if (!budget.checkpoints.empty()) {
    long long h = A.horizon();
    for (long long cp : budget.checkpoints) {
      if (cp > h) break;
      std::ostringstream os;
      os << "|A(" << cp << ")| = " << A.count_leq(cp);
      out.note(os.str());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trails and probes
// ---------------------------------------------------------------------------

DensityTrail density_alpha(const SymbolicSet& A, const Rat& alpha,
                           const std::vector<long long>& checkpoints) {
  if (alpha <= 0 || alpha > 1) throw std::invalid_argument("density order needs 0 < alpha <= 1");
  DensityTrail trail;
  trail.alpha = alpha;
  for (long long n : checkpoints) {
    if (n < 1) continue;
    if (n > A.horizon()) break;
    Int count = A.count_leq(n);
    // n^alpha for alpha = p/q: exact when n^p is a perfect q-th power, else the
    // integer-root enclosure r < n^(p/q) < r+1.
    unsigned long p = num(alpha).convert_to<unsigned long>();
    unsigned long q = den(alpha).convert_to<unsigned long>();
    Int npow = pow_int(Int(n), p);
    Int root = npow;
    if (q > 1) {
      // integer q-th root by Newton iteration on the isqrt pattern
      Int x = Int(1) << (boost::multiprecision::msb(npow) / q + 1);
      for (;;) {
        Int xq = pow_int(x, q - 1);
        Int y = ((q - 1) * x + npow / xq) / q;
        if (y >= x) break;
        x = y;
      }
      root = x;
    }
    DensityPoint pt;
    pt.checkpoint = n;
    pt.count = count;
    if (pow_int(root, q) == npow) {
      pt.lo = pt.hi = Rat(count, root);
    } else {
      pt.lo = Rat(count, root + 1);
      pt.hi = Rat(count, root);
    }
    trail.points.push_back(std::move(pt));
  }
  Verdict cert = density_certificate(A, alpha);
  if (cert.holds_val()) {
    trail.closed_form_limit = Rat(0);
    trail.note = cert.evidence.rule;
  } else if (cert.fails_val()) {
    trail.note = cert.evidence.rule;
  }
  return trail;
}

Rat submeasure_partial(const IdealSpec& ideal, const SymbolicSet& A, long long N) {
  if (N > A.horizon()) throw beyond_horizon_error("submeasure horizon exceeds set validity");
  Rat sum = 0;
  for (long long n = 1; n <= N; ++n) {
    if (A.member(n)) sum += ideal.gamma_at(n);
  }
  return sum;
}

Verdict translation_invariance_check(const IdealSpec& ideal, long long k_max) {
  switch (ideal.family()) {
    case IdealFamily::Fin:
      return Verdict::holds("finite sets shift to finite sets");
    case IdealFamily::DensityAlpha:
      return Verdict::holds("|(A+k)(n)| and |A(n)| differ by at most |k|");
    case IdealFamily::Summable: {
      if (ideal.weight().kind == WeightRule::Kind::Reciprocal) {
        Verdict v = Verdict::holds("consecutive weight ratios stay within [1/2, 1]");
        for (long long n = 1; n <= std::min<long long>(k_max, 16); ++n) {
          Rat ratio = ideal.gamma_at(n + 1) / ideal.gamma_at(n);
          if (!(ratio >= Rat(1, 2) && ratio <= 2)) {
            return Verdict::fails("ratio bound violated at n=" + std::to_string(n));
          }
          v.note("γ_" + std::to_string(n + 1) + "/γ_" + std::to_string(n) + " = " + rat_str(ratio));
        }
        return v;
      }
      return Verdict::unknown(
          "consecutive weight ratios vanish; the two-sided ratio bound does not apply");
    }
    case IdealFamily::WaveGamma: {
      const auto* w = ideal.wave_structure();
      Verdict v = Verdict::holds("weight ratios stay within [q, 1/q] ⊂ (1/2, 2)");
      for (long long n = 1; n <= std::min<long long>(k_max, 16); ++n) {
        Rat ratio = w->gamma(n + 1) / w->gamma(n);
        if (!(ratio >= w->q && ratio <= 1 / w->q)) {
          return Verdict::fails("wave ratio bound violated at n=" + std::to_string(n));
        }
      }
      return v;
    }
  }
  return Verdict::unknown("unhandled family");
}

Verdict nestedness_probe(const IdealSpec& ideal, const std::vector<NestedPair>& pairs,
                         const MembershipBudget& budget) {
  for (const auto& p : pairs) {
    PairValidation v = validate_left_nested(p, 64);
    if (!v.holds) throw std::invalid_argument("nestedness probe needs left-nested pairs: " + v.detail);
  }
  std::vector<std::string> pair_notes;
  bool any_unknown = false;
  for (const auto& p : pairs) {
    SymbolicSet L = SymbolicSet::interval_union(p.lefts, p.lefts);
    SymbolicSet R = SymbolicSet::interval_union(p.rights, p.rights);
    Verdict vr = ideal.membership(R, budget);
    Verdict vl = ideal.membership(L, budget);
    std::string tag = p.label.empty() ? "(" + p.lefts.str() + ", " + p.rights.str() + ")" : p.label;
    if (vr.holds_val() && vl.fails_val()) {
      Verdict out = Verdict::fails("witness pair with R in the ideal and L outside it");
      out.with_witness(tag);
      out.note("R: " + vr.evidence.rule);
      out.note("L: " + vl.evidence.rule);
      return out;
    }
    any_unknown |= vr.unknown_val() || vl.unknown_val();
    pair_notes.push_back(tag + ": R " + truth_name(vr.value) + ", L " + truth_name(vl.value));
  }
  switch (ideal.family()) {
    case IdealFamily::Fin: {
      Verdict v = Verdict::holds("an infinite R never lies in Fin; the defining implication is vacuous");
      for (auto& n : pair_notes) v.note(n);
      return v;
    }
    case IdealFamily::DensityAlpha: {
      Verdict v = Verdict::holds("|L(l_n)| ≤ |R(l_n)| + 1 transfers zero density from R to L");
      for (auto& n : pair_notes) v.note(n);
      return v;
    }
    default: {
      Verdict v = Verdict::unknown("no analytic nestedness rule; probed pairs show no witness");
      if (any_unknown) v.note("some pair verdicts were Unknown");
      for (auto& n : pair_notes) v.note(n);
      return v;
    }
  }
}

}  // namespace utorsion
