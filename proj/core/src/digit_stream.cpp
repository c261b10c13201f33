#include "utorsion/digit_stream.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace utorsion {

namespace {
constexpr long long kSpotCheckWindow = 64;
constexpr long long kCycleCap = 4096;
constexpr long long kPeriodLcmCap = 4096;

SymbolicSet positive_indices() { return SymbolicSet::tail_from(1); }
}  // namespace

// ---------------------------------------------------------------------------
// ValueRule
// ---------------------------------------------------------------------------

Int ValueRule::apply(const Int& b) const {
  switch (kind) {
    case Kind::Const:
      if (c >= b) throw std::domain_error("digit rule produced c_n >= b_n");
      return c;
    case Kind::BMinusConst:
      if (b < this->c) throw std::domain_error("digit rule produced a negative digit");
      return b - this->c;
    case Kind::FloorHalfB:
      return b / 2;
  }
  return 0;
}

std::string ValueRule::str() const {
  switch (kind) {
    case Kind::Const:
      return c.str();
    case Kind::BMinusConst:
      return c == 1 ? "b-1" : "b-" + c.str();
    case Kind::FloorHalfB:
      return "⌊b/2⌋";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Construction and validity
// ---------------------------------------------------------------------------

namespace {

bool provably_infinite_set(const SymbolicSet& s) {
  auto c = s.cardinality();
  return c == SetCardinality::Cofinite || c == SetCardinality::InfiniteCoinfinite;
}

// Enforces "c_n < b_n - 1 for infinitely many n" where the structural form
// allows a proof; forms with unknown tails pass as declared-but-unverified.
void check_representation_validity(const RatioSequence::Ptr& ratio,
                                   const std::vector<PatternComponent>& components) {
  SymbolicSet coverage = SymbolicSet::empty();
  for (const auto& comp : components) coverage = coverage.unite(comp.set);
  SymbolicSet zeros = positive_indices().diff(coverage);
  if (provably_infinite_set(zeros)) return;  // infinitely many zero digits
  if (zeros.cardinality() == SetCardinality::Unknown) return;  // declared, not verified

  auto region_witnesses = [&](const PatternComponent& comp) {
    SymbolicSet region = comp.set.intersect(positive_indices());
    if (!provably_infinite_set(region)) return false;
    auto cv = ratio->constant_value();
    auto dr = ratio->divergent_region();
    switch (comp.rule.kind) {
      case ValueRule::Kind::Const:
        if (cv && comp.rule.c < *cv - 1) return true;
        if (dr && provably_infinite_set(region.intersect(*dr))) return true;
        return false;
      case ValueRule::Kind::BMinusConst:
        return comp.rule.c >= 2;
      case ValueRule::Kind::FloorHalfB:
        if (cv && *cv >= 3) return true;
        if (dr && provably_infinite_set(region.intersect(*dr))) return true;
        return false;
    }
    return false;
  };
  for (const auto& comp : components) {
    if (region_witnesses(comp)) return;
  }
  throw std::invalid_argument(
      "representation needs c_n < b_n - 1 infinitely often; no component provides it");
}

}  // namespace

DigitStream::Ptr DigitStream::pattern(RatioSequence::Ptr ratio,
                                      std::vector<PatternComponent> components,
                                      std::vector<std::pair<long long, Int>> overrides) {
  if (!ratio) throw std::invalid_argument("pattern stream needs a ratio sequence");
  for (auto& [n, c] : overrides) {
    if (n < 1) throw std::invalid_argument("digit indices start at 1");
    if (c < 0 || c >= ratio->ratio_at(n)) throw std::invalid_argument("override digit out of range");
  }
  std::sort(overrides.begin(), overrides.end());
  check_representation_validity(ratio, components);
  auto s = std::shared_ptr<DigitStream>(new DigitStream());
  s->source_ = Source::Pattern;
  s->ratio_ = std::move(ratio);
  s->components_ = std::move(components);
  s->overrides_ = std::move(overrides);
  // Fail fast on rule/ratio mismatches near the origin.
  for (long long n = 1; n <= kSpotCheckWindow; ++n) {
    try {
      s->digit_at(n);
    } catch (const beyond_horizon_error&) {
      break;
    }
  }
  return s;
}

DigitStream::Ptr DigitStream::from_rational(RatioSequence::Ptr ratio, Rat x) {
  if (!ratio) throw std::invalid_argument("stream needs a ratio sequence");
  if (x < 0 || x >= 1) throw std::invalid_argument("expansions live on [0, 1)");
  auto s = std::shared_ptr<DigitStream>(new DigitStream());
  s->source_ = Source::FromRational;
  s->ratio_ = std::move(ratio);
  s->greedy_ = std::make_shared<GreedyState>();
  s->greedy_->x = std::move(x);
  s->greedy_->remainders.push_back(s->greedy_->x);
  return s;
}

DigitStream::Ptr DigitStream::modified(Ptr base, std::vector<PatternComponent> patches,
                                       std::vector<std::pair<long long, Int>> overrides) {
  if (!base) throw std::invalid_argument("modified stream needs a base");
  for (auto& [n, c] : overrides) {
    if (n < 1) throw std::invalid_argument("digit indices start at 1");
    if (c < 0 || c >= base->ratio()->ratio_at(n))
      throw std::invalid_argument("override digit out of range");
  }
  std::sort(overrides.begin(), overrides.end());
  auto s = std::shared_ptr<DigitStream>(new DigitStream());
  s->source_ = Source::Modified;
  s->ratio_ = base->ratio();
  s->base_ = std::move(base);
  s->components_ = std::move(patches);
  s->overrides_ = std::move(overrides);
  return s;
}

DigitStream::Ptr DigitStream::masked(const SymbolicSet& keep) const {
  return modified(shared_from_this(), {{keep.complement(), ValueRule::constant(0)}});
}

// ---------------------------------------------------------------------------
// Digits
// ---------------------------------------------------------------------------

Int DigitStream::digit_unlocked(long long n) const {
  GreedyState& st = *greedy_;
  while (static_cast<long long>(st.digits.size()) < n) {
    long long i = static_cast<long long>(st.digits.size()) + 1;
    Int b = ratio_->ratio_at(i);
    Rat scaled = st.remainders.back() * b;
    Int c = floor_rat(scaled);
    st.digits.push_back(c);
    st.remainders.push_back(scaled - c);
  }
  return st.digits[n - 1];
}

Int DigitStream::digit_at(long long n) const {
  if (n < 1) throw std::domain_error("digits are indexed from 1");
  switch (source_) {
    case Source::FromRational: {
      std::lock_guard<std::mutex> lock(greedy_->mutex);
      return digit_unlocked(n);
    }
    case Source::Pattern:
    case Source::Modified: {
      auto it = std::lower_bound(overrides_.begin(), overrides_.end(),
                                 std::make_pair(n, Int(0)),
                                 [](const auto& a, const auto& b) { return a.first < b.first; });
      if (it != overrides_.end() && it->first == n) return it->second;
      for (const auto& comp : components_) {
        if (comp.set.member(n)) return comp.rule.apply(ratio_->ratio_at(n));
      }
      if (source_ == Source::Modified) return base_->digit_at(n);
      return 0;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Rational materialization (termination / cycle detection)
// ---------------------------------------------------------------------------

void DigitStream::materialize_rational() const {
  GreedyState& st = *greedy_;
  std::lock_guard<std::mutex> lock(st.mutex);
  if (st.materialized.has_value()) return;
  auto period = ratio_->eventual_period();
  std::map<std::pair<Rat, long long>, long long> seen;
  long long cycle_from = -1, cycle_len = 0;
  long long terminated_at = -1;
  for (long long i = 0; i <= kCycleCap; ++i) {
    digit_unlocked(i + 1);  // ensures remainders up to index i+1 exist
    const Rat& r = st.remainders[i];
    if (r == 0) {
      terminated_at = i;
      break;
    }
    if (period && i >= period->second) {
      auto key = std::make_pair(r, i % period->first);
      auto [it, inserted] = seen.emplace(key, i);
      if (!inserted) {
        cycle_from = it->second;
        cycle_len = i - it->second;
        break;
      }
    }
  }
  if (terminated_at < 0 && cycle_from < 0) {
    st.materialized = Ptr();  // attempted; no closed form within the cap
    return;
  }
  std::vector<std::pair<long long, Int>> overrides;
  std::vector<PatternComponent> components;
  long long prefix_end = terminated_at >= 0 ? terminated_at : cycle_from;
  for (long long n = 1; n <= prefix_end; ++n) {
    Int c = st.digits[n - 1];
    if (c != 0) overrides.emplace_back(n, c);
  }
  if (cycle_from >= 0) {
    // digits n > cycle_from repeat with period cycle_len
    std::map<Int, std::vector<long long>> classes;
    for (long long t = 1; t <= cycle_len; ++t) {
      Int c = digit_unlocked(cycle_from + t);
      if (c != 0) classes[c].push_back((cycle_from + t) % cycle_len);
    }
    for (auto& [value, residues] : classes) {
      components.push_back({SymbolicSet::residue(cycle_len, residues)
                                .intersect(SymbolicSet::tail_from(cycle_from + 1)),
                            ValueRule::constant(value)});
    }
  }
  auto pat = std::shared_ptr<DigitStream>(new DigitStream());
  pat->source_ = Source::Pattern;
  pat->ratio_ = ratio_;
  pat->components_ = std::move(components);
  pat->overrides_ = std::move(overrides);
  st.materialized = Ptr(pat);
}

const DigitStream* DigitStream::pattern_equivalent() const {
  if (source_ != Source::FromRational) return this;
  materialize_rational();
  std::lock_guard<std::mutex> lock(greedy_->mutex);
  if (*greedy_->materialized) return greedy_->materialized->get();
  return nullptr;
}

// ---------------------------------------------------------------------------
// Regions and supports
// ---------------------------------------------------------------------------

namespace {

struct Decomp {
  std::vector<PatternComponent> regions;     // disjoint, override points excluded
  std::vector<long long> override_points;    // pointwise-pinned indices
  bool window_limited = false;               // regions only valid to the window
};

Decomp decompose(const DigitStream& stream, long long window);

Decomp decompose_pattern_like(const DigitStream& stream, long long window) {
  Decomp out;
  std::vector<PatternComponent> raw;
  if (stream.source() == DigitStream::Source::Modified) {
    Decomp base = decompose(*stream.base(), window);
    out.window_limited = base.window_limited;
    out.override_points = base.override_points;
    SymbolicSet patch_union = SymbolicSet::empty();
    for (const auto& comp : stream.components()) {
      raw.push_back(comp);
      patch_union = patch_union.unite(comp.set);
    }
    for (const auto& comp : base.regions) {
      raw.push_back({comp.set.diff(patch_union), comp.rule});
    }
  } else {
    raw = stream.components();
  }
  for (const auto& [p, c] : stream.overrides()) out.override_points.push_back(p);
  std::sort(out.override_points.begin(), out.override_points.end());
  out.override_points.erase(std::unique(out.override_points.begin(), out.override_points.end()),
                            out.override_points.end());
  SymbolicSet overridden = SymbolicSet::finite(out.override_points);
  SymbolicSet used = overridden;
  for (const auto& comp : raw) {
    SymbolicSet eff = comp.set.intersect(positive_indices()).diff(used);
    out.regions.push_back({eff, comp.rule});
    used = used.unite(comp.set);
  }
  return out;
}

Decomp decompose(const DigitStream& stream, long long window) {
  if (stream.source() != DigitStream::Source::FromRational)
    return decompose_pattern_like(stream, window);
  if (const DigitStream* pv = stream.pattern_equivalent())
    return decompose_pattern_like(*pv, window);
  // Raw rational expansion: enumerate digits up to the window.
  Decomp out;
  out.window_limited = true;
  std::map<Int, std::vector<long long>> classes;
  for (long long n = 1; n <= window; ++n) {
    Int c = stream.digit_at(n);
    if (c != 0) classes[c].push_back(n);
  }
  for (auto& [value, indices] : classes) {
    out.regions.push_back(
        {SymbolicSet::prefix_only(indices, window), ValueRule::constant(value)});
  }
  return out;
}

}  // namespace

std::vector<PatternComponent> DigitStream::regions(long long window) const {
  return decompose(*this, window).regions;
}

SymbolicSet DigitStream::patch_region() const {
  SymbolicSet out = SymbolicSet::empty();
  if (source_ != Source::Modified) return out;
  for (const auto& comp : components_) out = out.unite(comp.set);
  for (const auto& [n, c] : overrides_) out = out.unite(SymbolicSet::finite({n}));
  return out.intersect(positive_indices());
}

std::pair<SymbolicSet, SymbolicSet> DigitStream::supports(long long window) const {
  if (window < 1) throw std::invalid_argument("supports need a window >= 1");
  Decomp decomp = decompose(*this, window);
  SymbolicSet support = SymbolicSet::empty();
  SymbolicSet bsupport = SymbolicSet::empty();
  for (const auto& [region, rule] : decomp.regions) {
    switch (rule.kind) {
      case ValueRule::Kind::Const: {
        if (rule.c != 0) support = support.unite(region);
        SymbolicSet eq = ratio_->where_ratio_equals(rule.c + 1);
        bsupport = bsupport.unite(region.intersect(eq));
        break;
      }
      case ValueRule::Kind::BMinusConst: {
        // zero exactly where b_n = k
        SymbolicSet zero = ratio_->where_ratio_equals(rule.c);
        support = support.unite(region.diff(zero));
        if (rule.c == 1) bsupport = bsupport.unite(region);
        break;
      }
      case ValueRule::Kind::FloorHalfB: {
        support = support.unite(region);  // floor(b/2) >= 1 for b >= 2
        bsupport = bsupport.unite(region.intersect(ratio_->where_ratio_equals(2)));
        break;
      }
    }
  }
  if (!decomp.override_points.empty()) {
    std::vector<long long> in_support, in_bsupport;
    for (long long p : decomp.override_points) {
      Int c = digit_at(p);
      if (c != 0) in_support.push_back(p);
      if (c == ratio_->ratio_at(p) - 1) in_bsupport.push_back(p);
    }
    support = support.unite(SymbolicSet::finite(in_support));
    bsupport = bsupport.unite(SymbolicSet::finite(in_bsupport));
  }
  return {support, bsupport};
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

EvalResult DigitStream::eval_with_tail(long long n) const {
  if (n < 1) throw std::invalid_argument("evaluation needs n >= 1");
  Int numerator = 0;
  Int denom = 1;
  for (long long i = 1; i <= n; ++i) {
    Int b = ratio_->ratio_at(i);
    numerator = numerator * b + digit_at(i);
    denom *= b;
  }
  EvalResult out;
  out.lo = Rat(numerator, denom);
  out.hi = Rat(numerator + 1, denom);
  // Rational sources carry their exact value by construction.
  if (source_ == Source::FromRational) {
    out.exact = greedy_->x;
    return out;
  }
  if (auto tail = exact_tail(n)) {
    // exact_tail is the scaled fractional tail {u_n x}; rescale to absolute
    out.exact = out.lo + *tail / Rat(denom);
    return out;
  }
  // Window-limited support forms never qualify: emptiness there is only
  // "empty as far as inspected".
  try {
    auto [support, bsupport] = supports(std::max(n, 1LL));
    (void)bsupport;
    SymbolicSet tail_support = support.intersect(SymbolicSet::tail_from(n + 1));
    if (tail_support.horizon() == kUnlimitedHorizon && tail_support.is_empty()) out.exact = out.lo;
  } catch (const beyond_horizon_error&) {
  }
  return out;
}

bool DigitStream::exactly_evaluable() const {
  if (!ratio_->constant_value()) return false;
  const DigitStream* pv = pattern_equivalent();
  if (!pv) return false;
  Decomp decomp = decompose(*pv, 1);
  long long lcm = 1;
  for (const auto& [region, rule] : decomp.regions) {
    auto view = region.periodic_view();
    if (!view) {
      if (!region.is_empty()) return false;
      continue;
    }
    lcm = lcm / std::gcd(lcm, view->modulus) * view->modulus;
    if (lcm > kPeriodLcmCap) return false;
  }
  return true;
}

std::optional<Rat> DigitStream::exact_tail(long long k) const {
  if (!exactly_evaluable()) return std::nullopt;
  const DigitStream* pv = pattern_equivalent();
  Decomp decomp = decompose(*pv, 1);
  long long b = *ratio_->constant_value();
  long long period = 1;
  long long align = k + 1;
  for (const auto& [region, rule] : decomp.regions) {
    auto view = region.periodic_view();
    if (!view) continue;
    period = period / std::gcd(period, view->modulus) * view->modulus;
    align = std::max(align, static_cast<long long>(view->prefix->size()));
  }
  for (long long p : decomp.override_points) align = std::max(align, p + 1);
  Rat tail = 0;
  for (long long n = k + 1; n < align; ++n) {
    Int c = pv->digit_at(n);
    if (c != 0) tail += Rat(c, pow_int(b, static_cast<unsigned long>(n - k)));
  }
  Int bp = pow_int(b, static_cast<unsigned long>(period));
  Rat geometric_factor(bp, bp - 1);
  for (long long t = 0; t < period; ++t) {
    long long n = align + t;
    Int c = pv->digit_at(n);
    if (c == 0) continue;
    tail += Rat(c, pow_int(b, static_cast<unsigned long>(n - k))) * geometric_factor;
  }
  if (tail >= 1)
    throw std::logic_error("tail sum reached 1; representation invariant violated");
  return tail;
}

namespace {

// Folds a fractional-part enclosure into a norm enclosure min(t, 1-t).
void fold_norm(const Rat& flo, const Rat& fhi, NormInterval& out) {
  Rat half(1, 2);
  out.frac_lo = flo;
  out.frac_hi = fhi;
  if (fhi <= half) {
    out.lo = flo;
    out.hi = fhi;
  } else if (flo >= half) {
    out.lo = Rat(1 - fhi);
    out.hi = Rat(1 - flo);
  } else {
    out.lo = std::min(flo, Rat(1 - fhi));
    out.hi = half;
  }
}

}  // namespace

NormInterval DigitStream::circle_norm(long long k, const Rat& resolution,
                                      long long step_budget) const {
  if (k < 0) throw std::invalid_argument("norm index starts at 0");
  if (resolution <= 0) throw std::invalid_argument("resolution must be positive");
  NormInterval out{};
  if (auto tail = exact_tail(k)) {
    // {u_k x} equals the tail sum exactly
    fold_norm(*tail, *tail, out);
    out.resolved = true;
    out.exact = true;
    return out;
  }
  Int numerator = 0;
  Int denom = 1;
  long long m = k;
  long long steps = 0;
  bool truncated = false;
  while (Rat(1, denom) >= resolution && steps < step_budget) {
    ++m;
    ++steps;
    Int b = ratio_->ratio_at(m);
    Int c;
    try {
      c = digit_at(m);
    } catch (const beyond_horizon_error&) {
      truncated = true;
      break;
    }
    numerator = numerator * b + c;
    denom *= b;
  }
  Rat flo(numerator, denom);
  Rat fhi(numerator + 1, denom);
  fold_norm(flo, std::min(fhi, Rat(1)), out);
  out.resolved = !truncated && (fhi - flo) < resolution;
  out.exact = false;
  return out;
}

// ---------------------------------------------------------------------------
// Flat truncation, atomic structure
// ---------------------------------------------------------------------------

DigitStream::Ptr DigitStream::flat_truncation(long long window) const {
  auto [support, bsupport] = supports(window);
  (void)support;
  std::vector<PatternComponent> comps;
  if (!bsupport.is_empty()) comps.push_back({bsupport, ValueRule::b_minus_one()});
  return pattern(ratio_, std::move(comps));
}

std::pair<DigitStream::Ptr, DigitStream::Ptr> DigitStream::atomic_components(
    long long window) const {
  auto [support, bsupport] = supports(window);
  SetCardinality sc = support.cardinality();
  if (sc == SetCardinality::Finite || sc == SetCardinality::Cofinite)
    throw std::domain_error("atomic components need a support that is neither finite nor cofinite");
  SetCardinality bc = bsupport.cardinality();
  if (bc == SetCardinality::Finite)
    throw std::domain_error("finite b-support: atomic components are undefined");
  if (bc != SetCardinality::InfiniteCoinfinite)
    throw std::domain_error("b-support cardinality is not established; no atomic decomposition");
  Boundaries bd = boundaries(bsupport);
  if (bd.left.member(1))
    throw std::domain_error("a block starting at index 1 leaves no room for the left component");
  SymbolicSet left_support = bd.left.shift(-1);
  SymbolicSet right_support = bd.right;
  Ptr left = pattern(ratio_, {{left_support, ValueRule::constant(1)}});
  Ptr right = pattern(ratio_, {{right_support, ValueRule::constant(1)}});
  return {left, right};
}

Verdict DigitStream::is_atomic(long long window) const {
  // Window scan first: violations are definitive.
  long long scan = window;
  bool horizon_cut = false;
  bool prev_in_support = false;
  for (long long n = 1; n <= scan; ++n) {
    Int c;
    try {
      c = digit_at(n);
    } catch (const beyond_horizon_error&) {
      horizon_cut = true;
      break;
    }
    if (c != 0) {
      if (c != 1)
        return Verdict::fails("coefficient " + c.str() + " ≠ 1 at n=" + std::to_string(n));
      if (prev_in_support)
        return Verdict::fails("consecutive support at n=" + std::to_string(n - 1) + "," +
                              std::to_string(n));
      prev_in_support = true;
    } else {
      prev_in_support = false;
    }
  }
  // Analytic certification.
  auto [support, bsupport] = supports(window);
  (void)bsupport;
  bool spacing_proved = false;
  SymbolicSet consecutive = support.intersect(support.shift(1));
  if (consecutive.is_empty()) spacing_proved = true;
  if (!spacing_proved) {
    if (auto iu = support.interval_union_view()) {
      bool head_degenerate = true;
      for (auto& [a, b] : *iu->head) head_degenerate &= a == b;
      spacing_proved = head_degenerate && iu->lo == iu->hi;
    }
  }
  bool values_proved = true;
  Decomp decomp = decompose(*this, window);
  for (const auto& [region, rule] : decomp.regions) {
    if (region.is_empty()) continue;
    switch (rule.kind) {
      case ValueRule::Kind::Const:
        values_proved &= rule.c == 0 || rule.c == 1;
        break;
      case ValueRule::Kind::BMinusConst: {
        SymbolicSet ok = ratio_->where_ratio_equals(rule.c + 1);
        values_proved &= region.diff(ok).is_empty();
        break;
      }
      case ValueRule::Kind::FloorHalfB: {
        SymbolicSet ok = ratio_->where_ratio_equals(2).unite(ratio_->where_ratio_equals(3));
        values_proved &= region.diff(ok).is_empty();
        break;
      }
    }
  }
  if (decomp.window_limited || horizon_cut) {
    return Verdict::unknown("window clean but the tail is not analytically certified");
  }
  if (spacing_proved && values_proved)
    return Verdict::holds("all coefficients equal 1 on a set with no two consecutive points");
  return Verdict::unknown("window clean but the tail is not analytically certified");
}

std::string DigitStream::str() const {
  std::ostringstream os;
  switch (source_) {
    case Source::FromRational:
      os << "greedy(" << rat_str(greedy_->x) << ")";
      break;
    case Source::Pattern: {
      os << "pattern[";
      for (std::size_t i = 0; i < components_.size(); ++i) {
        os << (i ? "; " : "") << components_[i].rule.str() << " on " << components_[i].set.str();
      }
      if (!overrides_.empty()) os << (components_.empty() ? "" : "; ") << overrides_.size()
                                  << " pinned digits";
      os << "]";
      break;
    }
    case Source::Modified:
      os << "modified(" << base_->str() << ")";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Disagreement analysis
// ---------------------------------------------------------------------------

namespace {

// The set where the two rules produce the same digit (exact for the closed
// ratio kinds; prefix-limited for opaque ones).
SymbolicSet rules_agree_region(const ValueRule& ra, const ValueRule& rb,
                               const RatioSequence& ratio) {
  using K = ValueRule::Kind;
  if (ra == rb) return SymbolicSet::naturals();
  if (ra.kind == K::Const && rb.kind == K::Const)
    return ra.c == rb.c ? SymbolicSet::naturals() : SymbolicSet::empty();
  if (ra.kind == K::BMinusConst && rb.kind == K::BMinusConst)
    return ra.c == rb.c ? SymbolicSet::naturals() : SymbolicSet::empty();
  if (ra.kind == K::Const && rb.kind == K::BMinusConst)
    return ratio.where_ratio_equals(ra.c + rb.c);
  if (ra.kind == K::BMinusConst && rb.kind == K::Const)
    return ratio.where_ratio_equals(rb.c + ra.c);
  if (ra.kind == K::FloorHalfB && rb.kind == K::Const)
    return ratio.where_ratio_equals(2 * rb.c).unite(ratio.where_ratio_equals(2 * rb.c + 1));
  if (ra.kind == K::Const && rb.kind == K::FloorHalfB)
    return rules_agree_region(rb, ra, ratio);
  if (ra.kind == K::FloorHalfB && rb.kind == K::BMinusConst)
    return ratio.where_ratio_equals(2 * rb.c).unite(ratio.where_ratio_equals(2 * rb.c - 1));
  if (ra.kind == K::BMinusConst && rb.kind == K::FloorHalfB)
    return rules_agree_region(rb, ra, ratio);
  return SymbolicSet::empty();
}

std::vector<PatternComponent> full_cover(const DigitStream& s, long long window,
                                         std::vector<long long>* overrides) {
  Decomp d = decompose(s, window);
  *overrides = d.override_points;
  std::vector<PatternComponent> out = d.regions;
  SymbolicSet coverage = SymbolicSet::finite(d.override_points);
  for (const auto& comp : d.regions) coverage = coverage.unite(comp.set);
  SymbolicSet zero_region = positive_indices().diff(coverage);
  out.push_back({zero_region, ValueRule::constant(0)});
  return out;
}

}  // namespace

Disagreement disagreement_bounds(const DigitStream& a, const DigitStream& b, long long window) {
  if (&a == &b) return {SymbolicSet::empty(), SymbolicSet::empty()};
  std::vector<long long> pa, pb;
  std::vector<PatternComponent> ca = full_cover(a, window, &pa);
  std::vector<PatternComponent> cb = full_cover(b, window, &pb);
  SymbolicSet differ = SymbolicSet::empty();
  for (const auto& [ra_set, ra_rule] : ca) {
    for (const auto& [rb_set, rb_rule] : cb) {
      SymbolicSet region = ra_set.intersect(rb_set);
      if (region.is_empty()) continue;
      SymbolicSet agree = rules_agree_region(ra_rule, rb_rule, *a.ratio());
      differ = differ.unite(region.diff(agree));
    }
  }
  // Pointwise-pinned indices are decided exactly.
  std::vector<long long> points = pa;
  points.insert(points.end(), pb.begin(), pb.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<long long> differ_points;
  for (long long p : points) {
    if (a.digit_at(p) != b.digit_at(p)) differ_points.push_back(p);
  }
  SymbolicSet point_set = SymbolicSet::finite(points);
  differ = differ.diff(point_set).unite(SymbolicSet::finite(differ_points));
  return {differ, differ};
}

Verdict digit_equiv(const DigitStream& a, const DigitStream& b, const IdealSpec& ideal,
                    long long window) {
  if (a.ratio().get() != b.ratio().get())
    throw std::invalid_argument("digit equivalence needs a common ratio sequence");
  Disagreement d = disagreement_bounds(a, b, window);
  Verdict sup = ideal.membership(d.superset);
  if (sup.holds_val()) {
    Verdict v = Verdict::holds("disagreement set lies in the ideal: " + sup.evidence.rule);
    return v;
  }
  Verdict sub = ideal.membership(d.provable_subset);
  if (sub.fails_val()) {
    Verdict v = Verdict::fails("disagreement set provably outside the ideal: " + sub.evidence.rule);
    return v;
  }
  return Verdict::unknown("disagreement set membership undetermined")
      .note("superset: " + d.superset.str());
}

}  // namespace utorsion
