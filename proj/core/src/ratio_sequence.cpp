#include "utorsion/ratio_sequence.hpp"

#include <algorithm>
#include <sstream>

namespace utorsion {

// ---------------------------------------------------------------------------
// RatioRule
// ---------------------------------------------------------------------------

Int RatioRule::at(long long n) const {
  switch (kind) {
    case Kind::Const:
      return c;
    case Kind::NPlusOne:
      return n + 1;
    case Kind::IdentityN:
      if (n < 2) throw std::domain_error("b_n = n needs n >= 2");
      return n;
    case Kind::PowTwo:
      return pow_int(2, static_cast<unsigned long>(n));
  }
  return 2;
}

SymbolicSet RatioRule::where_equals(const Int& v) const {
  switch (kind) {
    case Kind::Const:
      return v == c ? SymbolicSet::tail_from(1) : SymbolicSet::empty();
    case Kind::NPlusOne: {
      if (v >= 2 && v <= Int(1) << 40) return SymbolicSet::finite({v.convert_to<long long>() - 1});
      return SymbolicSet::empty();
    }
    case Kind::IdentityN: {
      if (v >= 2 && v <= Int(1) << 40) return SymbolicSet::finite({v.convert_to<long long>()});
      return SymbolicSet::empty();
    }
    case Kind::PowTwo: {
      if (v < 2) return SymbolicSet::empty();
      unsigned j = boost::multiprecision::msb(v);
      if (pow_int(2, j) != v || j < 1) return SymbolicSet::empty();
      return SymbolicSet::finite({static_cast<long long>(j)});
    }
  }
  return SymbolicSet::empty();
}

std::string RatioRule::str() const {
  switch (kind) {
    case Kind::Const:
      return std::to_string(c);
    case Kind::NPlusOne:
      return "n+1";
    case Kind::IdentityN:
      return "n";
    case Kind::PowTwo:
      return "2^n";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// RatioSequence
// ---------------------------------------------------------------------------

RatioSequence::Ptr RatioSequence::constant(long long b) {
  if (b < 2) throw std::invalid_argument("arithmetic sequences need b_n >= 2");
  auto r = std::shared_ptr<RatioSequence>(new RatioSequence());
  r->kind_ = Kind::Constant;
  r->on_ = RatioRule::constant(b);
  return r;
}

RatioSequence::Ptr RatioSequence::affine() {
  auto r = std::shared_ptr<RatioSequence>(new RatioSequence());
  r->kind_ = Kind::Affine;
  r->on_ = RatioRule::n_plus_one();
  return r;
}

RatioSequence::Ptr RatioSequence::piecewise(SymbolicSet on_set, RatioRule on, RatioRule off) {
  auto check_valid = [](const RatioRule& rule, const SymbolicSet& region) {
    if (rule.kind == RatioRule::Kind::IdentityN && region.member(1))
      throw std::invalid_argument("b_n = n is below 2 at n = 1");
  };
  check_valid(on, on_set);
  check_valid(off, on_set.complement());
  auto r = std::shared_ptr<RatioSequence>(new RatioSequence());
  r->kind_ = Kind::Piecewise;
  r->on_set_ = std::move(on_set);
  r->on_ = on;
  r->off_ = off;
  return r;
}

RatioSequence::Ptr RatioSequence::explicit_prefix(std::vector<long long> prefix, RatioRule tail) {
  for (long long b : prefix)
    if (b < 2) throw std::invalid_argument("arithmetic sequences need b_n >= 2");
  if (tail.kind == RatioRule::Kind::IdentityN && prefix.size() < 1)
    throw std::invalid_argument("b_n = n is below 2 at n = 1");
  auto r = std::shared_ptr<RatioSequence>(new RatioSequence());
  r->kind_ = Kind::ExplicitPrefix;
  r->prefix_ = std::move(prefix);
  r->on_ = tail;
  return r;
}

RatioSequence::Ptr RatioSequence::opaque(std::function<long long(long long)> fn) {
  auto r = std::shared_ptr<RatioSequence>(new RatioSequence());
  r->kind_ = Kind::Opaque;
  r->fn_ = std::move(fn);
  return r;
}

Int RatioSequence::ratio_at(long long n) const {
  if (n < 1) throw std::domain_error("b_n is defined for n >= 1");
  switch (kind_) {
    case Kind::Constant:
    case Kind::Affine:
      return on_.at(n);
    case Kind::Piecewise:
      return on_set_.member(n) ? on_.at(n) : off_.at(n);
    case Kind::ExplicitPrefix:
      if (n <= static_cast<long long>(prefix_.size())) return prefix_[n - 1];
      return on_.at(n);
    case Kind::Opaque: {
      long long b = fn_(n);
      if (b < 2) throw std::domain_error("opaque ratio produced b_n < 2");
      return b;
    }
  }
  return 2;
}

Int RatioSequence::scale_at(long long n) const {
  if (n < 0) throw std::domain_error("u_n is defined for n >= 0");
  std::lock_guard<std::mutex> lock(memo_mutex_);
  if (u_memo_.empty()) u_memo_.push_back(1);
  while (static_cast<long long>(u_memo_.size()) <= n) {
    long long next = static_cast<long long>(u_memo_.size());
    u_memo_.push_back(u_memo_.back() * ratio_at(next));
  }
  return u_memo_[n];
}

std::optional<std::pair<SymbolicSet, long long>> RatioSequence::bounded_region() const {
  SymbolicSet indices = SymbolicSet::tail_from(1);
  switch (kind_) {
    case Kind::Constant:
      return std::make_pair(indices, on_.c);
    case Kind::Affine:
      return std::make_pair(SymbolicSet::empty(), 0LL);
    case Kind::Piecewise: {
      bool on_const = !on_.divergent(), off_const = !off_.divergent();
      if (on_const && off_const)
        return std::make_pair(indices, std::max(on_.c, off_.c));
      if (on_const) return std::make_pair(on_set_.intersect(indices), on_.c);
      if (off_const) return std::make_pair(on_set_.complement().intersect(indices), off_.c);
      return std::make_pair(SymbolicSet::empty(), 0LL);
    }
    case Kind::ExplicitPrefix: {
      if (!on_.divergent()) {
        long long c = on_.c;
        for (long long b : prefix_) c = std::max(c, b);
        return std::make_pair(indices, c);
      }
      return std::make_pair(SymbolicSet::empty(), 0LL);
    }
    case Kind::Opaque:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<SymbolicSet> RatioSequence::divergent_region() const {
  switch (kind_) {
    case Kind::Constant:
      return SymbolicSet::empty();
    case Kind::Affine:
      return SymbolicSet::tail_from(1);
    case Kind::Piecewise: {
      bool on_div = on_.divergent(), off_div = off_.divergent();
      if (on_div && off_div) return SymbolicSet::tail_from(1);
      if (on_div) return on_set_.intersect(SymbolicSet::tail_from(1));
      if (off_div) return on_set_.complement().intersect(SymbolicSet::tail_from(1));
      return SymbolicSet::empty();
    }
    case Kind::ExplicitPrefix:
      if (on_.divergent())
        return SymbolicSet::tail_from(static_cast<long long>(prefix_.size()) + 1);
      return SymbolicSet::empty();
    case Kind::Opaque:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

bool provably_infinite(const SymbolicSet& a) {
  auto c = a.cardinality();
  return c == SetCardinality::Cofinite || c == SetCardinality::InfiniteCoinfinite;
}

}  // namespace

BClassification RatioSequence::classify_bbound(const SymbolicSet& A, long long window) const {
  if (window < 1) throw std::invalid_argument("classification window must be >= 1");
  BClassification out;
  out.window = window;

  // Finite sets are b-bounded by convention, with the observed bound.
  if (auto fm = A.finite_members()) {
    long long c = 2;
    for (long long n : *fm)
      if (n >= 1) {
        Int b = ratio_at(n);
        if (b > c) c = b.convert_to<long long>();
      }
    out.tag = BClassification::Tag::BBounded;
    out.bound = c;
    out.rule = "finite set";
    return out;
  }

  SymbolicSet A1 = A.intersect(SymbolicSet::tail_from(1));
  if (auto br = bounded_region()) {
    if (provably_subset(A1, br->first)) {
      out.tag = BClassification::Tag::BBounded;
      out.bound = br->second;
      out.rule = "contained in the bounded-ratio region";
      return out;
    }
  }
  if (auto dr = divergent_region()) {
    if (provably_infinite(A) && provably_subset(A1, *dr)) {
      out.tag = BClassification::Tag::BDivergent;
      out.rule = "infinite and contained in the divergent-ratio region";
      return out;
    }
    if (auto br = bounded_region()) {
      bool meets_bounded = false, meets_divergent = false;
      long long cap = std::min(window, A.horizon());
      for (long long n = 1; n <= cap; ++n) {
        if (!A.member(n)) continue;
        if (br->first.member(n)) meets_bounded = true;
        if (dr->member(n)) meets_divergent = true;
      }
      if (meets_bounded && meets_divergent && !br->first.is_empty()) {
        // Both parts provably infinite makes this definitive; else still report Mixed
        // as the window evidence.
        out.tag = BClassification::Tag::Mixed;
        out.rule = "meets both the bounded and the divergent region in the window";
        return out;
      }
    }
  }

  out.tag = BClassification::Tag::Unknown;
  out.rule = "no analytic rule applies; window inspection inconclusive";
  return out;
}

SymbolicSet RatioSequence::where_ratio_equals(const Int& v, long long opaque_window) const {
  SymbolicSet indices = SymbolicSet::tail_from(1);
  switch (kind_) {
    case Kind::Constant:
    case Kind::Affine:
      return on_.where_equals(v).intersect(indices);
    case Kind::Piecewise: {
      SymbolicSet on_part = on_.where_equals(v).intersect(on_set_).intersect(indices);
      SymbolicSet off_part =
          off_.where_equals(v).intersect(on_set_.complement()).intersect(indices);
      return on_part.unite(off_part);
    }
    case Kind::ExplicitPrefix: {
      std::vector<long long> hits;
      for (long long n = 1; n <= static_cast<long long>(prefix_.size()); ++n)
        if (prefix_[n - 1] == v) hits.push_back(n);
      SymbolicSet tail_part = on_.where_equals(v).intersect(
          SymbolicSet::tail_from(static_cast<long long>(prefix_.size()) + 1));
      return SymbolicSet::finite(std::move(hits)).unite(tail_part);
    }
    case Kind::Opaque: {
      std::vector<long long> hits;
      for (long long n = 1; n <= opaque_window; ++n)
        if (ratio_at(n) == v) hits.push_back(n);
      return SymbolicSet::prefix_only(std::move(hits), opaque_window);
    }
  }
  return SymbolicSet::empty();
}

std::optional<long long> RatioSequence::constant_value() const {
  if (kind_ == Kind::Constant) return on_.c;
  if (kind_ == Kind::Piecewise && !on_.divergent() && !off_.divergent() && on_.c == off_.c)
    return on_.c;
  return std::nullopt;
}

std::optional<std::pair<long long, long long>> RatioSequence::eventual_period() const {
  switch (kind_) {
    case Kind::Constant:
      return std::make_pair(1LL, 0LL);
    case Kind::Affine:
      return std::nullopt;
    case Kind::Piecewise: {
      if (on_.divergent() || off_.divergent()) return std::nullopt;
      auto pv = on_set_.periodic_view();
      if (!pv) return std::nullopt;
      return std::make_pair(pv->modulus, static_cast<long long>(pv->prefix->size()));
    }
    case Kind::ExplicitPrefix:
      if (on_.divergent()) return std::nullopt;
      return std::make_pair(1LL, static_cast<long long>(prefix_.size()));
    case Kind::Opaque:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string RatioSequence::str() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant:
      os << "b_n = " << on_.c;
      break;
    case Kind::Affine:
      os << "b_n = n+1";
      break;
    case Kind::Piecewise:
      os << "b_n = " << on_.str() << " on " << on_set_.str() << ", " << off_.str() << " elsewhere";
      break;
    case Kind::ExplicitPrefix: {
      os << "b = (";
      for (std::size_t i = 0; i < prefix_.size(); ++i) os << (i ? "," : "") << prefix_[i];
      os << "), then " << on_.str();
      break;
    }
    case Kind::Opaque:
      os << "b_n = <opaque>";
      break;
  }
  return os.str();
}

}  // namespace utorsion
