#include "utorsion/symbolic_set.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace utorsion {

namespace {
constexpr long long kPeriodCap = 1 << 20;  // fall back to lazy algebra past this

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

long long to_ll(const Int& v) { return v.convert_to<long long>(); }
}  // namespace

// ---------------------------------------------------------------------------
// IndexRule helpers
// ---------------------------------------------------------------------------

std::string IndexRule::str() const {
  std::ostringstream os;
  bool first = true;
  auto term = [&](long long c, const char* sym) {
    if (c == 0) return;
    if (!first && c > 0) os << "+";
    if (c == -1 && *sym)
      os << "-";
    else if (c != 1 || !*sym)
      os << c;
    os << sym;
    first = false;
  };
  term(a2, "n²");
  term(a1, "n");
  term(a0, "");
  if (first) os << "0";
  return os.str();
}

bool poly_positive_on_naturals(const Int& a2, const Int& a1, const Int& a0) {
  if (a2 == 0) {
    if (a1 == 0) return a0 > 0;
    if (a1 < 0) return false;  // eventually negative
    return a0 > 0;             // increasing, minimum at n = 0
  }
  if (a2 < 0) return false;
  // Convex parabola: check every integer up to just past the vertex -a1/(2*a2).
  Int vertex_ceil = a1 >= 0 ? Int(0) : (-a1 + 2 * a2 - 1) / (2 * a2);
  for (Int n = 0; n <= vertex_ceil + 1; ++n) {
    if (a2 * n * n + a1 * n + a0 <= 0) return false;
  }
  return true;
}

bool strictly_increasing_on_naturals(const IndexRule& r) {
  // r(n+1) - r(n) = 2*a2*n + (a2 + a1) > 0 for all n >= 0
  return poly_positive_on_naturals(0, 2 * Int(r.a2), Int(r.a2) + Int(r.a1));
}

long long last_index_leq(const IndexRule& r, const Int& bound) {
  if (r.at(0) > bound) return -1;
  long long hi = 1;
  while (r.at(hi) <= bound) {
    if (hi > (1LL << 60)) throw std::overflow_error("index rule does not grow");
    hi <<= 1;
  }
  long long lo = hi / 2;  // r(lo) <= bound < r(hi)
  while (lo + 1 < hi) {
    long long mid = lo + (hi - lo) / 2;
    (r.at(mid) <= bound ? lo : hi) = mid;
  }
  return lo;
}

Int sum_prefix(const IndexRule& r, const Int& count) {
  if (count <= 0) return 0;
  Int k = count - 1;  // sum over n = 0..k
  Int sum_n = k * (k + 1) / 2;
  Int sum_n2 = k * (k + 1) * (2 * k + 1) / 6;
  return Int(r.a2) * sum_n2 + Int(r.a1) * sum_n + Int(r.a0) * count;
}

// ---------------------------------------------------------------------------
// Node
// ---------------------------------------------------------------------------

struct SymbolicSet::Node {
  Form form;

  // Periodic: member(n) = n < prefix.size() ? prefix[n] : residues[n % modulus]
  long long modulus = 1;
  std::vector<char> residues;
  std::vector<char> prefix;

  // IntervalUnion
  IndexRule lo, hi;
  std::vector<std::pair<long long, long long>> head;

  // PrefixOnly
  std::vector<long long> members;
  long long horizon = kUnlimitedHorizon;

  // Algebra
  SetOp op = SetOp::Union;
  std::shared_ptr<const Node> child_a, child_b;

  Node() : form(Form::Periodic) {}
};

SymbolicSet detail_wrap_set(std::shared_ptr<const SymbolicSet::Node> node);

namespace {

using Node = SymbolicSet::Node;
using Op = SetOp;

std::shared_ptr<const Node> make_periodic_node(long long modulus, std::vector<char> residues,
                                               std::vector<char> prefix) {
  // Canonicalize: minimal modulus, then minimal prefix.
  for (long long d = 1; d <= modulus / 2; ++d) {
    if (modulus % d != 0) continue;
    bool periodic_d = true;
    for (long long i = 0; i < modulus && periodic_d; ++i) {
      periodic_d = residues[i] == residues[(i + d) % modulus];
    }
    if (periodic_d) {
      residues.resize(d);
      modulus = d;
      break;
    }
  }
  while (!prefix.empty() &&
         prefix.back() == residues[(static_cast<long long>(prefix.size()) - 1) % modulus]) {
    prefix.pop_back();
  }
  Node n;
  n.form = SymbolicSet::Form::Periodic;
  n.modulus = modulus;
  n.residues = std::move(residues);
  n.prefix = std::move(prefix);
  return std::make_shared<const Node>(std::move(n));
}

std::shared_ptr<const Node> make_finite_node(std::vector<long long> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty() && members.front() < 0)
    throw std::invalid_argument("finite set with negative member");
  std::vector<char> prefix(members.empty() ? 0 : members.back() + 1, 0);
  for (long long m : members) prefix[m] = 1;
  return make_periodic_node(1, {0}, std::move(prefix));
}

}  // namespace

SymbolicSet detail_wrap_set(std::shared_ptr<const SymbolicSet::Node> node) {
  return SymbolicSet(std::move(node));
}

std::shared_ptr<const SymbolicSet::Node> detail_unwrap_set(const SymbolicSet& s) {
  return s.node_;
}

namespace {
SymbolicSet wrap(std::shared_ptr<const Node> node) { return detail_wrap_set(std::move(node)); }
std::shared_ptr<const Node> unwrap(const SymbolicSet& s) { return detail_unwrap_set(s); }
}  // namespace

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

SymbolicSet::SymbolicSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

SymbolicSet::SymbolicSet() : node_(make_periodic_node(1, {0}, {})) {}

SymbolicSet SymbolicSet::empty() { return SymbolicSet(); }

SymbolicSet SymbolicSet::naturals() { return wrap(make_periodic_node(1, {1}, {})); }

SymbolicSet SymbolicSet::finite(std::vector<long long> members) {
  return wrap(make_finite_node(std::move(members)));
}

SymbolicSet SymbolicSet::cofinite(std::vector<long long> excluded) {
  return SymbolicSet::finite(std::move(excluded)).complement();
}

SymbolicSet SymbolicSet::residue(long long modulus, std::vector<long long> residues) {
  if (modulus < 1) throw std::invalid_argument("residue modulus must be >= 1");
  std::vector<char> bits(modulus, 0);
  for (long long r : residues) {
    if (r < 0 || r >= modulus) throw std::invalid_argument("residue out of range");
    bits[r] = 1;
  }
  return wrap(make_periodic_node(modulus, std::move(bits), {}));
}

SymbolicSet SymbolicSet::tail_from(long long from) {
  if (from < 0) from = 0;
  return wrap(make_periodic_node(1, {1}, std::vector<char>(from, 0)));
}

SymbolicSet SymbolicSet::interval_union(IndexRule lo, IndexRule hi,
                                        std::vector<std::pair<long long, long long>> head) {
  if (!strictly_increasing_on_naturals(lo) || !strictly_increasing_on_naturals(hi))
    throw std::invalid_argument("interval union rules must be strictly increasing");
  if (lo.at(0) < 0) throw std::invalid_argument("interval union starts below 0");
  if (!poly_positive_on_naturals(Int(hi.a2) - lo.a2, Int(hi.a1) - lo.a1, Int(hi.a0) - lo.a0 + 1))
    throw std::invalid_argument("interval union requires lo(n) <= hi(n)");
  IndexRule lo1 = lo.composed_shift(1);
  if (!poly_positive_on_naturals(Int(lo1.a2) - hi.a2, Int(lo1.a1) - hi.a1,
                                 Int(lo1.a0) - hi.a0 - 1))
    throw std::invalid_argument("interval union requires hi(n) + 1 < lo(n+1)");
  std::sort(head.begin(), head.end());
  long long prev_end = -2;
  for (auto& [a, b] : head) {
    if (a < 0 || b < a) throw std::invalid_argument("bad head block");
    if (a <= prev_end + 1) throw std::invalid_argument("head blocks must be separated");
    prev_end = b;
  }
  if (!head.empty() && lo.at(0) <= Int(prev_end + 1))
    throw std::invalid_argument("head blocks must precede the rule blocks");
  Node n;
  n.form = Form::IntervalUnion;
  n.lo = lo;
  n.hi = hi;
  n.head = std::move(head);
  return wrap(std::make_shared<const Node>(std::move(n)));
}

SymbolicSet SymbolicSet::prefix_only(std::vector<long long> members, long long horizon) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty() && (members.front() < 0 || members.back() > horizon))
    throw std::invalid_argument("prefix members outside [0, horizon]");
  Node n;
  n.form = Form::PrefixOnly;
  n.members = std::move(members);
  n.horizon = horizon;
  return wrap(std::make_shared<const Node>(std::move(n)));
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

SymbolicSet::Form SymbolicSet::form() const { return node_->form; }

long long SymbolicSet::horizon() const {
  switch (node_->form) {
    case Form::Periodic:
    case Form::IntervalUnion:
      return kUnlimitedHorizon;
    case Form::PrefixOnly:
      return node_->horizon;
    case Form::Algebra:
      return std::min(wrap(node_->child_a).horizon(), wrap(node_->child_b).horizon());
  }
  return kUnlimitedHorizon;
}

bool SymbolicSet::member(long long x) const {
  if (x < 0) return false;
  const Node& n = *node_;
  switch (n.form) {
    case Form::Periodic:
      if (x < static_cast<long long>(n.prefix.size())) return n.prefix[x];
      return n.residues[x % n.modulus];
    case Form::IntervalUnion: {
      for (auto& [a, b] : n.head) {
        if (x < a) return false;
        if (x <= b) return true;
      }
      long long k = last_index_leq(n.lo, Int(x));
      return k >= 0 && Int(x) <= n.hi.at(k);
    }
    case Form::PrefixOnly:
      if (x > n.horizon)
        throw beyond_horizon_error("membership query past horizon " + std::to_string(n.horizon));
      return std::binary_search(n.members.begin(), n.members.end(), x);
    case Form::Algebra: {
      SymbolicSet a = wrap(n.child_a), b = wrap(n.child_b);
      switch (n.op) {
        case Op::Union:
          return a.member(x) || b.member(x);
        case Op::Intersect:
          return a.member(x) && b.member(x);
        case Op::Diff:
          return a.member(x) && !b.member(x);
      }
      return false;
    }
  }
  return false;
}

Int SymbolicSet::count_leq(long long x) const {
  if (x < 0) return 0;
  const Node& n = *node_;
  switch (n.form) {
    case Form::Periodic: {
      Int c = 0;
      long long plen = static_cast<long long>(n.prefix.size());
      for (long long i = 0; i <= std::min(x, plen - 1); ++i) c += n.prefix[i];
      if (x < plen) return c;
      long long residues_per_cycle = 0;
      for (char r : n.residues) residues_per_cycle += r;
      long long lo = plen, hi = x;
      long long first_cycle_end = (lo / n.modulus + 1) * n.modulus;
      if (hi < first_cycle_end) {
        for (long long i = lo; i <= hi; ++i) c += n.residues[i % n.modulus];
        return c;
      }
      for (long long i = lo; i < first_cycle_end; ++i) c += n.residues[i % n.modulus];
      long long full_cycles = (hi + 1 - first_cycle_end) / n.modulus;
      c += Int(residues_per_cycle) * full_cycles;
      for (long long i = first_cycle_end + full_cycles * n.modulus; i <= hi; ++i)
        c += n.residues[i % n.modulus];
      return c;
    }
    case Form::IntervalUnion: {
      Int c = 0;
      for (auto& [a, b] : n.head) {
        if (a > x) return c;
        c += std::min(b, x) - a + 1;
      }
      long long k = last_index_leq(n.lo, Int(x));
      if (k < 0) return c;
      Int count = Int(k) + 1;
      c += sum_prefix(n.hi, count) - sum_prefix(n.lo, count) + count;
      Int overshoot = n.hi.at(k) - Int(x);
      if (overshoot > 0) c -= overshoot;
      return c;
    }
    case Form::PrefixOnly:
      if (x > n.horizon)
        throw beyond_horizon_error("count query past horizon " + std::to_string(n.horizon));
      return static_cast<long long>(
          std::upper_bound(n.members.begin(), n.members.end(), x) - n.members.begin());
    case Form::Algebra: {
      Int c = 0;
      for (long long i = 0; i <= x; ++i) c += member(i) ? 1 : 0;
      return c;
    }
  }
  return 0;
}

SetCardinality SymbolicSet::cardinality() const {
  const Node& n = *node_;
  switch (n.form) {
    case Form::Periodic: {
      bool any = false, all = true;
      for (char r : n.residues) {
        any |= r != 0;
        all &= r != 0;
      }
      if (!any) return SetCardinality::Finite;
      if (all) return SetCardinality::Cofinite;
      return SetCardinality::InfiniteCoinfinite;
    }
    case Form::IntervalUnion:
      return SetCardinality::InfiniteCoinfinite;
    case Form::PrefixOnly:
      return SetCardinality::Unknown;
    case Form::Algebra: {
      SetCardinality ca = wrap(n.child_a).cardinality(), cb = wrap(n.child_b).cardinality();
      constexpr auto fin = SetCardinality::Finite;
      constexpr auto cof = SetCardinality::Cofinite;
      constexpr auto mid = SetCardinality::InfiniteCoinfinite;
      constexpr auto unk = SetCardinality::Unknown;
      switch (n.op) {
        case Op::Union:
          if (ca == fin && cb == fin) return fin;
          if (ca == cof || cb == cof) return cof;
          if (ca == unk || cb == unk) return unk;
          return mid;  // at least one InfiniteCoinfinite side, none cofinite
        case Op::Intersect:
          if (ca == fin || cb == fin) return fin;
          if (ca == cof && cb == cof) return cof;
          if (ca == cof) return cb;
          if (cb == cof) return ca;
          return unk;
        case Op::Diff:
          if (ca == fin) return fin;
          if (cb == cof) return fin;  // contained in the finite complement of b
          if (cb == fin) return ca;
          if (ca == cof && cb == mid) return mid;  // contains b* minus a finite set
          return unk;
      }
      return unk;
    }
  }
  return SetCardinality::Unknown;
}

bool SymbolicSet::is_empty() const {
  const Node& n = *node_;
  switch (n.form) {
    case Form::Periodic: {
      for (char r : n.residues)
        if (r) return false;
      for (char p : n.prefix)
        if (p) return false;
      return true;
    }
    case Form::IntervalUnion:
      return false;
    case Form::PrefixOnly:
      return n.members.empty();
    case Form::Algebra:
      return false;  // emptiness is not provable for lazy nodes
  }
  return false;
}

std::optional<std::vector<long long>> SymbolicSet::finite_members() const {
  const Node& n = *node_;
  if (n.form != Form::Periodic) return std::nullopt;
  for (char r : n.residues)
    if (r) return std::nullopt;
  std::vector<long long> out;
  for (long long i = 0; i < static_cast<long long>(n.prefix.size()); ++i)
    if (n.prefix[i]) out.push_back(i);
  return out;
}

std::optional<long long> SymbolicSet::min_member() const {
  const Node& n = *node_;
  switch (n.form) {
    case Form::Periodic: {
      long long plen = static_cast<long long>(n.prefix.size());
      for (long long i = 0; i < plen; ++i)
        if (n.prefix[i]) return i;
      for (long long i = 0; i < n.modulus; ++i)
        if (n.residues[(plen + i) % n.modulus]) return plen + i;
      return std::nullopt;
    }
    case Form::IntervalUnion:
      if (!n.head.empty()) return n.head.front().first;
      return to_ll(n.lo.at(0));
    case Form::PrefixOnly:
      if (!n.members.empty()) return n.members.front();
      return std::nullopt;
    case Form::Algebra: {
      long long cap = std::min(horizon(), static_cast<long long>(1 << 20));
      for (long long i = 0; i <= cap; ++i)
        if (member(i)) return i;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool SymbolicSet::structurally_equal(const SymbolicSet& other) const {
  if (node_ == other.node_) return true;
  const Node& x = *node_;
  const Node& y = *other.node_;
  if (x.form != y.form) return false;
  switch (x.form) {
    case Form::Periodic:
      return x.modulus == y.modulus && x.residues == y.residues && x.prefix == y.prefix;
    case Form::IntervalUnion:
      return x.lo == y.lo && x.hi == y.hi && x.head == y.head;
    case Form::PrefixOnly:
      return x.members == y.members && x.horizon == y.horizon;
    case Form::Algebra:
      return x.op == y.op && wrap(x.child_a).structurally_equal(wrap(y.child_a)) &&
             wrap(x.child_b).structurally_equal(wrap(y.child_b));
  }
  return false;
}

std::optional<SymbolicSet::PeriodicView> SymbolicSet::periodic_view() const {
  if (node_->form != Form::Periodic) return std::nullopt;
  long long count = 0;
  for (char r : node_->residues) count += r;
  return PeriodicView{node_->modulus, &node_->residues, &node_->prefix, count};
}

std::optional<SymbolicSet::IntervalUnionView> SymbolicSet::interval_union_view() const {
  if (node_->form != Form::IntervalUnion) return std::nullopt;
  return IntervalUnionView{node_->lo, node_->hi, &node_->head};
}

std::optional<SetAlgebraView> SymbolicSet::algebra_view() const {
  if (node_->form != Form::Algebra) return std::nullopt;
  return SetAlgebraView{node_->op, SymbolicSet(node_->child_a), SymbolicSet(node_->child_b)};
}

std::optional<std::vector<long long>> SymbolicSet::prefix_members(long long* horizon_out) const {
  if (node_->form != Form::PrefixOnly) return std::nullopt;
  if (horizon_out) *horizon_out = node_->horizon;
  return node_->members;
}

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

namespace {

std::optional<SymbolicSet> combine_periodic(const SymbolicSet& A, const SymbolicSet& B, SetOp op) {
  auto va = A.periodic_view();
  auto vb = B.periodic_view();
  if (!va || !vb) return std::nullopt;
  long long m = lcm_ll(va->modulus, vb->modulus);
  if (m > kPeriodCap) return std::nullopt;
  long long plen = std::max(static_cast<long long>(va->prefix->size()),
                            static_cast<long long>(vb->prefix->size()));
  auto apply = [op](bool x, bool y) {
    switch (op) {
      case Op::Union:
        return x || y;
      case Op::Intersect:
        return x && y;
      case Op::Diff:
        return x && !y;
    }
    return false;
  };
  std::vector<char> prefix(plen);
  for (long long i = 0; i < plen; ++i) prefix[i] = apply(A.member(i), B.member(i));
  std::vector<char> residues(m);
  for (long long i = 0; i < m; ++i) {
    long long x = plen + i;  // both inputs are periodic beyond plen
    residues[x % m] = apply(A.member(x), B.member(x));
  }
  return wrap(make_periodic_node(m, std::move(residues), std::move(prefix)));
}

// Filters finite/prefix member lists through the other operand where the other
// operand can answer. Returns nullopt when no exact filtering applies.
std::optional<SymbolicSet> filter_members(const SymbolicSet& A, const SymbolicSet& B, Op op) {
  auto pass = [op](bool in_b) { return op == Op::Intersect ? in_b : !in_b; };
  if (op == Op::Union) return std::nullopt;
  if (auto fa = A.finite_members()) {
    long long bh = B.horizon();
    if (!fa->empty() && fa->back() > bh) return std::nullopt;
    std::vector<long long> out;
    for (long long v : *fa)
      if (pass(B.member(v))) out.push_back(v);
    return SymbolicSet::finite(std::move(out));
  }
  long long ah = 0;
  if (auto pm = A.prefix_members(&ah)) {
    long long h = std::min(ah, B.horizon());
    std::vector<long long> out;
    for (long long v : *pm) {
      if (v > h) break;
      if (pass(B.member(v))) out.push_back(v);
    }
    return SymbolicSet::prefix_only(std::move(out), h);
  }
  if (op == Op::Intersect) {
    // B finite: intersect is symmetric
    if (B.finite_members() || B.form() == SymbolicSet::Form::PrefixOnly)
      return filter_members(B, A, op);
  }
  if (op == Op::Diff) {
    // A \ B with cofinite B: the result lives inside the finite complement of B.
    if (B.cardinality() == SetCardinality::Cofinite) {
      auto holes = B.complement().finite_members();
      if (holes) {
        long long ahz = A.horizon();
        if (!holes->empty() && holes->back() > ahz) return std::nullopt;
        std::vector<long long> out;
        for (long long v : *holes)
          if (A.member(v)) out.push_back(v);
        return SymbolicSet::finite(std::move(out));
      }
    }
  }
  return std::nullopt;
}

// Cheap subset proofs that keep closed forms closed under trivial algebra,
// e.g. intersecting an interval union with a cofinite index range or with a
// union that already contains it.
bool provably_contained(const SymbolicSet& a, const SymbolicSet& b) {
  if (a.structurally_equal(b)) return true;
  if (a.is_empty()) return true;
  if (auto fa = a.finite_members()) {
    try {
      for (long long v : *fa)
        if (!b.member(v)) return false;
      return true;
    } catch (const beyond_horizon_error&) {
      return false;
    }
  }
  if (b.cardinality() == SetCardinality::Cofinite) {
    auto holes = b.complement().finite_members();
    if (holes) {
      try {
        for (long long h : *holes)
          if (a.member(h)) return false;
        return true;
      } catch (const beyond_horizon_error&) {
        return false;
      }
    }
  }
  if (auto av = a.algebra_view()) {
    switch (av->op) {
      case SetOp::Union:
        if (provably_contained(av->a, b) && provably_contained(av->b, b)) return true;
        break;
      case SetOp::Intersect:
        if (provably_contained(av->a, b) || provably_contained(av->b, b)) return true;
        break;
      case SetOp::Diff:
        if (provably_contained(av->a, b)) return true;
        break;
    }
  }
  if (auto bv = b.algebra_view()) {
    switch (bv->op) {
      case SetOp::Union:
        if (provably_contained(a, bv->a) || provably_contained(a, bv->b)) return true;
        break;
      case SetOp::Intersect:
        if (provably_contained(a, bv->a) && provably_contained(a, bv->b)) return true;
        break;
      case SetOp::Diff:
        break;
    }
  }
  // A degenerate union following the block starts (or ends) of another union
  // is contained in it; the gap invariant covers the rule part, the head
  // points are checked directly.
  auto ia = a.interval_union_view();
  auto ib = b.interval_union_view();
  if (ia && ib && ia->lo == ia->hi && (ia->lo == ib->lo || ia->lo == ib->hi)) {
    bool heads_ok = true;
    for (auto& [x, y] : *ia->head) heads_ok &= x == y && b.member(x);
    if (heads_ok) return true;
  }
  return false;
}

// Sound emptiness proofs for A ∩ B. The interval-union case covers the
// boundary shifts: points one step left of every block start (or one step
// right of every block end) fall into the gaps.
bool provably_disjoint(const SymbolicSet& a, const SymbolicSet& b) {
  if (a.is_empty() || b.is_empty()) return true;
  if (auto fa = a.finite_members()) {
    try {
      for (long long v : *fa)
        if (b.member(v)) return false;
      return true;
    } catch (const beyond_horizon_error&) {
      return false;
    }
  }
  if (b.finite_members()) return provably_disjoint(b, a);
  auto ia = a.interval_union_view();
  auto ib = b.interval_union_view();
  if (ia && ib && ia->lo == ia->hi) {
    bool shifted_start = ia->lo == ib->lo.plus(-1);
    bool shifted_end = ia->lo == ib->hi.plus(1);
    if (shifted_start || shifted_end) {
      try {
        bool ok = true;
        for (auto& [x, y] : *ia->head) ok &= x == y && !b.member(x);
        // rule value at n = 0 can fall before the first block; check directly
        ok = ok && !b.member(to_ll(ia->lo.at(0)));
        if (ok) return true;
      } catch (const beyond_horizon_error&) {
      }
    }
  }
  if (ib && !ia) return provably_disjoint(b, a);
  return false;
}

SymbolicSet algebra_op(Op op, const SymbolicSet& A, const SymbolicSet& B) {
  if (A.is_empty()) {
    if (op == Op::Union) return B;
    return SymbolicSet::empty();
  }
  if (B.is_empty()) {
    if (op == Op::Intersect) return SymbolicSet::empty();
    return A;
  }
  if (A.structurally_equal(B)) {
    if (op == Op::Diff) return SymbolicSet::empty();
    return A;
  }
  if (provably_contained(A, B)) {
    if (op == Op::Union) return B;
    if (op == Op::Intersect) return A;
    return SymbolicSet::empty();  // Diff
  }
  if (provably_contained(B, A)) {
    if (op == Op::Union) return A;
    if (op == Op::Intersect) return B;
  }
  if ((op == Op::Intersect) && provably_disjoint(A, B)) return SymbolicSet::empty();
  if (op == Op::Diff && provably_disjoint(A, B)) return A;
  if (auto p = combine_periodic(A, B, op)) return *p;
  if (auto f = filter_members(A, B, op)) return *f;
  Node n;
  n.form = SymbolicSet::Form::Algebra;
  n.op = op;
  n.child_a = unwrap(A);
  n.child_b = unwrap(B);
  return wrap(std::make_shared<const Node>(std::move(n)));
}

}  // namespace

SymbolicSet SymbolicSet::unite(const SymbolicSet& other) const {
  return algebra_op(Op::Union, *this, other);
}

SymbolicSet SymbolicSet::intersect(const SymbolicSet& other) const {
  return algebra_op(Op::Intersect, *this, other);
}

SymbolicSet SymbolicSet::diff(const SymbolicSet& other) const {
  return algebra_op(Op::Diff, *this, other);
}

SymbolicSet SymbolicSet::complement() const {
  const Node& n = *node_;
  switch (n.form) {
    case Form::Periodic: {
      std::vector<char> residues = n.residues;
      std::vector<char> prefix = n.prefix;
      for (auto& r : residues) r = !r;
      for (auto& p : prefix) p = !p;
      return wrap(make_periodic_node(n.modulus, std::move(residues), std::move(prefix)));
    }
    case Form::IntervalUnion: {
      std::vector<std::pair<long long, long long>> gaps;
      long long cursor = 0;
      for (auto& [a, b] : n.head) {
        if (a > cursor) gaps.emplace_back(cursor, a - 1);
        cursor = b + 1;
      }
      long long first_lo = to_ll(n.lo.at(0));
      if (first_lo > cursor) gaps.emplace_back(cursor, first_lo - 1);
      IndexRule lo2 = n.hi.plus(1);
      IndexRule hi2 = n.lo.composed_shift(1).plus(-1);
      return interval_union(lo2, hi2, std::move(gaps));
    }
    case Form::PrefixOnly: {
      std::vector<long long> out;
      std::size_t j = 0;
      for (long long i = 0; i <= n.horizon; ++i) {
        if (j < n.members.size() && n.members[j] == i) {
          ++j;
        } else {
          out.push_back(i);
        }
      }
      return prefix_only(std::move(out), n.horizon);
    }
    case Form::Algebra: {
      SymbolicSet a = wrap(n.child_a), b = wrap(n.child_b);
      switch (n.op) {
        case Op::Union:
          return a.complement().intersect(b.complement());
        case Op::Intersect:
          return a.complement().unite(b.complement());
        case Op::Diff:
          return a.complement().unite(b);
      }
      return SymbolicSet::empty();
    }
  }
  return SymbolicSet::empty();
}

SymbolicSet SymbolicSet::shift(long long k) const {
  if (k == 0) return *this;
  const Node& n = *node_;
  switch (n.form) {
    case Form::Periodic: {
      long long m = n.modulus;
      long long plen = static_cast<long long>(n.prefix.size());
      std::vector<char> residues(m);
      if (k > 0) {
        for (long long r = 0; r < m; ++r) residues[(r + k) % m] = n.residues[r];
        std::vector<char> prefix(plen + k, 0);
        for (long long i = k; i < plen + k; ++i) prefix[i] = n.prefix[i - k];
        return wrap(make_periodic_node(m, std::move(residues), std::move(prefix)));
      }
      long long j = -k;
      for (long long r = 0; r < m; ++r) residues[r] = n.residues[(r + j) % m];
      long long plen2 = std::max<long long>(0, plen - j);
      std::vector<char> prefix(plen2);
      for (long long i = 0; i < plen2; ++i) prefix[i] = member(i + j);
      return wrap(make_periodic_node(m, std::move(residues), std::move(prefix)));
    }
    case Form::IntervalUnion: {
      if (k > 0) {
        auto head = n.head;
        for (auto& [a, b] : head) {
          a += k;
          b += k;
        }
        return interval_union(n.lo.plus(k), n.hi.plus(k), std::move(head));
      }
      long long j = -k;
      std::vector<std::pair<long long, long long>> head;
      for (auto [a, b] : n.head) {
        if (b - j < 0) continue;
        head.emplace_back(std::max<long long>(0, a - j), b - j);
      }
      // Rule blocks whose start would go negative are materialized into the head.
      long long n0 = 0;
      while (n.lo.at(n0) < j) {
        Int b = n.hi.at(n0) - j;
        if (b >= 0) head.emplace_back(std::max<long long>(0, to_ll(n.lo.at(n0) - j)), to_ll(b));
        ++n0;
      }
      return interval_union(n.lo.composed_shift(n0).plus(-j), n.hi.composed_shift(n0).plus(-j),
                            std::move(head));
    }
    case Form::PrefixOnly: {
      std::vector<long long> out;
      for (long long v : n.members) {
        if (v + k >= 0) out.push_back(v + k);
      }
      long long h;
      if (k > 0) {
        h = n.horizon > kUnlimitedHorizon - k ? kUnlimitedHorizon : n.horizon + k;
      } else {
        h = n.horizon + k;  // valid only where the source was known
      }
      if (h < 0) throw std::invalid_argument("shift empties the validity window");
      return prefix_only(std::move(out), h);
    }
    case Form::Algebra: {
      SymbolicSet a = wrap(n.child_a).shift(k);
      SymbolicSet b = wrap(n.child_b).shift(k);
      return algebra_op(n.op, a, b);
    }
  }
  return SymbolicSet::empty();
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string SymbolicSet::str() const {
  const Node& n = *node_;
  std::ostringstream os;
  switch (n.form) {
    case Form::Periodic: {
      if (auto fm = finite_members()) {
        if (fm->empty()) return "∅";
        os << "{";
        for (std::size_t i = 0; i < fm->size(); ++i) os << (i ? "," : "") << (*fm)[i];
        os << "}";
        return os.str();
      }
      if (cardinality() == SetCardinality::Cofinite) {
        auto holes = complement().finite_members();
        if (holes && holes->empty()) return "ℕ";
        os << "ℕ∖" << complement().str();
        return os.str();
      }
      os << "{n≡";
      bool first = true;
      for (long long r = 0; r < n.modulus; ++r) {
        if (n.residues[r]) {
          os << (first ? "" : ",") << r;
          first = false;
        }
      }
      os << " (mod " << n.modulus << ")}";
      if (!n.prefix.empty()) os << "△[0," << n.prefix.size() - 1 << "]";
      return os.str();
    }
    case Form::IntervalUnion: {
      for (auto& [a, b] : n.head) {
        if (a == b)
          os << "{" << a << "}∪";
        else
          os << "[" << a << "," << b << "]∪";
      }
      if (n.lo == n.hi)
        os << "{" << n.lo.str() << "}";
      else
        os << "⋃[" << n.lo.str() << ", " << n.hi.str() << "]";
      return os.str();
    }
    case Form::PrefixOnly: {
      os << "{";
      for (std::size_t i = 0; i < n.members.size() && i < 12; ++i)
        os << (i ? "," : "") << n.members[i];
      if (n.members.size() > 12) os << ",…";
      os << "}|≤" << n.horizon;
      return os.str();
    }
    case Form::Algebra: {
      const char* sym = n.op == Op::Union ? "∪" : n.op == Op::Intersect ? "∩" : "∖";
      os << "(" << wrap(n.child_a).str() << sym << wrap(n.child_b).str() << ")";
      return os.str();
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Boundaries, blocks, nested pairs
// ---------------------------------------------------------------------------

Boundaries boundaries(const SymbolicSet& s) {
  if (s.is_empty()) throw std::invalid_argument("boundary operators require a nonempty set");
  if (auto iu = s.interval_union_view()) {
    std::vector<std::pair<long long, long long>> lows, highs, isolated_head;
    for (auto& [a, b] : *iu->head) {
      lows.emplace_back(a, a);
      highs.emplace_back(b, b);
      if (a == b) isolated_head.emplace_back(a, a);
    }
    SymbolicSet left = SymbolicSet::interval_union(iu->lo, iu->lo, lows);
    SymbolicSet right = SymbolicSet::interval_union(iu->hi, iu->hi, highs);
    SymbolicSet isolated = SymbolicSet::empty();
    if (iu->lo == iu->hi) {
      isolated = left;
    } else {
      // Isolated points are the degenerate blocks: solutions of hi(n) = lo(n).
      std::vector<long long> pts;
      for (auto& [a, b] : isolated_head) pts.push_back(a);
      Int d2 = Int(iu->hi.a2) - iu->lo.a2, d1 = Int(iu->hi.a1) - iu->lo.a1,
          d0 = Int(iu->hi.a0) - iu->lo.a0;
      // deg <= 2 polynomial, identically zero excluded; scan up to a safe bound
      long long bound = 4;
      if (d2 != 0) bound = std::max<long long>(bound, 2 + to_ll(abs(d1) / abs(d2)));
      else if (d1 != 0) bound = std::max<long long>(bound, 2 + to_ll(abs(d0) / abs(d1)));
      for (long long n = 0; n <= bound; ++n) {
        if (d2 * n * n + d1 * n + d0 == 0) pts.push_back(to_ll(iu->lo.at(n)));
      }
      isolated = SymbolicSet::finite(std::move(pts));
    }
    return {left, right, isolated};
  }
  SymbolicSet left = s.diff(s.shift(1));
  SymbolicSet right = s.diff(s.shift(-1));
  return {left, right, left.intersect(right)};
}

std::vector<Block> blocks(const SymbolicSet& s, long long window) {
  if (window < 0) return {};
  if (window > s.horizon())
    throw beyond_horizon_error("blocks window exceeds set horizon");
  std::vector<Block> out;
  long long start = -1;
  for (long long i = 0; i <= window; ++i) {
    bool in = s.member(i);
    if (in && start < 0) start = i;
    if (!in && start >= 0) {
      out.push_back({start, i - 1, false});
      start = -1;
    }
  }
  if (start >= 0) {
    bool may_extend = true;
    if (window + 1 <= s.horizon()) may_extend = s.member(window + 1);
    out.push_back({start, window, may_extend});
  }
  return out;
}

NestedPair::NestedPair(IndexRule l, IndexRule r, std::string lbl)
    : lefts(l), rights(r), label(std::move(lbl)) {
  if (!strictly_increasing_on_naturals(lefts) || !strictly_increasing_on_naturals(rights))
    throw std::invalid_argument("nested pair rules must be strictly increasing");
  if (lefts.at(0) < 0 || rights.at(0) < 0)
    throw std::invalid_argument("nested pair rules must stay in ℕ");
}

PairValidation validate_left_nested(const NestedPair& p, long long window) {
  // l(n) <= r(n) for all n
  bool c1 = poly_positive_on_naturals(Int(p.rights.a2) - p.lefts.a2, Int(p.rights.a1) - p.lefts.a1,
                                      Int(p.rights.a0) - p.lefts.a0 + 1);
  // r(n) < l(n+1) - 1 for all n
  IndexRule l1 = p.lefts.composed_shift(1);
  bool c2 = poly_positive_on_naturals(Int(l1.a2) - p.rights.a2, Int(l1.a1) - p.rights.a1,
                                      Int(l1.a0) - p.rights.a0 - 1);
  if (c1 && c2) return {true, -1, "l(n) ≤ r(n) < l(n+1)−1 proved for all n ≥ 0"};
  for (long long n = 0; n <= window; ++n) {
    if (!(p.lefts.at(n) <= p.rights.at(n) && p.rights.at(n) < l1.at(n) - 1)) {
      std::ostringstream os;
      os << "violated at n=" << n << ": l=" << p.lefts.at(n) << " r=" << p.rights.at(n)
         << " next l=" << l1.at(n);
      return {false, n, os.str()};
    }
  }
  return {false, -1, "violation lies beyond the inspection window"};
}

bool provably_subset(const SymbolicSet& a, const SymbolicSet& b) {
  return provably_contained(a, b);
}

bool provably_empty_intersection(const SymbolicSet& a, const SymbolicSet& b) {
  return provably_disjoint(a, b);
}

SymbolicSet realize_from_pair(const NestedPair& p) {
  PairValidation v = validate_left_nested(p, 64);
  if (!v.holds) throw std::invalid_argument("pair is not left nested: " + v.detail);
  return SymbolicSet::interval_union(p.lefts, p.rights);
}

}  // namespace utorsion
