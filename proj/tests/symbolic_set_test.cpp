#include "utorsion/symbolic_set.hpp"

#include <doctest.h>

#include <random>

using namespace utorsion;

namespace {

// Brute-force counting oracle.
Int count_oracle(const SymbolicSet& s, long long n) {
  Int c = 0;
  for (long long i = 0; i <= n; ++i) c += s.member(i) ? 1 : 0;
  return c;
}

SymbolicSet nowc_x() {
  // union of [(2n)^2, (2n+1)^2]
  return SymbolicSet::interval_union(IndexRule::quadratic(4, 0, 0), IndexRule::quadratic(4, 4, 1));
}

std::mt19937_64 rng(20240811);

SymbolicSet random_periodic() {
  std::uniform_int_distribution<long long> mod_d(1, 12), bit_d(0, 1), plen_d(0, 8);
  long long m = mod_d(rng);
  std::vector<long long> residues;
  for (long long r = 0; r < m; ++r)
    if (bit_d(rng)) residues.push_back(r);
  SymbolicSet s = SymbolicSet::residue(m, residues);
  long long plen = plen_d(rng);
  for (long long i = 0; i < plen; ++i) {
    if (bit_d(rng)) s = s.unite(SymbolicSet::finite({i}));
    else s = s.diff(SymbolicSet::finite({i}));
  }
  return s;
}

SymbolicSet random_interval_union() {
  std::uniform_int_distribution<long long> a2_d(0, 3), base_d(0, 10);
  long long a2 = a2_d(rng);
  long long a1 = a2 == 0 ? 3 + base_d(rng) : 1 + base_d(rng) % 4;
  long long a0 = base_d(rng);
  IndexRule lo = IndexRule::quadratic(a2, a1, a0);
  long long min_gap = a2 + a1;  // lo(1) - lo(0)
  std::uniform_int_distribution<long long> len_d(0, std::max<long long>(0, min_gap - 2));
  long long len = len_d(rng);
  IndexRule hi = IndexRule::quadratic(a2, a1, a0 + len);
  return SymbolicSet::interval_union(lo, hi);
}

}  // namespace

TEST_CASE("member and count on closed forms") {
  SymbolicSet x = nowc_x();
  CHECK(x.count_leq(9) == 8);  // [0,1] and [4,9]
  CHECK(x.member(4));
  CHECK_FALSE(x.member(3));

  SymbolicSet evens = SymbolicSet::residue(2, {0});
  CHECK_FALSE(evens.member(7));
  CHECK(evens.count_leq(7) == 4);

  SymbolicSet nat = SymbolicSet::naturals();
  for (long long n : {0, 5, 100}) CHECK(nat.count_leq(n) == n + 1);
}

TEST_CASE("set algebra basics") {
  CHECK(SymbolicSet::finite({2, 5, 9}).shift(-1).structurally_equal(SymbolicSet::finite({1, 4, 8})));
  CHECK(SymbolicSet::cofinite({3}).complement().structurally_equal(SymbolicSet::finite({3})));

  SymbolicSet s = SymbolicSet::finite({0, 1, 2, 5, 6, 7});
  SymbolicSet lam = s.diff(s.shift(1));
  CHECK(lam.structurally_equal(SymbolicSet::finite({0, 5})));
}

TEST_CASE("boundary operators") {
  SymbolicSet s = SymbolicSet::finite({2, 3, 4, 8, 9, 15});
  Boundaries bd = boundaries(s);
  CHECK(bd.left.structurally_equal(SymbolicSet::finite({2, 8, 15})));
  CHECK(bd.right.structurally_equal(SymbolicSet::finite({4, 9, 15})));
  CHECK(bd.isolated.structurally_equal(SymbolicSet::finite({15})));

  // cofinite sets have finite boundaries
  Boundaries bc = boundaries(SymbolicSet::cofinite({3}));
  CHECK(bc.left.structurally_equal(SymbolicSet::finite({0, 4})));

  // all points isolated
  SymbolicSet evens = SymbolicSet::residue(2, {0});
  Boundaries be = boundaries(evens);
  CHECK(be.left.structurally_equal(evens));
  CHECK(be.right.structurally_equal(evens));
  CHECK(be.isolated.structurally_equal(evens));

  CHECK_THROWS_AS(boundaries(SymbolicSet::empty()), std::invalid_argument);
}

TEST_CASE("boundaries of interval unions stay symbolic") {
  SymbolicSet x = nowc_x();
  Boundaries bd = boundaries(x);
  // lambda = {(2n)^2}, rho = {(2n+1)^2}
  for (long long n : {0, 1, 2, 3}) {
    CHECK(bd.left.member(4 * n * n));
    CHECK(bd.right.member(4 * n * n + 4 * n + 1));
  }
  CHECK_FALSE(bd.left.member(9));
  CHECK(bd.left.interval_union_view().has_value());
}

TEST_CASE("blocks decomposition") {
  auto bl = blocks(SymbolicSet::finite({2, 3, 4, 8, 9, 15}), 20);
  REQUIRE(bl.size() == 3);
  CHECK(bl[0].lo == 2);
  CHECK(bl[0].hi == 4);
  CHECK(bl[1].lo == 8);
  CHECK(bl[1].hi == 9);
  CHECK(bl[2].lo == 15);
  CHECK(bl[2].hi == 15);
  CHECK_FALSE(bl[2].may_extend);

  CHECK(blocks(SymbolicSet::empty(), 100).empty());

  auto bx = blocks(nowc_x(), 26);
  REQUIRE(bx.size() == 3);
  CHECK(bx[0].lo == 0);
  CHECK(bx[0].hi == 1);
  CHECK(bx[1].lo == 4);
  CHECK(bx[1].hi == 9);
  CHECK(bx[2].lo == 16);
  CHECK(bx[2].hi == 25);
}

TEST_CASE("left-nested validation") {
  NestedPair affine5(IndexRule::affine(5, 0), IndexRule::affine(5, 2));
  CHECK(validate_left_nested(affine5, 64).holds);

  // the wave witness in its strictly valid indexing: l = z_{n+1}, r = w_{n+2}
  NestedPair wave_tail(IndexRule::quadratic(1, 3, 3), IndexRule::quadratic(1, 4, 5));
  CHECK(validate_left_nested(wave_tail, 64).holds);

  // with the original indexing the gap inequality misses exactly at n = 0
  NestedPair wave_head(IndexRule::quadratic(1, 1, 1), IndexRule::quadratic(1, 2, 2));
  PairValidation v = validate_left_nested(wave_head, 64);
  CHECK_FALSE(v.holds);
  CHECK(v.first_violation == 0);

  NestedPair step2(IndexRule::affine(2, 0), IndexRule::affine(2, 1));
  PairValidation v2 = validate_left_nested(step2, 64);
  CHECK_FALSE(v2.holds);
  CHECK(v2.first_violation == 0);

  CHECK_THROWS_AS(NestedPair(IndexRule::constant(3), IndexRule::affine(1, 4)),
                  std::invalid_argument);
}

TEST_CASE("realize_from_pair") {
  SymbolicSet s =
      realize_from_pair(NestedPair(IndexRule::affine(5, 0), IndexRule::affine(5, 2)));
  auto bl = blocks(s, 12);
  REQUIRE(bl.size() == 3);
  CHECK(bl[0].lo == 0);
  CHECK(bl[0].hi == 2);
  CHECK(bl[2].lo == 10);

  // degenerate blocks: all points isolated
  SymbolicSet iso = realize_from_pair(NestedPair(IndexRule::affine(3, 2), IndexRule::affine(3, 2)));
  Boundaries bd = boundaries(iso);
  CHECK(bd.left.structurally_equal(iso));
  CHECK(bd.right.structurally_equal(iso));

  CHECK_THROWS_AS(realize_from_pair(NestedPair(IndexRule::affine(2, 0), IndexRule::affine(2, 1))),
                  std::invalid_argument);
}

TEST_CASE("realize round-trips through boundaries") {
  NestedPair p(IndexRule::quadratic(1, 3, 3), IndexRule::quadratic(1, 4, 5));
  SymbolicSet s = realize_from_pair(p);
  Boundaries bd = boundaries(s);
  auto lv = bd.left.interval_union_view();
  auto rv = bd.right.interval_union_view();
  REQUIRE(lv.has_value());
  REQUIRE(rv.has_value());
  CHECK(lv->lo == p.lefts);
  CHECK(rv->lo == p.rights);
}

TEST_CASE("counting consistency and shift coherence") {
  for (int trial = 0; trial < 50; ++trial) {
    SymbolicSet a = trial % 2 ? random_periodic() : random_interval_union();
    std::uniform_int_distribution<long long> n_d(0, 400);
    long long n = n_d(rng);
    CHECK(a.count_leq(n) == count_oracle(a, n));
    CHECK(a.count_leq(n) + a.complement().count_leq(n) == n + 1);
    SymbolicSet shifted = a.shift(1);
    for (long long i = 0; i <= 40; ++i) CHECK(shifted.member(i + 1) == a.member(i));
    SymbolicSet back = a.shift(3).shift(-3);
    for (long long i = 0; i <= 40; ++i) CHECK(back.member(i) == a.member(i));
  }
}

TEST_CASE("boundary laws on random sets") {
  for (int trial = 0; trial < 40; ++trial) {
    SymbolicSet a = trial % 2 ? random_periodic() : random_interval_union();
    if (a.is_empty()) continue;
    Boundaries bd = boundaries(a);
    for (long long i = 0; i <= 120; ++i) {
      if (bd.left.member(i)) {
        CHECK(a.member(i));
        CHECK_FALSE((i > 0 && a.member(i - 1)));
      }
      if (bd.right.member(i)) {
        CHECK(a.member(i));
        CHECK_FALSE(a.member(i + 1));
      }
      CHECK(bd.isolated.member(i) == (bd.left.member(i) && bd.right.member(i)));
    }
  }
}

TEST_CASE("finite boundary characterizes finite-or-cofinite") {
  auto finite_like = [](const SymbolicSet& s) {
    auto c = s.cardinality();
    return c == SetCardinality::Finite || c == SetCardinality::Cofinite;
  };
  for (int trial = 0; trial < 60; ++trial) {
    SymbolicSet a = trial % 3 == 0 ? random_interval_union() : random_periodic();
    if (a.is_empty()) continue;
    Boundaries bd = boundaries(a);
    CHECK((bd.left.cardinality() == SetCardinality::Finite) == finite_like(a));
    CHECK((bd.right.cardinality() == SetCardinality::Finite) == finite_like(a));
  }
}

TEST_CASE("prefix-only sets refuse queries past their horizon") {
  SymbolicSet p = SymbolicSet::prefix_only({1, 4, 6}, 10);
  CHECK(p.member(4));
  CHECK_FALSE(p.member(5));
  CHECK_THROWS_AS(p.member(11), beyond_horizon_error);
  CHECK_THROWS_AS(p.count_leq(11), beyond_horizon_error);
  CHECK_THROWS_AS(blocks(p, 20), beyond_horizon_error);
  // intersection propagates the tightest horizon
  SymbolicSet q = p.intersect(SymbolicSet::residue(2, {0}));
  CHECK(q.horizon() == 10);
  CHECK(q.member(4));
  CHECK_FALSE(q.member(1));
}

TEST_CASE("interval union construction rejects bad shapes") {
  CHECK_THROWS_AS(
      SymbolicSet::interval_union(IndexRule::affine(2, 0), IndexRule::affine(2, 1)),
      std::invalid_argument);  // adjacent blocks
  CHECK_THROWS_AS(
      SymbolicSet::interval_union(IndexRule::affine(5, 3), IndexRule::affine(5, 1)),
      std::invalid_argument);  // hi < lo
  CHECK_THROWS_AS(
      SymbolicSet::interval_union(IndexRule::affine(5, 0), IndexRule::affine(5, 1), {{2, 3}}),
      std::invalid_argument);  // head collides with the rule part
}
