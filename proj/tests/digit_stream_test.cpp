#include "utorsion/digit_stream.hpp"

#include <doctest.h>

#include <random>

using namespace utorsion;

namespace {

// Independent check of the canonical-representation equations: the produced
// digits must satisfy x = sum c_i/u_i + r/u_n with 0 <= r < 1 and 0 <= c_i < b_i.
void check_expansion(const RatioSequence& seq, const DigitStream& d, const Rat& x, long long n) {
  Rat acc = 0;
  for (long long i = 1; i <= n; ++i) {
    Int c = d.digit_at(i);
    CHECK(c >= 0);
    CHECK(c < seq.ratio_at(i));
    acc += Rat(c, seq.scale_at(i));
  }
  Rat remainder = (x - acc) * Rat(seq.scale_at(n));
  CHECK(remainder >= 0);
  CHECK(remainder < 1);
}

// Fractional-part oracle: exact partial sum of c_n u_k / u_n plus a tail bound.
std::pair<Rat, Rat> frac_oracle(const DigitStream& d, long long k, int steps) {
  Rat s = 0;
  Rat scale = 1;
  for (long long n = k + 1; n <= k + steps; ++n) {
    scale /= Rat(d.ratio()->ratio_at(n));
    s += Rat(d.digit_at(n)) * scale;
  }
  return {s, s + scale};
}

std::mt19937_64 rng(424242);

RatioSequence::Ptr random_ratio() {
  std::uniform_int_distribution<int> kind_d(0, 3), b_d(2, 9), m_d(2, 5);
  switch (kind_d(rng)) {
    case 0:
      return RatioSequence::constant(b_d(rng));
    case 1:
      return RatioSequence::affine();
    case 2: {
      long long m = m_d(rng);
      return RatioSequence::piecewise(SymbolicSet::residue(m, {0}), RatioRule::constant(b_d(rng)),
                                      RatioRule::constant(b_d(rng)));
    }
    default:
      return RatioSequence::explicit_prefix({b_d(rng), b_d(rng), b_d(rng)},
                                            RatioRule::constant(b_d(rng)));
  }
}

}  // namespace

TEST_CASE("greedy extraction") {
  auto c2 = RatioSequence::constant(2);
  auto d = DigitStream::from_rational(c2, Rat(5, 8));
  std::vector<long long> want = {1, 0, 1, 0, 0};
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(d->digit_at(i + 1) == want[i]);

  auto affine = RatioSequence::affine();
  auto third = DigitStream::from_rational(affine, Rat(1, 3));
  CHECK(third->digit_at(1) == 0);
  CHECK(third->digit_at(2) == 2);  // c_2 = b_2 - 1 is fine: the tail is zero
  CHECK(third->digit_at(3) == 0);
  CHECK(third->digit_at(9) == 0);

  auto zero = DigitStream::from_rational(c2, Rat(0));
  for (long long n = 1; n <= 10; ++n) CHECK(zero->digit_at(n) == 0);

  CHECK_THROWS_AS(DigitStream::from_rational(c2, Rat(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(DigitStream::from_rational(c2, Rat(-1, 2)), std::invalid_argument);
}

TEST_CASE("greedy expansions satisfy the defining equations") {
  std::uniform_int_distribution<long long> q_d(1, 500);
  for (int trial = 0; trial < 40; ++trial) {
    long long q = q_d(rng);
    std::uniform_int_distribution<long long> p_d(0, q - 1);
    Rat x(p_d(rng), q);
    auto seq = random_ratio();
    auto d = DigitStream::from_rational(seq, x);
    check_expansion(*seq, *d, x, 25);
  }
}

TEST_CASE("eval with tail") {
  auto affine = RatioSequence::affine();
  auto third = DigitStream::from_rational(affine, Rat(1, 3));
  EvalResult ev = third->eval_with_tail(2);
  CHECK(ev.lo == Rat(1, 3));
  CHECK(ev.hi == Rat(1, 2));
  REQUIRE(ev.exact.has_value());
  CHECK(*ev.exact == Rat(1, 3));

  // a full block of digits b-1 telescopes to 1/u_{l-1} - 1/u_r
  auto seq = random_ratio();
  SymbolicSet block = SymbolicSet::finite({2, 3, 4, 5});
  auto flat = DigitStream::pattern(seq, {{block, ValueRule::b_minus_one()}});
  EvalResult ef = flat->eval_with_tail(5);
  REQUIRE(ef.exact.has_value());
  CHECK(*ef.exact == Rat(1, seq->scale_at(1)) - Rat(1, seq->scale_at(5)));

  auto zero = DigitStream::from_rational(affine, Rat(0));
  EvalResult ez = zero->eval_with_tail(5);
  CHECK(ez.lo == 0);
  CHECK(ez.hi == Rat(1, affine->scale_at(5)));
  REQUIRE(ez.exact.has_value());
  CHECK(*ez.exact == 0);
}

TEST_CASE("telescoping identity") {
  std::uniform_int_distribution<long long> l_d(1, 30);
  for (int trial = 0; trial < 60; ++trial) {
    auto seq = random_ratio();
    long long l = l_d(rng), r = l_d(rng);
    if (l > r) std::swap(l, r);
    Rat sum = 0;
    for (long long i = l; i <= r; ++i)
      sum += Rat(seq->ratio_at(i) - 1, seq->scale_at(i));
    CHECK(sum == Rat(1, seq->scale_at(l - 1)) - Rat(1, seq->scale_at(r)));
  }
}

TEST_CASE("round trip through eval") {
  std::uniform_int_distribution<long long> q_d(2, 10000);
  for (int trial = 0; trial < 30; ++trial) {
    long long q = q_d(rng);
    std::uniform_int_distribution<long long> p_d(0, q - 1);
    Rat x(p_d(rng), q);
    auto seq = random_ratio();
    auto d = DigitStream::from_rational(seq, x);
    for (long long n : {1LL, 5LL, 12LL}) {
      EvalResult ev = d->eval_with_tail(n);
      CHECK(ev.lo <= x);
      CHECK(x <= ev.hi);
      CHECK(ev.hi - ev.lo == Rat(1, seq->scale_at(n)));
    }
  }
}

TEST_CASE("circle norms, exact mode") {
  // x = sum 1/3^n = 1/2: every u_k x sits exactly at the pole of the norm
  auto c3 = RatioSequence::constant(3);
  auto half = DigitStream::from_rational(c3, Rat(1, 2));
  for (long long k : {0LL, 1LL, 7LL, 33LL}) {
    NormInterval nv = half->circle_norm(k, Rat(1, 1000000), 512);
    CHECK(nv.exact);
    CHECK(nv.lo == Rat(1, 2));
    CHECK(nv.hi == Rat(1, 2));
  }

  auto c2 = RatioSequence::constant(2);
  auto h2 = DigitStream::from_rational(c2, Rat(1, 2));
  NormInterval n0 = h2->circle_norm(0, Rat(1, 1000000), 512);
  CHECK(n0.exact);
  CHECK(n0.lo == Rat(1, 2));
}

TEST_CASE("circle norms, interval mode") {
  // x = sum 1/(2n)! under u_n = (n+1)!: at k = 3 the fractional part is
  // 24/720 + 24/40320 + ... ≈ 0.033934
  auto affine = RatioSequence::affine();
  auto ce = DigitStream::pattern(affine, {{SymbolicSet::residue(2, {1}), ValueRule::constant(1)}});
  NormInterval nv = ce->circle_norm(3, Rat(1, 1000000), 512);
  CHECK(nv.resolved);
  auto [olo, ohi] = frac_oracle(*ce, 3, 30);
  CHECK(nv.frac_lo <= ohi);
  CHECK(olo <= nv.frac_hi);
  CHECK(rat_approx(nv.lo) == doctest::Approx(0.0339339).epsilon(1e-4));
  CHECK(nv.hi - nv.lo < Rat(1, 1000000));
}

TEST_CASE("norm soundness against the partial-sum oracle") {
  std::uniform_int_distribution<long long> b_d(2, 5), m_d(2, 6), k_d(0, 20);
  for (int trial = 0; trial < 25; ++trial) {
    auto seq = RatioSequence::constant(b_d(rng));
    long long m = m_d(rng);
    auto d = DigitStream::pattern(seq, {{SymbolicSet::residue(m, {1 % m}), ValueRule::constant(1)}});
    long long k = k_d(rng);
    NormInterval nv = d->circle_norm(k, Rat(1, 1000000000), 512);
    auto [olo, ohi] = frac_oracle(*d, k, 40);
    CHECK(nv.frac_lo <= ohi);
    CHECK(olo <= nv.frac_hi);
    if (nv.exact) {
      CHECK(nv.frac_lo >= olo);
      CHECK(nv.frac_lo <= ohi);
    }
  }
}

TEST_CASE("supports") {
  auto affine = RatioSequence::affine();
  auto ce = DigitStream::pattern(affine, {{SymbolicSet::residue(2, {1}), ValueRule::constant(1)}});
  auto [s, sb] = ce->supports(64);
  CHECK(s.structurally_equal(SymbolicSet::residue(2, {1})));
  // c_1 = 1 = b_1 - 1 exactly at index 1, so the b-support is {1}
  CHECK(sb.structurally_equal(SymbolicSet::finite({1})));

  auto zero = DigitStream::from_rational(affine, Rat(0));
  auto [zs, zsb] = zero->supports(64);
  CHECK(zs.is_empty());
  CHECK(zsb.is_empty());

  // b-1 digits: support and b-support coincide
  auto c2 = RatioSequence::constant(2);
  SymbolicSet x = SymbolicSet::interval_union(IndexRule::quadratic(4, 8, 4),
                                              IndexRule::quadratic(4, 12, 9), {{1, 1}});
  auto nowc = DigitStream::pattern(c2, {{x, ValueRule::b_minus_one()}});
  auto [ns, nsb] = nowc->supports(64);
  CHECK(ns.structurally_equal(x));
  CHECK(nsb.structurally_equal(x));
}

TEST_CASE("flat truncation") {
  auto c2 = RatioSequence::constant(2);
  SymbolicSet x = SymbolicSet::interval_union(IndexRule::quadratic(4, 8, 4),
                                              IndexRule::quadratic(4, 12, 9), {{1, 1}});
  auto nowc = DigitStream::pattern(c2, {{x, ValueRule::b_minus_one()}});
  auto flat = nowc->flat_truncation(64);
  for (long long n = 1; n <= 40; ++n) CHECK(flat->digit_at(n) == nowc->digit_at(n));
  auto flat2 = flat->flat_truncation(64);
  for (long long n = 1; n <= 40; ++n) CHECK(flat2->digit_at(n) == flat->digit_at(n));

  // explicit digits (2,1,2,0,...) under b = 3: only the 2s survive
  auto c3 = RatioSequence::constant(3);
  auto d = DigitStream::pattern(c3, {}, {{1, 2}, {2, 1}, {3, 2}});
  auto f = d->flat_truncation(64);
  CHECK(f->digit_at(1) == 2);
  CHECK(f->digit_at(2) == 0);
  CHECK(f->digit_at(3) == 2);
  CHECK(f->digit_at(4) == 0);
}

TEST_CASE("atomic components") {
  auto c2 = RatioSequence::constant(2);
  // S_b = [2,3] ∪ [6,7] ∪ [10,11] ∪ ... : blocks 4n+2..4n+3
  SymbolicSet sb = SymbolicSet::interval_union(IndexRule::affine(4, 2), IndexRule::affine(4, 3));
  auto d = DigitStream::pattern(c2, {{sb, ValueRule::b_minus_one()}});
  auto [left, right] = d->atomic_components(64);
  auto [ls, lsb] = left->supports(64);
  auto [rs, rsb] = right->supports(64);
  CHECK(ls.structurally_equal(SymbolicSet::interval_union(IndexRule::affine(4, 1),
                                                           IndexRule::affine(4, 1))));
  CHECK(rs.structurally_equal(SymbolicSet::interval_union(IndexRule::affine(4, 3),
                                                           IndexRule::affine(4, 3))));
  CHECK(left->is_atomic(64).holds_val());
  CHECK(right->is_atomic(64).holds_val());

  // the defining identity x-flat = alpha_left - alpha_right at block ends
  for (long long n : {3LL, 7LL, 11LL, 19LL}) {
    Rat xb = d->eval_with_tail(n).lo;
    Rat al = left->eval_with_tail(n).lo;
    Rat ar = right->eval_with_tail(n).lo;
    CHECK(xb == al - ar);
  }

  // finite b-support has no atomic decomposition (b = 4 keeps the sparse
  // digits strictly below b-1)
  auto c4 = RatioSequence::constant(4);
  auto fin = DigitStream::pattern(
      c4, {{SymbolicSet::finite({2, 3}), ValueRule::b_minus_one()},
           {SymbolicSet::residue(3, {1}).intersect(SymbolicSet::tail_from(5)),
            ValueRule::constant(1)}});
  CHECK_THROWS_AS(fin->atomic_components(64), std::domain_error);
}

TEST_CASE("is_atomic") {
  auto c2 = RatioSequence::constant(2);
  auto c5 = RatioSequence::constant(5);
  SymbolicSet s = SymbolicSet::residue(3, {2});
  CHECK(DigitStream::pattern(c2, {{s, ValueRule::constant(1)}})->is_atomic(128).holds_val());
  CHECK(DigitStream::pattern(c5, {{s, ValueRule::constant(2)}})->is_atomic(128).fails_val());
  CHECK(DigitStream::pattern(c5, {{SymbolicSet::finite({5, 6}), ValueRule::constant(1)}})
            ->is_atomic(128)
            .fails_val());
}

TEST_CASE("digit equivalence") {
  auto c2 = RatioSequence::constant(2);
  auto d = DigitStream::pattern(c2, {{SymbolicSet::residue(2, {0}).intersect(
                                          SymbolicSet::tail_from(2)),
                                      ValueRule::b_minus_one()}});
  auto ideal = IdealSpec::density(1);
  CHECK(digit_equiv(*d, *d, *ideal, 128).holds_val());

  // patch on the perfect squares: a density-zero disagreement
  SymbolicSet squares = SymbolicSet::interval_union(IndexRule::quadratic(1, 4, 4),
                                                    IndexRule::quadratic(1, 4, 4), {{0, 1}});
  auto patched = DigitStream::modified(d, {{squares, ValueRule::constant(0)}});
  CHECK(digit_equiv(*patched, *d, *ideal, 128).holds_val());

  // x vs its flat truncation when S \ S_b is small in the ideal; b = 3 keeps
  // the sparse digits strictly below b-1
  auto c3 = RatioSequence::constant(3);
  SymbolicSet odd_squares = SymbolicSet::interval_union(IndexRule::quadratic(4, 4, 1),
                                                        IndexRule::quadratic(4, 4, 1));
  auto mixed = DigitStream::pattern(
      c3, {{SymbolicSet::residue(2, {0}).intersect(SymbolicSet::tail_from(2)),
            ValueRule::b_minus_one()},
           {odd_squares, ValueRule::constant(1)}});
  auto flat = mixed->flat_truncation(128);
  CHECK(digit_equiv(*mixed, *flat, *ideal, 128).holds_val());
  // but not with respect to Fin
  auto fin = IdealSpec::fin();
  CHECK(digit_equiv(*mixed, *flat, *fin, 128).fails_val());

  auto other_ratio = RatioSequence::constant(2);
  auto e = DigitStream::pattern(other_ratio, {});
  CHECK_THROWS_AS(digit_equiv(*d, *e, *ideal, 128), std::invalid_argument);
}

TEST_CASE("complement streams sum to one on recognized patterns") {
  std::uniform_int_distribution<long long> b_d(2, 6), m_d(2, 6);
  std::mt19937_64 local(99);
  for (int trial = 0; trial < 10; ++trial) {
    long long b = b_d(local), m = m_d(local);
    auto seq = RatioSequence::constant(b);
    SymbolicSet s = SymbolicSet::residue(m, {1 % m, (m - 1) % m}).intersect(SymbolicSet::tail_from(1));
    auto x = DigitStream::pattern(seq, {{s, ValueRule::b_minus_one()}});
    auto y = DigitStream::pattern(
        seq, {{s.complement().intersect(SymbolicSet::tail_from(1)), ValueRule::b_minus_one()}});
    auto ex = x->eval_with_tail(1);
    auto ey = y->eval_with_tail(1);
    REQUIRE(ex.exact.has_value());
    REQUIRE(ey.exact.has_value());
    CHECK(*ex.exact + *ey.exact == 1);
  }
}

TEST_CASE("representation validity is enforced") {
  auto c2 = RatioSequence::constant(2);
  CHECK_THROWS_AS(
      DigitStream::pattern(c2, {{SymbolicSet::naturals(), ValueRule::b_minus_one()}}),
      std::invalid_argument);
  // leaving any infinite gap makes it legal
  CHECK_NOTHROW(DigitStream::pattern(
      c2, {{SymbolicSet::residue(2, {0}).intersect(SymbolicSet::tail_from(1)),
            ValueRule::b_minus_one()}}));
}
