#include "utorsion/ratio_sequence.hpp"

#include <doctest.h>

#include <random>
#include <thread>

using namespace utorsion;

TEST_CASE("ratio values") {
  CHECK(RatioSequence::affine()->ratio_at(3) == 4);
  CHECK(RatioSequence::constant(2)->ratio_at(10) == 2);

  SymbolicSet s = SymbolicSet::residue(2, {0});  // 5 lies outside
  auto pw = RatioSequence::piecewise(s, RatioRule::constant(2), RatioRule::pow_two());
  CHECK(pw->ratio_at(5) == 32);
  CHECK(pw->ratio_at(4) == 2);

  CHECK_THROWS_AS(RatioSequence::affine()->ratio_at(0), std::domain_error);
  CHECK_THROWS_AS(RatioSequence::constant(1), std::invalid_argument);
}

TEST_CASE("scale values") {
  CHECK(RatioSequence::affine()->scale_at(4) == 120);  // 5!
  CHECK(RatioSequence::constant(7)->scale_at(0) == 1);
  CHECK(RatioSequence::constant(2)->scale_at(10) == 1024);
  auto prefix = RatioSequence::explicit_prefix({3, 5}, RatioRule::constant(2));
  CHECK(prefix->scale_at(3) == 30);
}

TEST_CASE("b-boundedness classification") {
  auto affine = RatioSequence::affine();
  SymbolicSet odds = SymbolicSet::residue(2, {1});
  CHECK(affine->classify_bbound(odds, 64).divergent());

  // finite sets are b-bounded by convention, with the observed bound
  BClassification fin = affine->classify_bbound(SymbolicSet::finite({3, 7}), 64);
  CHECK(fin.bounded());
  CHECK(fin.bound == 8);
  BClassification empty_cls = affine->classify_bbound(SymbolicSet::empty(), 64);
  CHECK(empty_cls.bounded());
  CHECK(empty_cls.bound == 2);

  // b = 2 on odds, b = n on evens: the even side diverges
  auto pw = RatioSequence::piecewise(odds, RatioRule::constant(2), RatioRule::identity_n());
  CHECK(pw->classify_bbound(SymbolicSet::residue(2, {0}), 64).divergent());
  CHECK(pw->classify_bbound(odds, 64).bounded());
  CHECK(pw->classify_bbound(SymbolicSet::naturals(), 64).tag == BClassification::Tag::Mixed);

  auto opaque = RatioSequence::opaque([](long long n) { return 2 + n % 3; });
  CHECK(opaque->classify_bbound(SymbolicSet::residue(3, {1}), 64).tag ==
        BClassification::Tag::Unknown);
}

TEST_CASE("classification soundness on samples") {
  SymbolicSet odds = SymbolicSet::residue(2, {1});
  auto pw = RatioSequence::piecewise(odds, RatioRule::constant(3), RatioRule::n_plus_one());
  BClassification cls = pw->classify_bbound(odds, 128);
  REQUIRE(cls.bounded());
  for (long long n = 1; n <= 128; ++n) {
    if (odds.member(n)) CHECK(pw->ratio_at(n) <= cls.bound);
  }
}

TEST_CASE("divisibility and growth invariants") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> kind_d(0, 2), b_d(2, 9);
  for (int trial = 0; trial < 20; ++trial) {
    RatioSequence::Ptr seq;
    switch (kind_d(rng)) {
      case 0:
        seq = RatioSequence::constant(b_d(rng));
        break;
      case 1:
        seq = RatioSequence::affine();
        break;
      default:
        seq = RatioSequence::piecewise(SymbolicSet::residue(3, {0, 2}),
                                       RatioRule::constant(b_d(rng)), RatioRule::constant(b_d(rng)));
    }
    for (long long n = 1; n <= 30; ++n) {
      CHECK(seq->scale_at(n) % seq->scale_at(n - 1) == 0);
      CHECK(seq->scale_at(n) >= 2 * seq->scale_at(n - 1));
    }
    for (long long m = 0; m <= 30; m += 7)
      for (long long n = m; n <= 30; n += 5) CHECK(seq->scale_at(n) % seq->scale_at(m) == 0);
  }
}

TEST_CASE("where_ratio_equals") {
  CHECK(RatioSequence::affine()->where_ratio_equals(2).structurally_equal(SymbolicSet::finite({1})));
  CHECK(RatioSequence::constant(3)->where_ratio_equals(3).member(17));
  CHECK(RatioSequence::constant(3)->where_ratio_equals(4).is_empty());
  SymbolicSet odds = SymbolicSet::residue(2, {1});
  auto pw = RatioSequence::piecewise(odds, RatioRule::constant(2), RatioRule::pow_two());
  SymbolicSet eq2 = pw->where_ratio_equals(2);
  CHECK(eq2.member(3));   // on part
  CHECK_FALSE(eq2.member(4));  // 2^4
  CHECK(eq2.member(1));   // 1 is odd
}

TEST_CASE("memo is consistent under concurrent reads") {
  auto seq = RatioSequence::affine();
  std::vector<std::thread> threads;
  std::vector<Int> results(4);
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] { results[t] = seq->scale_at(200 + t); });
  }
  for (auto& th : threads) th.join();
  for (int t = 0; t < 4; ++t) CHECK(results[t] == seq->scale_at(200 + t));
}
