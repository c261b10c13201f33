#pragma once

#include "utorsion/rational.hpp"

#include <cstdint>
#include <string>

namespace utorsion {

// Integer polynomial rule n |-> a2*n^2 + a1*n + a0, evaluated on n = 0,1,2,...
// Degree <= 2 keeps counting, boundary and gap questions exactly decidable.
struct IndexRule {
  long long a2 = 0;
  long long a1 = 0;
  long long a0 = 0;

  static IndexRule constant(long long c) { return {0, 0, c}; }
  static IndexRule affine(long long step, long long offset) { return {0, step, offset}; }
  static IndexRule quadratic(long long a2, long long a1, long long a0) { return {a2, a1, a0}; }

  Int at(long long n) const {
    Int m = n;
    return Int(a2) * m * m + Int(a1) * m + Int(a0);
  }

  bool is_affine() const { return a2 == 0; }
  bool is_constant() const { return a2 == 0 && a1 == 0; }

  IndexRule plus(long long k) const { return {a2, a1, a0 + k}; }
  // Rule evaluated at n + s instead of n.
  IndexRule composed_shift(long long s) const {
    return {a2, 2 * a2 * s + a1, a2 * s * s + a1 * s + a0};
  }

  bool operator==(const IndexRule&) const = default;

  std::string str() const;
};

// Whether a2*n^2 + a1*n + a0 > 0 for every integer n >= 0. Exact.
bool poly_positive_on_naturals(const Int& a2, const Int& a1, const Int& a0);

// Whether the rule is strictly increasing on n >= 0.
bool strictly_increasing_on_naturals(const IndexRule& r);

// Largest n >= 0 with r.at(n) <= bound, or -1 if none. Requires r strictly increasing.
long long last_index_leq(const IndexRule& r, const Int& bound);

// Sum_{n=0}^{count-1} r.at(n), exact (Faulhaber).
Int sum_prefix(const IndexRule& r, const Int& count);

}  // namespace utorsion
