#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace utorsion {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

// floor(a/b) for b > 0
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int floor_rat(const Rat& r) { return floor_div(num(r), den(r)); }

inline Int pow_int(const Int& base, unsigned long exp) {
  Int result = 1, b = base;
  while (exp) {
    if (exp & 1) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

inline Rat pow_rat(const Rat& base, unsigned long exp) {
  return Rat(pow_int(num(base), exp), pow_int(den(base), exp));
}

// Largest s with s*s <= n (n >= 0).
inline Int isqrt(const Int& n) {
  if (n < 0) throw std::domain_error("isqrt of negative value");
  if (n == 0) return 0;
  Int x = Int(1) << ((boost::multiprecision::msb(n) / 2) + 1);
  for (;;) {
    Int y = (x + n / x) / 2;
    if (y >= x) break;
    x = y;
  }
  return x;
}

inline std::string rat_str(const Rat& r) { return r.str(); }

// Parses "p", "p/q" or a decimal like "0.25" into an exact rational.
inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int p(s.substr(0, slash));
    Int q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rat(p, q);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    Int p(digits);
    Int q = pow_int(10, static_cast<unsigned long>(s.size() - dot - 1));
    return Rat(p, q);
  }
  return Rat(Int(s));
}

// Coarse decimal rendering for human-readable reports; exact values stay rational.
inline double rat_approx(const Rat& r) { return static_cast<double>(r); }

class beyond_horizon_error : public std::runtime_error {
 public:
  explicit beyond_horizon_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace utorsion
