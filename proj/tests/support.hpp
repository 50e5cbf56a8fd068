#pragma once

// Seeded generators and an independent floating oracle (GMP mpf at 256 bits)
// shared by the unit and acceptance tests.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>

#include "expboot/exponent.hpp"

namespace expboot::testing {

inline constexpr std::uint64_t kSeed = 20240917;
inline constexpr mp_bitcnt_t kOracleBits = 256;

class Gen {
 public:
  explicit Gen(std::uint64_t seed = kSeed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  /// Rational strictly inside (lo, hi) with a random denominator up to `max_den`.
  Rational rational_in(const Rational& lo, const Rational& hi, long max_den = 997) {
    const long den = integer(2, max_den);
    const long num = integer(1, den - 1);
    Rational r = lo + (hi - lo) * Rational(num, den);
    r.canonicalize();
    return r;
  }

  /// Rational strictly inside (lo, hi) when hi is a surd (e.g. p_0).
  Rational rational_below(const Rational& lo, const QuadraticSurd& hi) {
    for (;;) {
      Rational r = rational_in(lo, hi.ceil());
      if (QuadraticSurd(r) < hi) return r;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline Rational q(long n, long d = 1) { return make_rational(n, d); }
inline Exponent ex(long n, long d = 1) { return Exponent::of(n, d); }
inline Exponent ex(const Rational& r) { return Exponent(r); }

inline mpf_class oracle(const Rational& r) { return mpf_class(r, kOracleBits); }

inline mpf_class oracle(const QuadraticSurd& s) {
  mpf_class v(s.rational_part(), kOracleBits);
  if (!s.is_rational()) {
    mpf_class root(s.radicand(), kOracleBits);
    root = ::sqrt(root);
    v += mpf_class(s.irrational_coeff(), kOracleBits) * root;
  }
  return v;
}

inline double oracle_d(const QuadraticSurd& s) { return oracle(s).get_d(); }

/// Oracle-side p_0 = 8/5 + (16/15) sqrt(6), computed in mpf only.
inline mpf_class oracle_p0() {
  mpf_class six(6, kOracleBits);
  return mpf_class(q(8, 5), kOracleBits) + mpf_class(q(16, 15), kOracleBits) * ::sqrt(six);
}

/// Smaller root of the fixed-point quadratic evaluated in mpf.
inline mpf_class oracle_q_minus(const Rational& p_rat) {
  mpf_class p(p_rat, kOracleBits);
  mpf_class radicand = -15 * p * p + 48 * p + 64;
  mpf_class root = ::sqrt(radicand);
  return (3 * p * p - p * root) / (3 * p * p - 6 * p - 8);
}

inline std::string oracle_decimal(const mpf_class& v, int digits) {
  mpf_class scaled = v;
  for (int i = 0; i < digits; ++i) scaled *= 10;
  scaled += (scaled >= 0 ? 0.5 : -0.5);
  mpz_class n(scaled);
  std::string s = n.get_str();
  bool neg = !s.empty() && s[0] == '-';
  if (neg) s.erase(0, 1);
  if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return neg ? "-" + s : s;
}

}  // namespace expboot::testing
