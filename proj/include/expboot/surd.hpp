#pragma once

#include <compare>
#include <string>

#include "expboot/rational.hpp"

namespace expboot {

/// Exact value a + b*sqrt(r) in a single real quadratic extension of Q.
///
/// Canonical form: r is a positive integer with no square factor below
/// kSquareSearchBound (and not a perfect square); rational values carry
/// b = 0 and r = 0. Arithmetic between surds with different radicands is
/// allowed only when both live in the same field (r1 * r2 a perfect
/// square); otherwise a DomainError is raised.
class QuadraticSurd {
 public:
  static constexpr unsigned long kSquareSearchBound = 1'000'000;

  QuadraticSurd() = default;
  QuadraticSurd(Rational a);  // NOLINT(google-explicit-constructor)
  QuadraticSurd(Rational a, Rational b, Rational radicand);

  static QuadraticSurd from_int(long n, long d = 1) { return QuadraticSurd(make_rational(n, d)); }
  /// sqrt(r) for rational r >= 0.
  static QuadraticSurd sqrt(const Rational& r);

  const Rational& rational_part() const { return a_; }
  const Rational& irrational_coeff() const { return b_; }
  const Integer& radicand() const { return r_; }

  bool is_rational() const { return r_ == 0; }
  /// Precondition: is_rational().
  const Rational& as_rational() const;

  int sign() const;
  QuadraticSurd conjugate() const;
  QuadraticSurd inverse() const;

  Integer floor() const;
  Integer ceil() const;

  /// Correctly rounded (half away from zero) to `digits` fractional digits;
  /// trailing zeros and a trailing point are dropped.
  std::string to_decimal(int digits) const;
  /// "n/d" for rationals, "a+b*sqrt(r)" otherwise (each part "n" or "n/d").
  std::string to_exact_string() const;
  double to_double() const;

  friend QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y);
  QuadraticSurd operator-() const;

  friend bool operator==(const QuadraticSurd& x, const QuadraticSurd& y);
  friend std::strong_ordering operator<=>(const QuadraticSurd& x, const QuadraticSurd& y);

 private:
  Rational a_;
  Rational b_;
  Integer r_;  // 0 iff rational
};

/// Sign of x + y*sqrt(r) for r > 0 not a perfect square.
int surd_sign(const Rational& x, const Rational& y, const Integer& r);

/// Correctly rounded decimal rendering; see QuadraticSurd::to_decimal.
std::string surd_eval(const QuadraticSurd& value, int digits);

}  // namespace expboot
