#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "expboot/surd.hpp"

namespace expboot {

/// An integrability exponent: a positive exact value (rational or quadratic
/// surd) or +infinity, together with the "almost" flag. An almost exponent
/// p-o means every exponent strictly below p is attained, p itself is not.
///
/// Equality (==) compares value and flag; ordering via exp_compare ignores
/// the flag.
class Exponent {
 public:
  /// Throws DomainError unless value > 0.
  explicit Exponent(QuadraticSurd value, bool almost = false);
  explicit Exponent(const Rational& value, bool almost = false) : Exponent(QuadraticSurd(value), almost) {}

  static Exponent of(long num, long den = 1) { return Exponent(make_rational(num, den)); }
  static Exponent infinity(bool almost = false);
  /// Inverse of to_string(): "n", "n/d", "a+b*sqrt(r)", "inf", each with an
  /// optional "-o" suffix.
  static Exponent parse(std::string_view text);

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }
  bool is_rational() const { return value_.has_value() && value_->is_rational(); }
  bool is_surd() const { return value_.has_value() && !value_->is_rational(); }
  bool almost() const { return almost_; }

  /// Precondition: is_finite().
  const QuadraticSurd& value() const;
  /// Precondition: is_rational().
  const Rational& rational() const;

  Exponent with_almost(bool almost) const;

  std::string to_string() const;
  /// Decimal rendering without the almost suffix; "inf" for infinity.
  std::string to_decimal(int digits) const;

  friend bool operator==(const Exponent& x, const Exponent& y) = default;

 private:
  Exponent() = default;

  std::optional<QuadraticSurd> value_;
  bool almost_ = false;
};

/// Exact total order on values; infinity is above every finite value and the
/// almost flag does not participate.
std::strong_ordering exp_compare(const Exponent& x, const Exponent& y);

inline bool exp_less(const Exponent& x, const Exponent& y) { return exp_compare(x, y) < 0; }
inline bool exp_same(const Exponent& x, const Exponent& y) { return exp_compare(x, y) == 0; }

/// 1/r = 1/a + 1/b. Infinity is the identity; almost flags are OR-ed.
Exponent exp_holder(const Exponent& a, const Exponent& b);

/// Two-dimensional Sobolev conjugate 2s/(2-s) on [1, 2]; s = 2 maps to inf-o.
Exponent exp_sobolev_conj_2d(const Exponent& s);

/// Inverse of the 2D Sobolev conjugate: 2t/(2+t), with inf -> 2.
Exponent exp_sobolev_conj_2d_inverse(const Exponent& t);

namespace detail {

/// Debug-only check that an exponent map is strictly increasing near `at`,
/// sampled at `at` and at a point just below it (between `at` and the
/// domain's lower bound). Called before propagating an almost flag through
/// the map. No-op in release builds or when `at` is infinite.
template <class Map>
void check_increasing(const Map& map, const Exponent& at, const QuadraticSurd& lower_bound);

}  // namespace detail

}  // namespace expboot

#include "expboot/exponent_inl.hpp"
