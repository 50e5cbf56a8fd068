#pragma once

// Exact rationals backed by GMP, plus the parsing/printing conventions the
// rest of the engine relies on.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace expboot {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when an operation is applied outside the domain where the
/// corresponding exponent rule holds. The message names the failed bound.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for malformed textual input (numbers, exponent strings).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Rational make_rational(long num, long den = 1);

/// Accepts "n", "n/d" and decimal "x.y" (with optional sign). Decimals are
/// converted exactly: "4.15" -> 83/20.
Rational parse_rational(std::string_view text);

/// "n" when the denominator is 1, otherwise "n/d".
std::string to_exact_string(const Rational& value);

int sign(const Rational& value);
Integer floor(const Rational& value);
Rational pow10(int exponent);

}  // namespace expboot
