#include "expboot/exponent.hpp"

#include <utility>

namespace expboot {

namespace {

constexpr std::string_view kAlmostSuffix = "-o";

const QuadraticSurd& one() {
  static const QuadraticSurd value = QuadraticSurd::from_int(1);
  return value;
}

const QuadraticSurd& two() {
  static const QuadraticSurd value = QuadraticSurd::from_int(2);
  return value;
}

}  // namespace

Exponent::Exponent(QuadraticSurd value, bool almost) : value_(std::move(value)), almost_(almost) {
  if (value_->sign() <= 0) {
    throw DomainError("exponent must be positive, got " + value_->to_exact_string());
  }
}

Exponent Exponent::infinity(bool almost) {
  Exponent e;
  e.almost_ = almost;
  return e;
}

Exponent Exponent::parse(std::string_view text) {
  bool almost = false;
  if (text.size() > kAlmostSuffix.size() && text.ends_with(kAlmostSuffix)) {
    almost = true;
    text.remove_suffix(kAlmostSuffix.size());
  }
  if (text == "inf") return infinity(almost);
  constexpr std::string_view kSqrt = "*sqrt(";
  if (auto pos = text.find(kSqrt); pos != std::string_view::npos) {
    if (!text.ends_with(")")) throw ParseError("malformed surd '" + std::string(text) + "'");
    auto plus = text.find('+', 1);
    if (plus == std::string_view::npos || plus > pos) {
      throw ParseError("malformed surd '" + std::string(text) + "'");
    }
    Rational a = parse_rational(text.substr(0, plus));
    Rational b = parse_rational(text.substr(plus + 1, pos - plus - 1));
    auto r_text = text.substr(pos + kSqrt.size());
    r_text.remove_suffix(1);
    Rational r = parse_rational(r_text);
    try {
      return Exponent(QuadraticSurd(std::move(a), std::move(b), std::move(r)), almost);
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  try {
    return Exponent(parse_rational(text), almost);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

const QuadraticSurd& Exponent::value() const {
  if (!value_) throw DomainError("infinite exponent has no finite value");
  return *value_;
}

const Rational& Exponent::rational() const { return value().as_rational(); }

Exponent Exponent::with_almost(bool almost) const {
  Exponent e = *this;
  e.almost_ = almost;
  return e;
}

std::string Exponent::to_string() const {
  std::string body = value_ ? value_->to_exact_string() : std::string("inf");
  if (almost_) body += kAlmostSuffix;
  return body;
}

std::string Exponent::to_decimal(int digits) const {
  if (!value_) return "inf";
  return value_->to_decimal(digits);
}

std::strong_ordering exp_compare(const Exponent& x, const Exponent& y) {
  if (x.is_infinite() || y.is_infinite()) {
    if (x.is_infinite() && y.is_infinite()) return std::strong_ordering::equal;
    return x.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return x.value() <=> y.value();
}

namespace {

Exponent holder_value(const Exponent& a, const Exponent& b) {
  if (a.is_infinite()) return b.with_almost(false);
  if (b.is_infinite()) return a.with_almost(false);
  return Exponent(a.value() * b.value() / (a.value() + b.value()));
}

Exponent sobolev_value(const Exponent& s) {
  if (exp_compare(s, Exponent(two())) == 0) return Exponent::infinity();
  return Exponent(two() * s.value() / (two() - s.value()));
}

}  // namespace

Exponent exp_holder(const Exponent& a, const Exponent& b) {
  if (a.almost()) detail::check_increasing([&](const Exponent& x) { return holder_value(x, b); }, a, QuadraticSurd());
  if (b.almost()) detail::check_increasing([&](const Exponent& x) { return holder_value(a, x); }, b, QuadraticSurd());
  return holder_value(a, b).with_almost(a.almost() || b.almost());
}

Exponent exp_sobolev_conj_2d(const Exponent& s) {
  if (s.is_infinite() || s.value() > two()) {
    throw DomainError("Sobolev conjugate needs s <= 2, got " + s.to_string());
  }
  if (s.value() < one()) throw DomainError("Sobolev conjugate needs s >= 1, got " + s.to_string());
  if (s.value() == two()) return Exponent::infinity(true);
  if (s.almost()) detail::check_increasing(sobolev_value, s, one());
  return sobolev_value(s).with_almost(s.almost());
}

Exponent exp_sobolev_conj_2d_inverse(const Exponent& t) {
  if (t.is_infinite()) return Exponent(two(), t.almost());
  return Exponent(two() * t.value() / (two() + t.value()), t.almost());
}

}  // namespace expboot
