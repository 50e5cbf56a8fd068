#include "expboot/surd.hpp"

#include <cmath>
#include <utility>

namespace expboot {

namespace {

bool is_perfect_square(const Integer& n) { return mpz_perfect_square_p(n.get_mpz_t()) != 0; }

Integer isqrt(const Integer& n) {
  Integer root;
  mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
  return root;
}

// Splits n > 0 into square * squarefree. Trial division stops at the cube
// root of the remaining cofactor (so what is left has at most two prime
// factors and is either a square or squarefree) or at kSquareSearchBound.
std::pair<Integer, Integer> split_square(Integer n) {
  Integer square_root = 1;
  Integer free_part = 1;
  Integer f = 2;
  Integer removed;
  while (f <= QuadraticSurd::kSquareSearchBound && f * f * f <= n) {
    if (mpz_divisible_p(n.get_mpz_t(), f.get_mpz_t())) {
      mp_bitcnt_t e = mpz_remove(n.get_mpz_t(), n.get_mpz_t(), f.get_mpz_t());
      for (mp_bitcnt_t i = 0; i < e / 2; ++i) square_root *= f;
      if (e % 2 == 1) free_part *= f;
    }
    f += (f == 2) ? 1 : 2;
  }
  if (is_perfect_square(n)) {
    square_root *= isqrt(n);
  } else {
    free_part *= n;
  }
  return {square_root, free_part};
}

struct Aligned {
  Rational a1, b1, a2, b2;
  Integer r;
};

// Expresses both operands over a common radicand.
Aligned align(const QuadraticSurd& x, const QuadraticSurd& y) {
  const Integer& rx = x.radicand();
  const Integer& ry = y.radicand();
  if (y.is_rational() || rx == ry) {
    return {x.rational_part(), x.irrational_coeff(), y.rational_part(), y.irrational_coeff(), rx};
  }
  if (x.is_rational()) {
    return {x.rational_part(), x.irrational_coeff(), y.rational_part(), y.irrational_coeff(), ry};
  }
  Integer product = rx * ry;
  if (!is_perfect_square(product)) {
    throw DomainError("surds over different quadratic fields: sqrt(" + rx.get_str() + ") and sqrt(" +
                      ry.get_str() + ")");
  }
  Integer k = isqrt(product);
  // sqrt(ry) = (k / rx) * sqrt(rx) and symmetrically.
  if (rx < ry) {
    return {x.rational_part(), x.irrational_coeff(), y.rational_part(),
            Rational(y.irrational_coeff() * Rational(k, rx)), rx};
  }
  return {x.rational_part(), Rational(x.irrational_coeff() * Rational(k, ry)), y.rational_part(),
          y.irrational_coeff(), ry};
}

QuadraticSurd build(Rational a, Rational b, const Integer& r) {
  if (b == 0 || r == 0) return QuadraticSurd(std::move(a));
  return QuadraticSurd(std::move(a), std::move(b), Rational(r));
}

}  // namespace

QuadraticSurd::QuadraticSurd(Rational a) : a_(std::move(a)), b_(0), r_(0) { a_.canonicalize(); }

QuadraticSurd::QuadraticSurd(Rational a, Rational b, Rational radicand)
    : a_(std::move(a)), b_(std::move(b)), r_(0) {
  a_.canonicalize();
  b_.canonicalize();
  radicand.canonicalize();
  if (radicand < 0) throw DomainError("negative radicand " + expboot::to_exact_string(radicand));
  if (b_ == 0 || radicand == 0) {
    b_ = 0;
    return;
  }
  // sqrt(n/d) = sqrt(n*d) / d
  Integer n = radicand.get_num() * radicand.get_den();
  b_ /= Rational(radicand.get_den());
  auto [root, free_part] = split_square(n);
  b_ *= Rational(root);
  if (free_part == 1) {
    a_ += b_;
    b_ = 0;
    return;
  }
  r_ = free_part;
}

QuadraticSurd QuadraticSurd::sqrt(const Rational& r) { return QuadraticSurd(Rational(0), Rational(1), r); }

const Rational& QuadraticSurd::as_rational() const {
  if (!is_rational()) throw DomainError("value " + to_exact_string() + " is not rational");
  return a_;
}

int surd_sign(const Rational& x, const Rational& y, const Integer& r) {
  int sx = sgn(x);
  int sy = sgn(y);
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sy;
  // Opposite signs: whichever has the larger square dominates.
  Rational x2 = x * x;
  Rational y2r = y * y * Rational(r);
  int c = cmp(x2, y2r);
  return c > 0 ? sx : sy;
}

int QuadraticSurd::sign() const {
  if (is_rational()) return sgn(a_);
  return surd_sign(a_, b_, r_);
}

QuadraticSurd QuadraticSurd::conjugate() const { return build(a_, Rational(-b_), r_); }

QuadraticSurd QuadraticSurd::inverse() const {
  if (sign() == 0) throw DomainError("division by zero");
  if (is_rational()) return QuadraticSurd(Rational(1 / a_));
  Rational norm = a_ * a_ - b_ * b_ * Rational(r_);
  return build(Rational(a_ / norm), Rational(-b_ / norm), r_);
}

QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y) {
  auto al = align(x, y);
  return build(Rational(al.a1 + al.a2), Rational(al.b1 + al.b2), al.r);
}

QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y) {
  auto al = align(x, y);
  return build(Rational(al.a1 - al.a2), Rational(al.b1 - al.b2), al.r);
}

QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y) {
  auto al = align(x, y);
  Rational a = al.a1 * al.a2 + al.b1 * al.b2 * Rational(al.r);
  Rational b = al.a1 * al.b2 + al.a2 * al.b1;
  return build(std::move(a), std::move(b), al.r);
}

QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y) { return x * y.inverse(); }

QuadraticSurd QuadraticSurd::operator-() const { return build(Rational(-a_), Rational(-b_), r_); }

bool operator==(const QuadraticSurd& x, const QuadraticSurd& y) {
  if (x.r_ == y.r_) return x.a_ == y.a_ && x.b_ == y.b_;
  if (x.is_rational() || y.is_rational()) return false;
  if (!is_perfect_square(Integer(x.r_ * y.r_))) return false;
  return (x - y).sign() == 0;
}

std::strong_ordering operator<=>(const QuadraticSurd& x, const QuadraticSurd& y) {
  int s = (x - y).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Integer QuadraticSurd::floor() const {
  if (is_rational()) return expboot::floor(a_);
  // Estimate with 80 fractional bits, then correct exactly.
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, 80);
  Rational scaled_b = b_ * Rational(scale);
  Rational radicand_term = scaled_b * scaled_b * Rational(r_);
  Integer root = isqrt(expboot::floor(radicand_term));
  Integer term = sgn(b_) > 0 ? root : Integer(-root - 1);
  Integer estimate = expboot::floor(Rational((a_ * Rational(scale) + Rational(term)) / Rational(scale)));
  while (surd_sign(Rational(a_ - Rational(estimate)), b_, r_) < 0) estimate -= 1;
  while (surd_sign(Rational(a_ - Rational(estimate + 1)), b_, r_) >= 0) estimate += 1;
  return estimate;
}

Integer QuadraticSurd::ceil() const {
  Integer f = floor();
  if ((*this - QuadraticSurd(Rational(f))).sign() == 0) return f;
  return f + 1;
}

std::string QuadraticSurd::to_decimal(int digits) const {
  if (digits < 1) throw DomainError("decimal digits must be >= 1");
  QuadraticSurd scaled = *this * QuadraticSurd(pow10(digits));
  const QuadraticSurd half(make_rational(1, 2));
  Integer n = sign() >= 0 ? (scaled + half).floor() : Integer(-((-scaled) + half).floor());
  bool negative = n < 0;
  std::string body = Integer(abs(n)).get_str();
  if (body.size() <= static_cast<std::size_t>(digits)) {
    body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
  }
  body.insert(body.size() - static_cast<std::size_t>(digits), 1, '.');
  while (body.back() == '0') body.pop_back();
  if (body.back() == '.') body.pop_back();
  if (negative && body != "0") body.insert(0, 1, '-');
  return body;
}

std::string QuadraticSurd::to_exact_string() const {
  if (is_rational()) return expboot::to_exact_string(a_);
  return expboot::to_exact_string(a_) + "+" + expboot::to_exact_string(b_) + "*sqrt(" + r_.get_str() + ")";
}

double QuadraticSurd::to_double() const {
  if (is_rational()) return a_.get_d();
  return a_.get_d() + b_.get_d() * std::sqrt(r_.get_d());
}

std::string surd_eval(const QuadraticSurd& value, int digits) { return value.to_decimal(digits); }

}  // namespace expboot
