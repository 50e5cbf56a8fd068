#include "expboot/rules.hpp"

#include <cassert>
#include <utility>

namespace expboot {

namespace {

QuadraticSurd num(long n, long d = 1) { return QuadraticSurd::from_int(n, d); }

void require_above(const Exponent& x, long bound, const char* what) {
  if (exp_compare(x, Exponent::of(bound)) <= 0) {
    throw DomainError(std::string(what) + " must exceed " + std::to_string(bound) + ", got " + x.to_string());
  }
}

Exponent spinor_value(const Exponent& s) {
  if (s.value() == num(2)) return Exponent::infinity();
  return Exponent(num(8) / (num(6) - num(3) * s.value()));
}

Exponent sigma_value(const Exponent& p, const Exponent& t) {
  if (t.is_infinite()) {
    if (p.is_infinite()) return Exponent(num(2));
    return Exponent(num(2) * p.value() / (num(2) + p.value()));
  }
  const QuadraticSurd& tv = t.value();
  QuadraticSurd quarter = tv / num(4);
  QuadraticSurd holder_branch = p.is_infinite() ? num(2) * tv / (num(2) + tv)
                                                : num(2) * p.value() * tv /
                                                      (num(2) * (p.value() + tv) + p.value() * tv);
  return Exponent(holder_branch <= quarter ? holder_branch : quarter);
}

}  // namespace

MorreyIndex::MorreyIndex(Exponent integrability_, Rational weight_, int dimension_)
    : integrability(std::move(integrability_)), weight(std::move(weight_)), dimension(dimension_) {
  if (dimension < 2) throw DomainError("Morrey dimension must be >= 2");
  if (weight < 0 || weight > dimension) {
    throw DomainError("Morrey weight " + to_exact_string(weight) + " outside [0, " + std::to_string(dimension) + "]");
  }
}

Exponent source_exponent(const Exponent& p, const Exponent& q) {
  require_above(p, 4, "p");
  require_above(q, 2, "q");
  Exponent s = exp_holder(p, q);
  assert(exp_compare(s, Exponent(num(4, 3))) > 0);
  return s;
}

Exponent spinor_gain(const Exponent& s) {
  if (exp_compare(s, Exponent(num(4, 3))) <= 0) {
    throw DomainError("spinor gain needs s > 4/3, got " + s.to_string());
  }
  if (exp_compare(s, Exponent(num(2))) > 0) {
    throw DomainError("spinor gain needs s <= 2, got " + s.to_string());
  }
  if (s.almost()) detail::check_increasing(spinor_value, s, num(4, 3));
  return spinor_value(s).with_almost(true);
}

MorreyIndex adams_riesz(const Exponent& q, const Rational& weight, int dimension) {
  if (weight > dimension) {
    throw DomainError("Riesz potential needs lambda <= m, got lambda = " + to_exact_string(weight));
  }
  if (exp_compare(q, Exponent::of(1)) <= 0) {
    throw DomainError("Riesz potential needs q > 1, got " + q.to_string());
  }
  if (q.is_infinite() || q.value() >= QuadraticSurd(weight)) {
    throw DomainError("Riesz potential needs q < lambda = " + to_exact_string(weight) + ", got " + q.to_string());
  }
  QuadraticSurd lambda(weight);
  Exponent gained(lambda * q.value() / (lambda - q.value()), q.almost());
  return MorreyIndex(std::move(gained), weight, dimension);
}

Exponent sigma_branch_threshold(const Exponent& p) {
  if (p.is_infinite()) return Exponent(num(6), p.almost());
  return Exponent(num(6) * p.value() / (num(2) + p.value()), p.almost());
}

Exponent sigma(const Exponent& p, const Exponent& t) {
  require_above(p, 4, "p");
  require_above(t, 4, "t");
  if (t.almost()) {
    detail::check_increasing([&](const Exponent& x) { return sigma_value(p, x); }, t, num(4));
  }
  return sigma_value(p, t).with_almost(p.almost() || t.almost());
}

Exponent map_gain(const Exponent& p, const Exponent& t) {
  Exponent s = sigma(p, t);
  return exp_sobolev_conj_2d(s);
}

}  // namespace expboot
