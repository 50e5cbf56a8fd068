#pragma once

// Exponent transfer maps. Each function encodes one integrability
// gain statement; hypotheses are hard preconditions (DomainError), never
// silently clamped. Case logic lives in the drivers (bootstrap.hpp).

#include "expboot/exponent.hpp"

namespace expboot {

/// Morrey space index M^{p,lambda} over a domain of dimension m.
/// lambda = m is plain L^p, lambda = 0 is L^infinity.
struct MorreyIndex {
  Exponent integrability;
  Rational weight;
  int dimension;

  MorreyIndex(Exponent integrability, Rational weight, int dimension);
  bool is_lebesgue() const { return weight == dimension; }
};

/// Source term exponent s = pq/(p+q) for the spinor equation.
/// Requires p > 4 (or infinite) and q > 2.
Exponent source_exponent(const Exponent& p, const Exponent& q);

/// Spinor integrability from a source in L^s, 4/3 < s <= 2: 8/(6-3s) as an
/// almost exponent, infinite (almost) at s = 2.
Exponent spinor_gain(const Exponent& s);

/// Riesz potential I_1 on Morrey spaces: M^{q,lambda} -> M^{lambda q/(lambda-q),lambda}
/// for 1 < q < lambda <= m.
MorreyIndex adams_riesz(const Exponent& q, const Rational& weight, int dimension);

/// sigma = min(2pt/(2(p+t)+pt), t/4) for p, t > 4 (either may be infinite).
Exponent sigma(const Exponent& p, const Exponent& t);

/// Map-gradient integrability 2 sigma/(2 - sigma): pt/(p+t) when
/// t >= 6p/(2+p), otherwise 2t/(8-t).
Exponent map_gain(const Exponent& p, const Exponent& t);

/// The switch point 6p/(2+p) between the two sigma branches.
Exponent sigma_branch_threshold(const Exponent& p);

}  // namespace expboot
