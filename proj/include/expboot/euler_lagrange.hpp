#pragma once

// Coupled refinement for the Euler-Lagrange system. Starting from the stall
// (q_*, t_*) of the abstract bootstrap, both reciprocal exponents 1/q_k and
// 1/t_k decrease by 1/2 - 2/p per step until q_k reaches Q_0(p), after which
// the full W^{1,p} x W^{1,p/2} regularity is attained.

#include <utility>

#include "expboot/bootstrap.hpp"

namespace expboot {

struct CoupledStep {
  Exponent t_next;
  Exponent q_next;
};

/// 1/t = 1/q_k + 1/p - 1/2 and 1/q_{k+1} = 1/p + 1/t.
/// Requires 4 < p < inf and 2 < q_k < Q_0(p).
CoupledStep el_step(const Exponent& p, const Exponent& q_k);

struct CoupledResult {
  IterationTrace trace;
  Classification classification;
  int k_star = 0;
};

/// For p > p_0 (or infinite) the abstract result is already optimal and
/// k_star = 0; otherwise iterates el_step from the stall until q_k >= Q_0(p).
CoupledResult el_run(const Exponent& p, const BootstrapOptions& options = {});

/// Iterates el_step from an arbitrary start until q_k >= Q_0(p). The
/// reciprocal law is asserted for q at every step and for t from the second
/// step on (the start's t need not be T(q_0)).
CoupledResult el_run_from(const RegularityState& start);

/// Least k with 1/q_* - k (1/2 - 2/p) <= 1/Q_0(p), for 4 < p <= p_0.
int el_steps_needed(const Exponent& p);

/// 1/2 - 2/p, the common decrement of the reciprocal exponents.
QuadraticSurd reciprocal_step(const Exponent& p);

}  // namespace expboot
