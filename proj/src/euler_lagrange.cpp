#include "expboot/euler_lagrange.hpp"

#include <stdexcept>

#include "expboot/rules.hpp"

namespace expboot {

namespace {

QuadraticSurd num(long n, long d = 1) { return QuadraticSurd::from_int(n, d); }

void require_finite_gravitino(const Exponent& p) {
  if (p.is_infinite()) throw DomainError("coupled step needs finite p");
  if (exp_compare(p, Exponent::of(4)) <= 0) throw DomainError("p must exceed 4, got " + p.to_string());
}

bool above_critical(const Exponent& p) { return p.is_infinite() || p.value() > critical_p(); }

}  // namespace

QuadraticSurd reciprocal_step(const Exponent& p) {
  require_finite_gravitino(p);
  return num(1, 2) - num(2) / p.value();
}

CoupledStep el_step(const Exponent& p, const Exponent& q_k) {
  require_finite_gravitino(p);
  if (exp_compare(q_k, Exponent::of(2)) <= 0) throw DomainError("q_k must exceed 2, got " + q_k.to_string());
  if (exp_compare(q_k, q_barrier(p)) >= 0) {
    throw DomainError("q_k = " + q_k.to_string() + " has reached Q_0(p); the iteration is terminal");
  }
  const QuadraticSurd inv_t = q_k.value().inverse() + p.value().inverse() - num(1, 2);
  const bool almost = p.almost() || q_k.almost();
  Exponent t_next(inv_t.inverse(), almost);
  if (exp_compare(t_next, sigma_branch_threshold(p)) <= 0) {
    throw std::logic_error("coupled step left the t >= 6p/(2+p) branch at t = " + t_next.to_string());
  }
  Exponent q_next = exp_holder(p, t_next);
  return CoupledStep{std::move(t_next), std::move(q_next)};
}

CoupledResult el_run(const Exponent& p, const BootstrapOptions& options) {
  CoupledResult result;
  BootstrapOptions abstract_options = options;
  if (!above_critical(p)) {
    // Only the stall value is needed; skip the witness iteration.
    abstract_options.witness_tolerance = 1000;
  }
  BootstrapResult abstract = bootstrap_run(p, abstract_options);
  if (!abstract.classification.stall) {
    // Already at the optimal spaces (p > p_0, or a start above q_+).
    result.trace = std::move(abstract.trace);
    result.classification = std::move(abstract.classification);
    return result;
  }
  const Stall stall = *abstract.classification.stall;
  result = el_run_from(RegularityState{p, stall.q_star, stall.t_star});
  // At the stall q_* = p t_*/(p + t_*), so t also follows the law on step 1.
  if (!result.trace.steps.empty() &&
      result.trace.steps.front().outgoing.t.value().inverse() != stall.t_star.value().inverse() - reciprocal_step(p)) {
    throw std::logic_error("first coupled step broke the affine law for t");
  }
  result.classification.regime = abstract.classification.regime;
  result.classification.stall = stall;
  return result;
}

CoupledResult el_run_from(const RegularityState& start) {
  const Exponent& p = start.p;
  require_finite_gravitino(p);
  const Exponent barrier = q_barrier(p);
  const QuadraticSurd step = reciprocal_step(p);

  CoupledResult result;
  IterationTrace& trace = result.trace;
  trace.start = start;
  RegularityState state = start;
  int k = 0;
  while (exp_compare(state.q, barrier) < 0) {
    CoupledStep next = el_step(p, state.q);
    if (next.q_next.value().inverse() != state.q.value().inverse() - step) {
      throw std::logic_error("coupled step broke the affine law for q");
    }
    if (k > 0 && next.t_next.value().inverse() != state.t.value().inverse() - step) {
      throw std::logic_error("coupled step broke the affine law for t");
    }
    ++k;
    RegularityState out{p, next.q_next, next.t_next};
    trace.steps.push_back(TraceStep{k, "coupled", case_tag::kCoupled, state, out});
    state = std::move(out);
  }
  trace.terminal = case_tag::kCoupledBarrier;

  // Standard elliptic theory at the barrier gives the attained spaces.
  Classification& c = result.classification;
  c.regime = Regime::two;
  c.map_space = p.with_almost(false);
  c.spinor_space = Exponent(p.value() / num(2));
  result.k_star = k;
  return result;
}

int el_steps_needed(const Exponent& p) {
  require_finite_gravitino(p);
  if (above_critical(p)) throw DomainError("el_steps_needed requires p <= p_0, got " + p.to_string());
  FixedPointReport report = fixed_points(p);
  const QuadraticSurd gap = report.q_minus->value().inverse() - report.barrier.value().inverse();
  const Integer k = (gap / reciprocal_step(p)).ceil();
  if (!k.fits_sint_p()) throw DomainError("step count overflows int");
  return static_cast<int>(k.get_si());
}

}  // namespace expboot
