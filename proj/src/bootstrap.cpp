#include "expboot/bootstrap.hpp"

#include <cassert>
#include <utility>

#include "expboot/rules.hpp"

namespace expboot {

namespace {

QuadraticSurd num(long n, long d = 1) { return QuadraticSurd::from_int(n, d); }

void require_gravitino_exponent(const Exponent& p) {
  if (exp_compare(p, Exponent::of(4)) <= 0) {
    throw DomainError("p must exceed 4, got " + p.to_string());
  }
}

void check_state(const RegularityState& state) {
  require_gravitino_exponent(state.p);
  if (exp_compare(state.q, Exponent::of(2)) < 0) {
    throw DomainError("state q must be >= 2, got " + state.q.to_string());
  }
  if (exp_compare(state.t, Exponent::of(4)) < 0) {
    throw DomainError("state t must be >= 4, got " + state.t.to_string());
  }
}

// (14p^2 - 8p)/(9p^2 - 14p + 8): for q at or above it, sigma takes the t/4
// branch. Below 2 for every p > 4.
[[maybe_unused]] QuadraticSurd branch_switch_q(const QuadraticSurd& p) {
  return (num(14) * p * p - num(8) * p) / (num(9) * p * p - num(14) * p + num(8));
}

Classification regime_one(const Exponent& p) {
  Classification c;
  c.regime = Regime::one;
  if (p.is_infinite()) {
    c.map_space = Exponent::infinity(true);
    c.spinor_space = Exponent::infinity(true);
    c.notes.push_back("p = inf: the iteration yields inf-o for both exponents; the attained W^{1,inf} "
                      "statement is recorded, not derived");
  } else {
    c.map_space = p.with_almost(false);
    c.spinor_space = Exponent(p.value() / num(2));
  }
  return c;
}

Classification regime_two(const Exponent& q_star, const Exponent& t_star) {
  Classification c;
  c.regime = Regime::two;
  c.stall = Stall{q_star.with_almost(true), t_star.with_almost(true)};
  c.map_space = q_star.with_almost(true);
  c.spinor_space = exp_sobolev_conj_2d_inverse(t_star).with_almost(true);
  return c;
}

}  // namespace

const char* to_string(DiscriminantSign sign) {
  switch (sign) {
    case DiscriminantSign::negative: return "negative";
    case DiscriminantSign::zero: return "zero";
    case DiscriminantSign::positive: return "positive";
  }
  return "?";
}

const char* to_string(Regime regime) { return regime == Regime::one ? "one" : "two"; }

Exponent q_barrier(const Exponent& p) {
  if (p.is_infinite()) return Exponent(num(2), p.almost());
  require_gravitino_exponent(p);
  return Exponent(num(2) * p.value() / (p.value() - num(2)));
}

QuadraticSurd critical_p() {
  QuadraticSurd p0(make_rational(8, 5), make_rational(16, 15), make_rational(6));
  // Same number as (8/15)(3 + 2 sqrt(6)).
  assert(p0 == QuadraticSurd(make_rational(8, 15)) * (num(3) + num(2) * QuadraticSurd::sqrt(make_rational(6))));
  return p0;
}

QuadraticSurd fixed_point_radicand(const QuadraticSurd& p) { return num(-15) * p * p + num(48) * p + num(64); }

FixedPointReport fixed_points(const Exponent& p) {
  if (p.is_infinite()) throw DomainError("fixed points need finite p");
  require_gravitino_exponent(p);
  const QuadraticSurd& pv = p.value();
  FixedPointReport report{fixed_point_radicand(pv), DiscriminantSign::negative, std::nullopt, std::nullopt,
                          q_barrier(p), critical_p()};
  int s = report.radicand.sign();
  report.discriminant_sign = s < 0 ? DiscriminantSign::negative
                             : s == 0 ? DiscriminantSign::zero
                                      : DiscriminantSign::positive;
  if (s < 0) return report;

  QuadraticSurd p2 = pv * pv;
  QuadraticSurd denominator = num(3) * p2 - num(6) * pv - num(8);
  QuadraticSurd root_term;
  if (s > 0) {
    if (!pv.is_rational() || !report.radicand.is_rational()) {
      throw DomainError("fixed points for irrational p need a vanishing radicand");
    }
    root_term = pv * QuadraticSurd::sqrt(report.radicand.as_rational());
  }
  report.q_minus = Exponent((num(3) * p2 - root_term) / denominator);
  report.q_plus = Exponent((num(3) * p2 + root_term) / denominator);

  assert(exp_compare(*report.q_minus, Exponent::of(2)) > 0);
  assert(exp_compare(*report.q_minus, *report.q_plus) <= 0);
  assert(exp_compare(*report.q_plus, report.barrier) < 0);
  return report;
}

Exponent spinor_after(const Exponent& p, const Exponent& q) { return spinor_gain(source_exponent(p, q)); }

RegularityState first_improvement(const Exponent& p) {
  require_gravitino_exponent(p);
  Exponent s0 = exp_holder(p, Exponent::of(2));
  Exponent t1 = spinor_gain(s0);
  Exponent q1 = map_gain(p, t1);
  return RegularityState{p, q1, t1};
}

std::pair<RegularityState, std::string> bootstrap_step(const RegularityState& state) {
  check_state(state);
  const Exponent& p = state.p;
  // q = 2 is the a-priori W^{1,2} level, below the source_exponent domain.
  Exponent s = exp_same(state.q, Exponent::of(2)) ? exp_holder(p, state.q) : source_exponent(p, state.q);
  if (exp_compare(s, Exponent::of(2)) >= 0) {
    return {RegularityState{p, p.with_almost(true), Exponent::infinity(true)}, case_tag::kSourceAtLeastTwo};
  }
  Exponent t_next = spinor_gain(s);
  Exponent q_next = map_gain(p, t_next);
  assert(exp_compare(t_next, sigma_branch_threshold(p)) >= 0);
  assert(p.is_infinite() || branch_switch_q(p.value()) < num(2));

  RegularityState next{p, q_next, t_next};
  if (exp_compare(q_next, q_barrier(p)) >= 0) return {next, case_tag::kBarrier};
  if (exp_compare(q_next, state.q) > 0) return {next, case_tag::kImprove};
  return {next, case_tag::kStall};
}

BootstrapResult bootstrap_run(const Exponent& p, const BootstrapOptions& options) {
  if (options.max_steps < 1) throw DomainError("max_steps must be >= 1");
  require_gravitino_exponent(p);
  BootstrapResult result;
  IterationTrace& trace = result.trace;

  if (p.is_infinite()) {
    trace.start = RegularityState{p, Exponent::of(2), Exponent::of(4)};
    trace.terminal = case_tag::kInfiniteP;
    result.classification = regime_one(p);
    return result;
  }

  FixedPointReport report = fixed_points(p);
  RegularityState state = first_improvement(p);
  if (options.start) {
    if (!exp_same(options.start->p, p)) throw DomainError("start state has a different p");
    check_state(*options.start);
    state = *options.start;
  }
  trace.start = state;

  if (report.q_minus && exp_compare(state.q, *report.q_minus) <= 0) {
    // The iterates increase towards q_minus without reaching it; the stall
    // is reported analytically and the steps below are only a witness.
    const QuadraticSurd tolerance(options.witness_tolerance);
    const QuadraticSurd& target = report.q_minus->value();
    for (int k = 1; k <= options.max_steps; ++k) {
      if (target - state.q.value() <= tolerance) break;
      auto [next, tag] = bootstrap_step(state);
      assert(tag == case_tag::kImprove);
      trace.steps.push_back(TraceStep{k, "spinor-gain+map-gain", tag, state, next});
      state = std::move(next);
    }
    trace.terminal = case_tag::kFixedPoint;
    result.classification = regime_two(*report.q_minus, spinor_after(p, *report.q_minus));
    return result;
  }

  for (int k = 1; k <= options.max_steps; ++k) {
    auto [next, tag] = bootstrap_step(state);
    if (tag == case_tag::kSourceAtLeastTwo) {
      trace.terminal = tag;
      result.classification = regime_one(p);
      return result;
    }
    if (tag == case_tag::kStall) {
      trace.terminal = tag;
      result.classification = regime_two(state.q, spinor_after(p, state.q));
      return result;
    }
    trace.steps.push_back(TraceStep{k, "spinor-gain+map-gain", tag, state, next});
    state = std::move(next);
    if (tag == case_tag::kBarrier) {
      trace.terminal = tag;
      assert(!report.q_minus || options.start);
      result.classification = regime_one(p);
      return result;
    }
  }
  throw MaxStepsError("bootstrap did not terminate within " + std::to_string(options.max_steps) + " steps",
                      std::move(trace));
}

}  // namespace expboot
