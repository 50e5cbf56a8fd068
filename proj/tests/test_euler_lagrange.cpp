#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expboot/euler_lagrange.hpp"
#include "support.hpp"

using namespace expboot;
using testing::ex;
using testing::Gen;
using testing::q;

TEST_CASE("el_step examples") {
  CoupledStep a = el_step(ex(21, 5), ex(42, 17));
  CHECK(a.t_next == ex(7));
  CHECK(a.q_next == ex(21, 8));

  CoupledStep b = el_step(ex(6), ex(5, 2));
  CHECK(b.t_next == ex(15));
  CHECK(b.q_next == ex(30, 7));

  CoupledStep c = el_step(ex(21, 5), ex(42, 17).with_almost(true));
  CHECK(c.t_next == ex(7).with_almost(true));
  CHECK(c.q_next == ex(21, 8).with_almost(true));

  CHECK_THROWS_AS(el_step(ex(21, 5), ex(42, 11)), DomainError);
  CHECK_THROWS_AS(el_step(ex(21, 5), ex(2)), DomainError);
  CHECK_THROWS_AS(el_step(Exponent::infinity(), ex(3)), DomainError);
}

TEST_CASE("el_run at p = 21/5 lands on the barrier after 6 steps") {
  const CoupledResult r = el_run(ex(21, 5));
  CHECK(r.k_star == 6);
  CHECK(r.classification.regime == Regime::two);
  CHECK(r.classification.map_space == ex(21, 5));
  CHECK(r.classification.spinor_space == ex(21, 10));
  REQUIRE(r.trace.steps.size() == 6);
  for (int k = 1; k <= 6; ++k) {
    CHECK(r.trace.steps[static_cast<std::size_t>(k - 1)].outgoing.q.value().inverse() ==
          QuadraticSurd(q(17 - k, 42)));
  }
  CHECK(r.trace.steps.back().outgoing.q.with_almost(false) == q_barrier(ex(21, 5)));
  CHECK(r.trace.terminal == case_tag::kCoupledBarrier);
  CHECK(el_steps_needed(ex(21, 5)) == 6);
}

TEST_CASE("el_run delegates above p_0") {
  const CoupledResult five = el_run(ex(5));
  CHECK(five.k_star == 0);
  CHECK(five.classification.regime == Regime::one);
  CHECK(five.classification.map_space == ex(5));
  CHECK(five.classification.spinor_space == ex(5, 2));
  const CoupledResult inf = el_run(Exponent::infinity());
  CHECK(inf.k_star == 0);
  CHECK(inf.classification.map_space == Exponent::infinity(true));
}

TEST_CASE("el_run at p = 4.15 needs 11 steps") {
  const Exponent p(q(83, 20));
  const CoupledResult r = el_run(p);
  CHECK(r.k_star == 11);
  CHECK(r.classification.map_space == p);
  CHECK(r.classification.spinor_space == Exponent(q(83, 40)));
  CHECK(r.classification.spinor_space.to_decimal(6) == "2.075");
  CHECK(el_steps_needed(p) == 11);
  // Numeric oracle: iterate the recurrence in doubles from q_star.
  const double pd = 4.15;
  const double q_star = 2.2654217671747448;
  double x = q_star;
  int k = 0;
  while (x < 2 * pd / (pd - 2)) {
    x = 1 / (1 / x - (0.5 - 2 / pd));
    ++k;
  }
  CHECK(k == 11);
  CHECK(std::abs(reciprocal_step(p).to_double() - 0.018072289) < 1e-9);
}

TEST_CASE("el_steps_needed near p = 4") {
  const Exponent p(q(401, 100));
  const int needed = el_steps_needed(p);
  CHECK(needed == el_run(p).k_star);
  CHECK(needed > el_steps_needed(Exponent(q(41, 10))));
  CHECK_THROWS_AS(el_steps_needed(ex(5)), DomainError);
  CHECK_THROWS_AS(el_steps_needed(ex(4)), DomainError);
}

TEST_CASE("el_run_from accepts an experimental start") {
  const CoupledResult r = el_run_from(RegularityState{ex(6), ex(5, 2), ex(10)});
  REQUIRE_FALSE(r.trace.steps.empty());
  CHECK(r.trace.steps[0].outgoing.t == ex(15));
  CHECK(r.trace.steps[0].outgoing.q == ex(30, 7));
  CHECK(r.k_star == 1);
}

TEST_CASE("affine reciprocal law and strict increase along every trace") {
  Gen gen;
  for (int i = 0; i < 40; ++i) {
    const Exponent p(gen.rational_in(q(401, 100), q(421, 100)));
    const CoupledResult r = el_run(p);
    const QuadraticSurd d = reciprocal_step(p);
    RegularityState prev = r.trace.start;
    for (const TraceStep& step : r.trace.steps) {
      CHECK(step.outgoing.q.value().inverse() == prev.q.value().inverse() - d);
      CHECK(step.outgoing.t.value().inverse() == prev.t.value().inverse() - d);
      CHECK(exp_less(prev.q, step.outgoing.q));
      CHECK(exp_less(prev.t, step.outgoing.t));
      prev = step.outgoing;
    }
  }
}

TEST_CASE("closed form matches the run on (4.01, p_0)") {
  Gen gen;
  for (int i = 0; i < 100; ++i) {
    const Exponent p(gen.rational_below(q(401, 100), critical_p()));
    CAPTURE(p.to_string());
    CHECK(el_steps_needed(p) == el_run(p).k_star);
  }
}

TEST_CASE("handoff identities and ordering") {
  Gen gen;
  for (int i = 0; i < 100; ++i) {
    const Exponent p(gen.rational_below(4, critical_p()));
    const BootstrapResult r = bootstrap_run(p, BootstrapOptions{10'000, std::nullopt, Rational(1000)});
    REQUIRE(r.classification.stall);
    const Exponent& q_star = r.classification.stall->q_star;
    const Exponent& t_star = r.classification.stall->t_star;
    CHECK(exp_holder(p, t_star) == q_star);
    const Exponent half_p(Rational(p.rational() / 2));
    CHECK(exp_same(exp_holder(half_p, t_star), exp_holder(p, q_star)));
    CHECK(exp_less(ex(4), p));
    CHECK(exp_less(p, Exponent(QuadraticSurd(2) * q_star.value())));
    CHECK(exp_less(Exponent(QuadraticSurd(2) * q_star.value()), t_star));
  }
}
