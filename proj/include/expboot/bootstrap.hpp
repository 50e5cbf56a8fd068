#pragma once

// The abstract bootstrap: iterate the spinor gain and the map gain on the
// pair (q, t) until the source exponent reaches 2 (regime one) or the
// iteration stalls at the smaller fixed point of q -> Q(q) (regime two).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "expboot/exponent.hpp"

namespace expboot {

/// Gradient exponent q of the map and Lebesgue exponent t of the spinor, for
/// a fixed gravitino exponent p.
struct RegularityState {
  Exponent p = Exponent::infinity();
  Exponent q = Exponent::of(2);
  Exponent t = Exponent::of(4);
};

namespace case_tag {
inline constexpr const char* kStart = "start";
inline constexpr const char* kImprove = "case1-improve";
inline constexpr const char* kBarrier = "case2-barrier";
inline constexpr const char* kStall = "case3-stall";
inline constexpr const char* kSourceAtLeastTwo = "source-ge-2";
inline constexpr const char* kFixedPoint = "fixed-point";
inline constexpr const char* kInfiniteP = "infinite-p";
inline constexpr const char* kCoupled = "coupled";
inline constexpr const char* kCoupledBarrier = "coupled-barrier";
}  // namespace case_tag

struct TraceStep {
  int k = 0;
  std::string rule;
  std::string case_tag;
  RegularityState incoming;
  RegularityState outgoing;
};

struct IterationTrace {
  RegularityState start;
  std::vector<TraceStep> steps;
  std::string terminal;
};

enum class DiscriminantSign { negative, zero, positive };
const char* to_string(DiscriminantSign sign);

struct FixedPointReport {
  QuadraticSurd radicand;  // -15p^2 + 48p + 64
  DiscriminantSign discriminant_sign = DiscriminantSign::negative;
  std::optional<Exponent> q_minus;
  std::optional<Exponent> q_plus;
  Exponent barrier = Exponent::of(2);
  QuadraticSurd critical;
};

enum class Regime { one, two };
const char* to_string(Regime regime);

struct Stall {
  Exponent q_star;
  Exponent t_star;
};

struct Classification {
  Regime regime = Regime::one;
  /// Final Sobolev exponent of the map (phi in W^{1, map_space}).
  Exponent map_space = Exponent::infinity();
  /// Final Sobolev exponent of the spinor (psi in W^{1, spinor_space}).
  Exponent spinor_space = Exponent::infinity();
  std::optional<Stall> stall;
  std::vector<std::string> notes;
};

struct BootstrapResult {
  IterationTrace trace;
  Classification classification;
};

/// Carries the partial trace when a run exhausts its step budget.
class MaxStepsError : public std::runtime_error {
 public:
  MaxStepsError(const std::string& what, IterationTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const IterationTrace& partial_trace() const { return partial_; }

 private:
  IterationTrace partial_;
};

struct BootstrapOptions {
  int max_steps = 10'000;
  /// Replaces the first-improvement start (q_1, t_1); invariants re-checked.
  std::optional<RegularityState> start;
  /// Regime-two witness iteration stops once q_minus - q_k <= tolerance.
  Rational witness_tolerance = pow10(-12);
};

/// Q_0(p) = 2p/(p-2), the gradient exponent at which the source reaches L^2.
/// Returns 2 for p = infinity.
Exponent q_barrier(const Exponent& p);

/// p_0 = 8/5 + (16/15) sqrt(6).
QuadraticSurd critical_p();

/// The radicand -15p^2 + 48p + 64 of the fixed-point quadratic.
QuadraticSurd fixed_point_radicand(const QuadraticSurd& p);

/// Solutions q_- <= q_+ of Q(q) = q, i.e. (-3p^2+6p+8)q^2 + 6p^2 q - 8p^2 = 0.
FixedPointReport fixed_points(const Exponent& p);

/// s(q) -> T(q) -> Q(q) for the given state. Returns the updated state and
/// the case tag; for the terminal "source >= 2" shortcut the state is
/// (q = p-o, t = inf-o).
std::pair<RegularityState, std::string> bootstrap_step(const RegularityState& state);

/// First improvement from the a-priori regularity (q = 2, t = 4):
/// t_1 = 2(p+2)/3 and q_1 = 2p(p+2)/(5p+4), both almost.
RegularityState first_improvement(const Exponent& p);

/// T(q) = 8/(6 - 3 s(q)) as an almost exponent.
Exponent spinor_after(const Exponent& p, const Exponent& q);

BootstrapResult bootstrap_run(const Exponent& p, const BootstrapOptions& options = {});

}  // namespace expboot
