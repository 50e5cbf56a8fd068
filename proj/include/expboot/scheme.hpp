#pragma once

// A small declarative language for exponent-iteration schemes:
//
//   scheme abstract {
//     param p;
//     state q = 2*p*(p+2)/(5*p+4);
//     step {
//       let s = p*q/(p+q);
//       guard s < 2 else terminate barrier;
//       ...
//       q = Q;
//     }
//   }
//
// Values are exact (rationals and quadratic surds) or +inf. There is no
// syntax for the almost flag: flags carried by parameters propagate through
// every update, which is checked for monotonicity by two-point sampling.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "expboot/exponent.hpp"

namespace expboot::scheme {

struct SourceLoc {
  int line = 1;
  int column = 1;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { literal, identifier, add, sub, mul, div, neg, min, max };

  Kind kind = Kind::literal;
  Rational literal;      // Kind::literal, always >= 0
  std::string name;      // Kind::identifier
  ExprPtr lhs;           // binary operands, or the operand of neg
  ExprPtr rhs;
  SourceLoc loc;
};

enum class Comparator { less, less_equal, greater, greater_equal, equal };

struct Condition {
  ExprPtr lhs;
  Comparator op = Comparator::less;
  ExprPtr rhs;
};

struct Statement {
  enum class Kind { let, guard, assign };

  Kind kind = Kind::let;
  std::string name;      // let / assign target
  ExprPtr expr;          // let / assign value
  Condition condition;   // guard
  std::string terminal;  // guard outcome when the condition fails
  SourceLoc loc;
};

struct StateVar {
  std::string name;
  ExprPtr init;
  SourceLoc loc;
};

struct SchemeAst {
  std::string name;
  std::vector<std::string> params;
  std::vector<StateVar> state;
  std::vector<Statement> step;

  /// Distinct terminal names in order of first appearance.
  std::vector<std::string> terminals() const;
};

/// Structural equality, ignoring source locations.
bool structurally_equal(const Expr& x, const Expr& y);
bool structurally_equal(const SchemeAst& x, const SchemeAst& y);

int expr_depth(const Expr& expr);

class SchemeParseError : public ParseError {
 public:
  SchemeParseError(SourceLoc loc, const std::string& message, std::vector<std::string> expected = {});
  SourceLoc loc() const { return loc_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourceLoc loc_;
  std::vector<std::string> expected_;
};

class SchemeRuntimeError : public DomainError {
 public:
  SchemeRuntimeError(SourceLoc loc, const std::string& message);
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

SchemeAst parse_scheme(std::string_view text);
/// Parses a single expression (identifiers are not resolved).
ExprPtr parse_expr(std::string_view text);

std::string pretty_print(const Expr& expr);
std::string pretty_print(const SchemeAst& scheme);

/// A signed exact value or +inf, with the almost flag. Intermediate results
/// inside a step may be zero or negative; only exponents enter and leave.
struct Value {
  std::optional<QuadraticSurd> finite;  // empty = +inf
  bool almost = false;

  static Value from(const Exponent& e);
  bool is_infinite() const { return !finite.has_value(); }
  /// Throws DomainError unless the value is positive.
  Exponent to_exponent() const;
  std::string to_string() const;
  std::string to_decimal(int digits) const;
};

std::strong_ordering compare(const Value& x, const Value& y);

using Bindings = std::map<std::string, Value, std::less<>>;

Value evaluate(const Expr& expr, const Bindings& bindings);
Exponent eval_expr(const Expr& expr, const std::map<std::string, Exponent>& bindings);

struct SchemeStep {
  int k = 0;
  std::vector<std::pair<std::string, Value>> state;  // after the pass
  std::vector<std::pair<std::string, Value>> lets;   // let-bound values of the pass
};

struct SchemeTrace {
  std::string scheme;
  std::vector<std::pair<std::string, Value>> initial;
  std::vector<SchemeStep> steps;
  std::string terminal;
  std::vector<std::string> warnings;

  const Value& initial_value(std::string_view name) const;
};

const Value& lookup(const std::vector<std::pair<std::string, Value>>& values, std::string_view name);

class SchemeMaxStepsError : public std::runtime_error {
 public:
  SchemeMaxStepsError(const std::string& what, SchemeTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const SchemeTrace& partial_trace() const { return partial_; }

 private:
  SchemeTrace partial_;
};

struct RunOptions {
  int max_steps = 10'000;
  /// Overrides state initializers by name.
  std::map<std::string, Exponent> start;
};

SchemeTrace run_scheme(const SchemeAst& scheme, const std::map<std::string, Exponent>& params,
                       const RunOptions& options = {});

/// Line-per-record rendering: identical inputs give identical bytes.
std::string serialize(const SchemeTrace& trace, int digits);

/// Shipped scheme sources.
std::string_view builtin_abstract_source();
std::string_view builtin_euler_lagrange_source();
/// "abstract" or "el"/"euler_lagrange"; nullopt for unknown names.
std::optional<std::string_view> builtin_source(std::string_view name);

}  // namespace expboot::scheme
