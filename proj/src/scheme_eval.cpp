#include <algorithm>
#include <set>
#include <sstream>

#include "expboot/scheme.hpp"
#include "expboot_builtin_schemes.hpp"

namespace expboot::scheme {

namespace {

Value make_finite(QuadraticSurd v, bool almost) { return Value{std::move(v), almost}; }
Value make_infinite(bool almost) { return Value{std::nullopt, almost}; }

[[noreturn]] void undefined(const Expr& e, const std::string& what) { throw SchemeRuntimeError(e.loc, what); }

Value apply(const Expr& e, const Value& x, const Value& y) {
  const bool almost = x.almost || y.almost;
  const int sx = x.finite ? x.finite->sign() : 1;
  const int sy = y.finite ? y.finite->sign() : 1;
  switch (e.kind) {
    case Expr::Kind::add:
      if (x.is_infinite() || y.is_infinite()) return make_infinite(almost);
      return make_finite(*x.finite + *y.finite, almost);
    case Expr::Kind::sub:
      if (y.is_infinite()) undefined(e, "subtraction of inf");
      if (x.is_infinite()) return make_infinite(almost);
      return make_finite(*x.finite - *y.finite, almost);
    case Expr::Kind::mul:
      if (x.is_infinite() || y.is_infinite()) {
        if (sx <= 0 || sy <= 0) undefined(e, "inf times a non-positive value");
        return make_infinite(almost);
      }
      return make_finite(*x.finite * *y.finite, almost);
    case Expr::Kind::div:
      if (y.is_infinite()) {
        if (x.is_infinite()) undefined(e, "inf / inf");
        return make_finite(QuadraticSurd(), almost);
      }
      if (sy == 0) undefined(e, "division by zero");
      if (x.is_infinite()) {
        if (sy < 0) undefined(e, "inf divided by a negative value");
        return make_infinite(almost);
      }
      return make_finite(*x.finite / *y.finite, almost);
    case Expr::Kind::min: return compare(x, y) <= 0 ? Value{x.finite, almost} : Value{y.finite, almost};
    case Expr::Kind::max: return compare(x, y) >= 0 ? Value{x.finite, almost} : Value{y.finite, almost};
    default: break;
  }
  undefined(e, "not a binary operator");
}

void collect_names(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::identifier) out.insert(e.name);
  if (e.lhs) collect_names(*e.lhs, out);
  if (e.rhs) collect_names(*e.rhs, out);
}

bool holds(Comparator op, std::strong_ordering c) {
  switch (op) {
    case Comparator::less: return c < 0;
    case Comparator::less_equal: return c <= 0;
    case Comparator::greater: return c > 0;
    case Comparator::greater_equal: return c >= 0;
    case Comparator::equal: return c == 0;
  }
  return false;
}

// Two-point check that `expr` increases in every almost-flagged input it
// reads. Returns the offending names.
std::vector<std::string> non_monotone_inputs(const Expr& expr, const Bindings& bindings) {
  std::set<std::string> names;
  collect_names(expr, names);
  std::vector<std::string> bad;
  for (const auto& name : names) {
    const Value& v = bindings.find(name)->second;
    if (!v.almost || v.is_infinite() || v.finite->sign() <= 0) continue;
    Bindings lowered = bindings;
    lowered[name].finite = *v.finite - *v.finite / QuadraticSurd::from_int(1024);
    try {
      if (compare(evaluate(expr, lowered), evaluate(expr, bindings)) >= 0) bad.push_back(name);
    } catch (const DomainError&) {
      bad.push_back(name);
    }
  }
  return bad;
}

std::string join_values(const std::vector<std::pair<std::string, Value>>& values, int digits) {
  std::string out;
  for (const auto& [name, v] : values) {
    out += " " + name + "=" + v.to_string();
    out += " " + name + "~" + v.to_decimal(digits);
  }
  return out;
}

}  // namespace

Value Value::from(const Exponent& e) {
  if (e.is_infinite()) return make_infinite(e.almost());
  return make_finite(e.value(), e.almost());
}

Exponent Value::to_exponent() const {
  if (!finite) return Exponent::infinity(almost);
  return Exponent(*finite, almost);
}

std::string Value::to_string() const {
  std::string body = finite ? finite->to_exact_string() : std::string("inf");
  return almost ? body + "-o" : body;
}

std::string Value::to_decimal(int digits) const { return finite ? finite->to_decimal(digits) : "inf"; }

std::strong_ordering compare(const Value& x, const Value& y) {
  if (x.is_infinite() || y.is_infinite()) {
    if (x.is_infinite() && y.is_infinite()) return std::strong_ordering::equal;
    return x.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return *x.finite <=> *y.finite;
}

Value evaluate(const Expr& expr, const Bindings& bindings) {
  switch (expr.kind) {
    case Expr::Kind::literal: return make_finite(QuadraticSurd(expr.literal), false);
    case Expr::Kind::identifier: {
      auto it = bindings.find(expr.name);
      if (it == bindings.end()) undefined(expr, "unbound identifier '" + expr.name + "'");
      return it->second;
    }
    case Expr::Kind::neg: {
      Value v = evaluate(*expr.lhs, bindings);
      if (v.is_infinite()) undefined(expr, "negative infinity");
      return make_finite(-*v.finite, v.almost);
    }
    default: {
      Value x = evaluate(*expr.lhs, bindings);
      Value y = evaluate(*expr.rhs, bindings);
      try {
        return apply(expr, x, y);
      } catch (const SchemeRuntimeError&) {
        throw;
      } catch (const DomainError& e) {
        undefined(expr, e.what());
      }
    }
  }
}

Exponent eval_expr(const Expr& expr, const std::map<std::string, Exponent>& bindings) {
  Bindings values;
  for (const auto& [name, e] : bindings) values.emplace(name, Value::from(e));
  Value v = evaluate(expr, values);
  try {
    return v.to_exponent();
  } catch (const DomainError& e) {
    undefined(expr, std::string("result is not an exponent: ") + e.what());
  }
}

const Value& lookup(const std::vector<std::pair<std::string, Value>>& values, std::string_view name) {
  for (const auto& [n, v] : values) {
    if (n == name) return v;
  }
  throw DomainError("no value named '" + std::string(name) + "'");
}

const Value& SchemeTrace::initial_value(std::string_view name) const { return lookup(initial, name); }

SchemeTrace run_scheme(const SchemeAst& scheme, const std::map<std::string, Exponent>& params,
                       const RunOptions& options) {
  if (options.max_steps < 1) throw DomainError("max_steps must be >= 1");
  SchemeTrace trace;
  trace.scheme = scheme.name;
  Bindings env;
  for (const auto& name : scheme.params) {
    auto it = params.find(name);
    if (it == params.end()) throw DomainError("scheme parameter '" + name + "' is not bound");
    env[name] = Value::from(it->second);
  }
  for (const auto& [name, _] : params) {
    if (std::find(scheme.params.begin(), scheme.params.end(), name) == scheme.params.end()) {
      throw DomainError("unknown scheme parameter '" + name + "'");
    }
  }
  for (const auto& var : scheme.state) {
    auto it = options.start.find(var.name);
    Value v = it != options.start.end() ? Value::from(it->second) : evaluate(*var.init, env);
    try {
      v.to_exponent();
    } catch (const DomainError& e) {
      throw SchemeRuntimeError(var.loc, "state '" + var.name + "' is not an exponent: " + e.what());
    }
    env[var.name] = v;
    trace.initial.emplace_back(var.name, v);
  }
  for (const auto& [name, _] : options.start) {
    if (std::none_of(scheme.state.begin(), scheme.state.end(), [&](const StateVar& s) { return s.name == name; })) {
      throw DomainError("start override for unknown state variable '" + name + "'");
    }
  }

  std::set<std::string> warned;
  for (int k = 1; k <= options.max_steps; ++k) {
    Bindings pass = env;
    SchemeStep step;
    step.k = k;
    for (const auto& st : scheme.step) {
      if (st.kind == Statement::Kind::guard) {
        auto c = compare(evaluate(*st.condition.lhs, pass), evaluate(*st.condition.rhs, pass));
        if (!holds(st.condition.op, c)) {
          trace.terminal = st.terminal;
          return trace;
        }
        continue;
      }
      Value v = evaluate(*st.expr, pass);
      if (v.almost) {
        for (const auto& name : non_monotone_inputs(*st.expr, pass)) {
          std::string key = std::to_string(st.loc.line) + ":" + name;
          if (warned.insert(key).second) {
            trace.warnings.push_back("line " + std::to_string(st.loc.line) + ": update of '" + st.name +
                                     "' is not verifiably increasing in '" + name +
                                     "'; almost flag propagated anyway");
          }
        }
      }
      if (st.kind == Statement::Kind::let) {
        step.lets.emplace_back(st.name, v);
      } else {
        try {
          v.to_exponent();
        } catch (const DomainError& e) {
          throw SchemeRuntimeError(st.loc, "state '" + st.name + "' is not an exponent: " + e.what());
        }
      }
      pass[st.name] = std::move(v);
    }
    for (const auto& var : scheme.state) {
      env[var.name] = pass[var.name];
      step.state.emplace_back(var.name, env[var.name]);
    }
    trace.steps.push_back(std::move(step));
  }
  throw SchemeMaxStepsError("scheme '" + scheme.name + "' did not terminate within " +
                                std::to_string(options.max_steps) + " steps",
                            std::move(trace));
}

std::string serialize(const SchemeTrace& trace, int digits) {
  std::ostringstream out;
  out << "scheme " << trace.scheme << "\n";
  out << "k=0" << join_values(trace.initial, digits) << "\n";
  for (const auto& step : trace.steps) {
    out << "k=" << step.k << join_values(step.state, digits);
    if (!step.lets.empty()) out << " |" << join_values(step.lets, digits);
    out << "\n";
  }
  out << "terminal " << (trace.terminal.empty() ? "none" : trace.terminal) << "\n";
  for (const auto& w : trace.warnings) out << "warning " << w << "\n";
  return out.str();
}

std::string_view builtin_abstract_source() { return builtin::kAbstract; }
std::string_view builtin_euler_lagrange_source() { return builtin::kEulerLagrange; }

std::optional<std::string_view> builtin_source(std::string_view name) {
  if (name == "abstract") return builtin_abstract_source();
  if (name == "el" || name == "euler_lagrange") return builtin_euler_lagrange_source();
  return std::nullopt;
}

}  // namespace expboot::scheme
