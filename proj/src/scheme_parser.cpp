#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "expboot/scheme.hpp"

namespace expboot::scheme {

namespace {

const std::set<std::string, std::less<>> kKeywords = {"scheme", "param", "state", "step",      "let",
                                                      "guard",  "else",  "terminate", "min", "max"};

struct Token {
  enum class Kind { ident, integer, rational, symbol, end };
  Kind kind = Kind::end;
  std::string text;
  SourceLoc loc;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::end: return "end of input";
    case Token::Kind::ident: return "identifier '" + t.text + "'";
    case Token::Kind::integer:
    case Token::Kind::rational: return "number '" + t.text + "'";
    case Token::Kind::symbol: return "'" + t.text + "'";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  SourceLoc loc;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
      if (text[i] == '\n') {
        ++loc.line;
        loc.column = 1;
      } else {
        ++loc.column;
      }
    }
  };
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.loc = loc;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      tok.kind = Token::Kind::ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (is_digit(c)) {
      std::size_t j = i;
      while (j < text.size() && is_digit(text[j])) ++j;
      tok.kind = Token::Kind::integer;
      // "n/d" written without blanks is one rational literal, except as the
      // divisor of a '/', where it would change the left-to-right grouping.
      bool after_slash = !out.empty() && out.back().kind == Token::Kind::symbol && out.back().text == "/";
      if (!after_slash && j + 1 < text.size() && text[j] == '/' && is_digit(text[j + 1])) {
        std::size_t k = j + 1;
        while (k < text.size() && is_digit(text[k])) ++k;
        tok.kind = Token::Kind::rational;
        j = k;
      }
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else {
      static const char* kTwoChar[] = {"<=", ">=", "=="};
      std::string sym(1, c);
      for (const char* two : kTwoChar) {
        if (text.substr(i, 2) == two) sym = two;
      }
      if (std::string_view("{};,=()+-*/<>").find(c) == std::string_view::npos) {
        throw SchemeParseError(loc, std::string("unexpected character '") + c + "'");
      }
      tok.kind = Token::Kind::symbol;
      tok.text = sym;
      advance(sym.size());
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.loc = loc;
  out.push_back(end);
  return out;
}

ExprPtr make_binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  e->loc = loc;
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  SchemeAst scheme() {
    SchemeAst ast;
    expect_keyword("scheme");
    ast.name = identifier();
    expect_symbol("{");
    expect_keyword("param");
    ast.params.push_back(identifier());
    while (accept_symbol(",")) ast.params.push_back(identifier());
    expect_symbol(";");
    do {
      StateVar var;
      var.loc = peek().loc;
      expect_keyword("state");
      var.name = identifier();
      expect_symbol("=");
      var.init = expr();
      expect_symbol(";");
      ast.state.push_back(std::move(var));
    } while (is_keyword("state"));
    expect_keyword("step");
    expect_symbol("{");
    do {
      ast.step.push_back(statement());
    } while (!is_symbol("}"));
    expect_symbol("}");
    expect_symbol("}");
    if (peek().kind != Token::Kind::end) fail({"end of input"});
    return ast;
  }

  ExprPtr standalone_expr() {
    ExprPtr e = expr();
    if (peek().kind != Token::Kind::end) fail({"end of input"});
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  bool is_symbol(std::string_view s) const { return peek().kind == Token::Kind::symbol && peek().text == s; }
  bool is_keyword(std::string_view s) const { return peek().kind == Token::Kind::ident && peek().text == s; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += "; found " + describe(peek());
    throw SchemeParseError(peek().loc, msg, std::move(expected));
  }

  void expect_symbol(std::string_view s) {
    if (!is_symbol(s)) fail({"'" + std::string(s) + "'"});
    next();
  }
  bool accept_symbol(std::string_view s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }
  void expect_keyword(std::string_view s) {
    if (!is_keyword(s)) fail({"'" + std::string(s) + "'"});
    next();
  }
  std::string identifier() {
    if (peek().kind != Token::Kind::ident || kKeywords.contains(peek().text)) fail({"identifier"});
    return next().text;
  }

  Statement statement() {
    Statement st;
    st.loc = peek().loc;
    if (is_keyword("let")) {
      next();
      st.kind = Statement::Kind::let;
      st.name = identifier();
      expect_symbol("=");
      st.expr = expr();
    } else if (is_keyword("guard")) {
      next();
      st.kind = Statement::Kind::guard;
      st.condition = condition();
      expect_keyword("else");
      expect_keyword("terminate");
      st.terminal = identifier();
    } else if (peek().kind == Token::Kind::ident && !kKeywords.contains(peek().text)) {
      st.kind = Statement::Kind::assign;
      st.name = next().text;
      expect_symbol("=");
      st.expr = expr();
    } else {
      fail({"'let'", "'guard'", "identifier"});
    }
    expect_symbol(";");
    return st;
  }

  Condition condition() {
    Condition c;
    c.lhs = expr();
    static const std::pair<const char*, Comparator> kOps[] = {{"<", Comparator::less},
                                                             {"<=", Comparator::less_equal},
                                                             {">", Comparator::greater},
                                                             {">=", Comparator::greater_equal},
                                                             {"==", Comparator::equal}};
    bool found = false;
    for (const auto& [text, op] : kOps) {
      if (is_symbol(text)) {
        c.op = op;
        found = true;
      }
    }
    if (!found) fail({"'<'", "'<='", "'>'", "'>='", "'=='"});
    next();
    c.rhs = expr();
    return c;
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (is_symbol("+") || is_symbol("-")) {
      SourceLoc loc = peek().loc;
      Expr::Kind kind = next().text == "+" ? Expr::Kind::add : Expr::Kind::sub;
      lhs = make_binary(kind, lhs, term(), loc);
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (is_symbol("*") || is_symbol("/")) {
      SourceLoc loc = peek().loc;
      Expr::Kind kind = next().text == "*" ? Expr::Kind::mul : Expr::Kind::div;
      lhs = make_binary(kind, lhs, factor(), loc);
    }
    return lhs;
  }

  ExprPtr factor() {
    const Token& tok = peek();
    auto e = std::make_shared<Expr>();
    e->loc = tok.loc;
    switch (tok.kind) {
      case Token::Kind::integer:
      case Token::Kind::rational:
        e->kind = Expr::Kind::literal;
        e->literal = parse_rational(tok.text);
        next();
        return e;
      case Token::Kind::ident:
        if (tok.text == "min" || tok.text == "max") {
          e->kind = tok.text == "min" ? Expr::Kind::min : Expr::Kind::max;
          next();
          expect_symbol("(");
          e->lhs = expr();
          expect_symbol(",");
          e->rhs = expr();
          expect_symbol(")");
          return e;
        }
        e->kind = Expr::Kind::identifier;
        e->name = identifier();
        return e;
      case Token::Kind::symbol:
        if (tok.text == "(") {
          next();
          ExprPtr inner = expr();
          expect_symbol(")");
          return inner;
        }
        if (tok.text == "-") {
          next();
          e->kind = Expr::Kind::neg;
          e->lhs = factor();
          return e;
        }
        break;
      case Token::Kind::end: break;
    }
    fail({"number", "identifier", "'('", "'-'", "'min'", "'max'"});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

void collect_identifiers(const Expr& e, std::vector<const Expr*>& out) {
  if (e.kind == Expr::Kind::identifier) out.push_back(&e);
  if (e.lhs) collect_identifiers(*e.lhs, out);
  if (e.rhs) collect_identifiers(*e.rhs, out);
}

void check_bound(const Expr& e, const std::set<std::string, std::less<>>& scope) {
  std::vector<const Expr*> ids;
  collect_identifiers(e, ids);
  for (const Expr* id : ids) {
    if (!scope.contains(id->name)) throw SchemeParseError(id->loc, "unbound identifier '" + id->name + "'");
  }
}

void check_semantics(const SchemeAst& ast) {
  std::set<std::string, std::less<>> scope;
  for (const auto& p : ast.params) {
    if (!scope.insert(p).second) throw SchemeParseError({}, "duplicate parameter '" + p + "'");
  }
  std::set<std::string, std::less<>> state_names;
  for (const auto& var : ast.state) {
    check_bound(*var.init, scope);
    if (scope.contains(var.name)) {
      throw SchemeParseError(var.loc, "duplicate state variable '" + var.name + "'");
    }
    scope.insert(var.name);
    state_names.insert(var.name);
  }
  bool has_guard = false;
  for (const auto& st : ast.step) {
    switch (st.kind) {
      case Statement::Kind::let:
        check_bound(*st.expr, scope);
        if (!scope.insert(st.name).second) {
          throw SchemeParseError(st.loc, "'" + st.name + "' is already bound");
        }
        break;
      case Statement::Kind::guard:
        has_guard = true;
        check_bound(*st.condition.lhs, scope);
        check_bound(*st.condition.rhs, scope);
        break;
      case Statement::Kind::assign:
        check_bound(*st.expr, scope);
        if (!state_names.contains(st.name)) {
          throw SchemeParseError(st.loc, "assignment to '" + st.name + "', which is not a state variable");
        }
        break;
    }
  }
  if (!has_guard) throw SchemeParseError({}, "scheme '" + ast.name + "' has no guard and could never terminate");
}

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::add:
    case Expr::Kind::sub: return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div: return 2;
    case Expr::Kind::neg: return 3;
    default: return 4;
  }
}

void print(const Expr& e, std::ostringstream& out);

void print_operand(const Expr& e, bool parens, std::ostringstream& out) {
  if (parens) out << '(';
  print(e, out);
  if (parens) out << ')';
}

void print(const Expr& e, std::ostringstream& out) {
  switch (e.kind) {
    case Expr::Kind::literal: out << to_exact_string(e.literal); return;
    case Expr::Kind::identifier: out << e.name; return;
    case Expr::Kind::neg:
      out << '-';
      print_operand(*e.lhs, precedence(*e.lhs) < 3 || e.lhs->kind == Expr::Kind::neg, out);
      return;
    case Expr::Kind::min:
    case Expr::Kind::max:
      out << (e.kind == Expr::Kind::min ? "min(" : "max(");
      print(*e.lhs, out);
      out << ", ";
      print(*e.rhs, out);
      out << ')';
      return;
    default: break;
  }
  const int prec = precedence(e);
  const char* op = e.kind == Expr::Kind::add ? " + " : e.kind == Expr::Kind::sub ? " - " : e.kind == Expr::Kind::mul ? "*" : " / ";
  print_operand(*e.lhs, precedence(*e.lhs) < prec, out);
  out << op;
  bool right_parens = precedence(*e.rhs) <= prec && precedence(*e.rhs) < 3;
  // Division is printed with blanks so "n / d" never lexes as one literal;
  // a rational literal right after '/' would be split by the lexer.
  if (e.kind == Expr::Kind::div && e.rhs->kind == Expr::Kind::literal && e.rhs->literal.get_den() != 1) {
    right_parens = true;
  }
  if (e.rhs->kind == Expr::Kind::neg) right_parens = true;
  print_operand(*e.rhs, right_parens, out);
}

const char* comparator_text(Comparator op) {
  switch (op) {
    case Comparator::less: return "<";
    case Comparator::less_equal: return "<=";
    case Comparator::greater: return ">";
    case Comparator::greater_equal: return ">=";
    case Comparator::equal: return "==";
  }
  return "?";
}

}  // namespace

SchemeParseError::SchemeParseError(SourceLoc loc, const std::string& message, std::vector<std::string> expected)
    : ParseError("line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column) + ": " + message),
      loc_(loc),
      expected_(std::move(expected)) {}

SchemeRuntimeError::SchemeRuntimeError(SourceLoc loc, const std::string& message)
    : DomainError("line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column) + ": " + message),
      loc_(loc) {}

std::vector<std::string> SchemeAst::terminals() const {
  std::vector<std::string> out;
  for (const auto& st : step) {
    if (st.kind == Statement::Kind::guard && std::find(out.begin(), out.end(), st.terminal) == out.end()) {
      out.push_back(st.terminal);
    }
  }
  return out;
}

bool structurally_equal(const Expr& x, const Expr& y) {
  if (x.kind != y.kind || x.literal != y.literal || x.name != y.name) return false;
  if (bool(x.lhs) != bool(y.lhs) || bool(x.rhs) != bool(y.rhs)) return false;
  if (x.lhs && !structurally_equal(*x.lhs, *y.lhs)) return false;
  if (x.rhs && !structurally_equal(*x.rhs, *y.rhs)) return false;
  return true;
}

bool structurally_equal(const SchemeAst& x, const SchemeAst& y) {
  if (x.name != y.name || x.params != y.params || x.state.size() != y.state.size() ||
      x.step.size() != y.step.size()) {
    return false;
  }
  for (std::size_t i = 0; i < x.state.size(); ++i) {
    if (x.state[i].name != y.state[i].name || !structurally_equal(*x.state[i].init, *y.state[i].init)) return false;
  }
  for (std::size_t i = 0; i < x.step.size(); ++i) {
    const Statement& a = x.step[i];
    const Statement& b = y.step[i];
    if (a.kind != b.kind || a.name != b.name || a.terminal != b.terminal) return false;
    if (a.kind == Statement::Kind::guard) {
      if (a.condition.op != b.condition.op || !structurally_equal(*a.condition.lhs, *b.condition.lhs) ||
          !structurally_equal(*a.condition.rhs, *b.condition.rhs)) {
        return false;
      }
    } else if (!structurally_equal(*a.expr, *b.expr)) {
      return false;
    }
  }
  return true;
}

int expr_depth(const Expr& expr) {
  int depth = 0;
  if (expr.lhs) depth = std::max(depth, expr_depth(*expr.lhs));
  if (expr.rhs) depth = std::max(depth, expr_depth(*expr.rhs));
  return depth + 1;
}

SchemeAst parse_scheme(std::string_view text) {
  Parser parser(text);
  SchemeAst ast = parser.scheme();
  check_semantics(ast);
  return ast;
}

ExprPtr parse_expr(std::string_view text) {
  Parser parser(text);
  return parser.standalone_expr();
}

std::string pretty_print(const Expr& expr) {
  std::ostringstream out;
  print(expr, out);
  return out.str();
}

std::string pretty_print(const SchemeAst& scheme) {
  std::ostringstream out;
  out << "scheme " << scheme.name << " {\n  param ";
  for (std::size_t i = 0; i < scheme.params.size(); ++i) out << (i ? ", " : "") << scheme.params[i];
  out << ";\n";
  for (const auto& var : scheme.state) out << "  state " << var.name << " = " << pretty_print(*var.init) << ";\n";
  out << "  step {\n";
  for (const auto& st : scheme.step) {
    out << "    ";
    switch (st.kind) {
      case Statement::Kind::let: out << "let " << st.name << " = " << pretty_print(*st.expr); break;
      case Statement::Kind::assign: out << st.name << " = " << pretty_print(*st.expr); break;
      case Statement::Kind::guard:
        out << "guard " << pretty_print(*st.condition.lhs) << ' ' << comparator_text(st.condition.op) << ' '
            << pretty_print(*st.condition.rhs) << " else terminate " << st.terminal;
        break;
    }
    out << ";\n";
  }
  out << "  }\n}\n";
  return out.str();
}

}  // namespace expboot::scheme
