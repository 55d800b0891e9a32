#include <algorithm>
#include <set>

#include "lexer.hpp"
#include "pterm/ast.hpp"

namespace pterm::frontend {

namespace {

const std::set<std::string, std::less<>> kKeywords = {"var",  "skip", "while", "do",  "od",  "if",    "then",
                                                      "else", "fi",   "prob",  "and", "or",  "not",   "true",
                                                      "false", "ndet", "inf"};

const std::set<std::string, std::less<>> kDistributions = {"Norm", "Normal", "Unif", "Uniform",
                                                           "Bernoulli", "Discrete", "Custom"};

/// Linear expression possibly carrying one scaled sample.
struct Term {
  LinExpr lin;
  std::optional<SampleTerm> sample;

  bool is_constant() const { return lin.is_constant() && !sample; }
};

class Parser {
 public:
  Parser(std::string_view text, std::vector<std::string> vars, bool fixed_vars)
      : toks_(tokenize(text)), vars_(std::move(vars)), fixed_vars_(fixed_vars) {}

  SourceProgram program() {
    if (accept_ident("var")) {
      do {
        const Token& t = expect_ident("variable name");
        declare(t);
      } while (accept(","));
      expect(";");
      fixed_vars_ = true;
    }
    SourceProgram p;
    p.body = block();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    if (p.body.empty()) p.body.push_back({Skip{}, peek().pos});
    p.variables = vars_;
    return p;
  }

  Polyhedron conjunction() {
    const Predicate p = cond();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    if (p.disjuncts().size() != 1) throw SyntaxError(toks_.front().pos, "invariant must be a conjunction of linear constraints");
    return p.disjuncts().front();
  }

 private:
  // ---- token helpers ----
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is(std::string_view punct, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == punct;
  }
  bool is_ident(std::string_view word) const { return peek().kind == Tok::Ident && peek().text == word; }
  bool accept(std::string_view punct) {
    if (!is(punct)) return false;
    next();
    return true;
  }
  bool accept_ident(std::string_view word) {
    if (!is_ident(word)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(peek().pos, what); }
  [[noreturn]] void fail_at(SourcePos p, const std::string& what) const { throw SyntaxError(p, what); }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "' but found '" + describe(peek()) + "'");
  }
  void expect_keyword(std::string_view word) {
    if (!accept_ident(word)) fail("expected '" + std::string(word) + "' but found '" + describe(peek()) + "'");
  }
  const Token& expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail("expected " + what);
    return next();
  }
  static std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : t.text; }

  // ---- variables ----
  VarId declare(const Token& t) {
    if (t.text == "const") fail_at(t.pos, "'const' is reserved and cannot name a variable");
    if (kDistributions.count(t.text)) fail_at(t.pos, "'" + t.text + "' is a distribution name");
    if (std::find(vars_.begin(), vars_.end(), t.text) != vars_.end()) fail_at(t.pos, "variable '" + t.text + "' declared twice");
    vars_.push_back(t.text);
    return static_cast<VarId>(vars_.size() - 1);
  }

  VarId variable(const Token& t) {
    auto it = std::find(vars_.begin(), vars_.end(), t.text);
    if (it != vars_.end()) return static_cast<VarId>(it - vars_.begin());
    if (fixed_vars_) fail_at(t.pos, "undeclared variable '" + t.text + "'");
    return declare(t);
  }

  // ---- statements ----
  bool block_end() const {
    return peek().kind == Tok::End || is_ident("od") || is_ident("fi") || is_ident("else");
  }

  Block block() {
    Block out;
    while (!block_end()) {
      out.push_back(statement());
      if (!accept(";")) break;
    }
    return out;
  }

  Stmt statement() {
    const SourcePos at = peek().pos;
    if (accept_ident("skip")) return {Skip{}, at};
    if (accept_ident("while")) {
      While w{cond(), {}};
      expect_keyword("do");
      w.body = block();
      expect_keyword("od");
      return {std::move(w), at};
    }
    if (accept_ident("if")) return if_statement(at);
    if (peek().kind == Tok::Ident && !kKeywords.count(peek().text) && is(":=", 1)) return assignment(at);
    fail("expected a statement but found '" + describe(peek()) + "'");
  }

  Stmt if_statement(SourcePos at) {
    auto branches = [&](Block& then_b, Block& else_b) {
      expect_keyword("then");
      then_b = block();
      if (accept_ident("else")) else_b = block();
      expect_keyword("fi");
    };
    if (accept_ident("prob")) {
      expect("(");
      const SourcePos ppos = peek().pos;
      const Rational p = constant_expr("branch probability");
      expect(")");
      if (p.sign() <= 0 || p >= Rational(1)) fail_at(ppos, "branch probability must lie strictly between 0 and 1");
      IfProb s{p, {}, {}};
      branches(s.then_branch, s.else_branch);
      return {std::move(s), at};
    }
    if (accept("*")) {
      IfStar s;
      branches(s.then_branch, s.else_branch);
      return {std::move(s), at};
    }
    IfCond s{cond(), {}, {}};
    branches(s.then_branch, s.else_branch);
    return {std::move(s), at};
  }

  Stmt assignment(SourcePos at) {
    const VarId target = variable(next());
    expect(":=");
    if (accept_ident("ndet")) {
      const bool bracket = accept("[");
      if (!bracket) expect("(");
      const Rational lo = constant_expr("nondet bound");
      expect(",");
      const Rational hi = constant_expr("nondet bound");
      expect(bracket ? "]" : ")");
      if (hi < lo) fail_at(at, "empty nondeterministic interval");
      return {AssignNondet{target, lo, hi}, at};
    }
    Term t = expr();
    return {Assign{target, std::move(t.lin), std::move(t.sample)}, at};
  }

  // ---- conditions ----
  Predicate cond() {
    Predicate p = conj();
    while (accept_ident("or") || accept("||")) p = disjoin(p, conj());
    return p;
  }

  Predicate conj() {
    Predicate p = neg();
    while (accept_ident("and") || accept("&&")) p = conjoin(p, neg());
    return p;
  }

  Predicate neg() {
    if (accept_ident("not") || accept("!")) {
      const std::vector<Predicate> inner{neg()};
      return negate_guards_to_dnf(inner);
    }
    if (accept_ident("true")) return Predicate::True();
    if (accept_ident("false")) return Predicate::False();
    if (is("(")) {
      // Either a parenthesized condition or an atom whose lhs starts with '('.
      const std::size_t save = pos_;
      try {
        next();
        Predicate p = cond();
        expect(")");
        if (!relop_ahead() && !is("+") && !is("-") && !is("*") && !is("/")) return p;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    return atom();
  }

  bool relop_ahead() const {
    for (const char* op : {"<=", "<", ">=", ">", "==", "=", "!="})
      if (is(op)) return true;
    return false;
  }

  Predicate atom() {
    const SourcePos at = peek().pos;
    const Term a = expr();
    if (!relop_ahead()) fail("expected a comparison operator but found '" + describe(peek()) + "'");
    const std::string op = next().text;
    const Term b = expr();
    if (a.sample || b.sample) fail_at(at, "sampling is not allowed in conditions");
    auto single = [](LinConstraint c) { return Predicate(Polyhedron{{std::move(c)}}); };
    if (op == "<=") return single(LinConstraint::le(a.lin, b.lin));
    if (op == "<") return single(LinConstraint::lt(a.lin, b.lin));
    if (op == ">=") return single(LinConstraint::ge(a.lin, b.lin));
    if (op == ">") return single(LinConstraint::gt(a.lin, b.lin));
    if (op == "!=") return disjoin(single(LinConstraint::lt(a.lin, b.lin)), single(LinConstraint::gt(a.lin, b.lin)));
    return single(LinConstraint::eq(a.lin, b.lin));
  }

  // ---- expressions ----
  Term expr() {
    Term acc = product();
    for (;;) {
      const SourcePos at = peek().pos;
      int sign;
      if (accept("+"))
        sign = 1;
      else if (accept("-"))
        sign = -1;
      else
        return acc;
      Term rhs = product();
      acc.lin += rhs.lin * Rational(sign);
      if (rhs.sample) {
        if (acc.sample) throw MultipleSamplesInAssignment(at, "at most one sampling term is allowed per expression");
        rhs.sample->coefficient *= Rational(sign);
        acc.sample = std::move(rhs.sample);
      }
    }
  }

  Term product() {
    Term acc = unary();
    for (;;) {
      const SourcePos at = peek().pos;
      if (accept("*")) {
        Term rhs = unary();
        if (acc.is_constant()) std::swap(acc, rhs);
        if (!rhs.is_constant()) throw NonLinearExpression(at, "product of two non-constant terms");
        scale(acc, rhs.lin.constant());
      } else if (accept("/")) {
        Term rhs = unary();
        if (!rhs.is_constant()) throw NonLinearExpression(at, "division by a non-constant term");
        if (rhs.lin.constant().is_zero()) fail_at(at, "division by zero");
        scale(acc, Rational(1) / rhs.lin.constant());
      } else {
        return acc;
      }
    }
  }

  static void scale(Term& t, const Rational& k) {
    t.lin *= k;
    if (t.sample) {
      t.sample->coefficient *= k;
      if (k.is_zero()) t.sample.reset();
    }
  }

  Term unary() {
    if (accept("-")) {
      Term t = unary();
      scale(t, Rational(-1));
      return t;
    }
    if (accept("+")) return unary();
    return primary();
  }

  Term primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      try {
        return {LinExpr(Rational::parse(t.text)), std::nullopt};
      } catch (const std::invalid_argument&) {
        fail_at(t.pos, "malformed number '" + t.text + "'");
      }
    }
    if (accept("(")) {
      Term inner = expr();
      expect(")");
      return inner;
    }
    if (t.kind == Tok::Ident && kDistributions.count(t.text) && (is("(", 1) || is("[", 1) || is("{", 1))) {
      next();
      return {LinExpr(), SampleTerm{Rational(1), distribution(t)}};
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      next();
      return {LinExpr::variable(variable(t), Rational(1)), std::nullopt};
    }
    fail("expected an expression but found '" + describe(t) + "'");
  }

  Rational constant_expr(const std::string& what) {
    const SourcePos at = peek().pos;
    const Term t = expr();
    if (!t.is_constant()) fail_at(at, what + " must be a constant");
    return t.lin.constant();
  }

  std::optional<Rational> bound_or_inf(const std::string& what, bool upper) {
    const bool minus = is("-") && peek(1).kind == Tok::Ident && peek(1).text == "inf";
    const bool plus = (is("+") && peek(1).kind == Tok::Ident && peek(1).text == "inf") || is_ident("inf");
    if (!minus && !plus) return constant_expr(what);
    if (minus == upper) fail(upper ? "upper support bound cannot be -inf" : "lower support bound cannot be +inf");
    if (!is_ident("inf")) next();
    next();
    return std::nullopt;
  }

  DistributionSpec distribution(const Token& name) {
    const std::string& n = name.text;
    DistributionSpec d;
    if (n == "Unif" || n == "Uniform") {
      const bool bracket = accept("[");
      if (!bracket) expect("(");
      const Rational lo = constant_expr("uniform bound");
      expect(",");
      const Rational hi = constant_expr("uniform bound");
      expect(bracket ? "]" : ")");
      if (!(lo < hi)) fail_at(name.pos, "uniform distribution requires lo < hi");
      d = DistributionSpec::uniform(lo, hi);
    } else if (n == "Norm" || n == "Normal") {
      expect("(");
      const Rational m = constant_expr("mean");
      expect(",");
      const Rational s = constant_expr("standard deviation");
      expect(")");
      if (s.sign() <= 0) fail_at(name.pos, "standard deviation must be positive");
      d = DistributionSpec::normal(m, s);
    } else if (n == "Bernoulli") {
      expect("(");
      const Rational p = constant_expr("probability");
      expect(")");
      if (p.sign() < 0 || p > Rational(1)) fail_at(name.pos, "Bernoulli parameter must lie in [0, 1]");
      d = DistributionSpec::bernoulli(p);
    } else if (n == "Discrete") {
      expect("{");
      std::vector<std::pair<Rational, Rational>> outcomes;
      do {
        const Rational v = constant_expr("outcome");
        expect(":");
        const Rational p = constant_expr("probability");
        outcomes.emplace_back(v, p);
      } while (accept(","));
      expect("}");
      d = DistributionSpec::discrete(std::move(outcomes));
    } else {
      expect("(");
      if (peek().kind != Tok::String) fail("expected a quoted sampler id");
      const std::string id = next().text;
      expect(",");
      const Rational mean = constant_expr("mean");
      expect(",");
      const auto lo = bound_or_inf("support bound", false);
      expect(",");
      const auto hi = bound_or_inf("support bound", true);
      expect(")");
      d = DistributionSpec::custom(id, mean, lo, hi);
    }
    if (auto problems = d.problems(); !problems.empty()) fail_at(name.pos, problems.front());
    return d;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> vars_;
  bool fixed_vars_;
};

}  // namespace

SourceProgram parse_program(std::string_view text) { return Parser(text, {}, false).program(); }

Polyhedron parse_polyhedron(std::string_view text, std::span<const std::string> variables) {
  return Parser(text, std::vector<std::string>(variables.begin(), variables.end()), true).conjunction();
}

}  // namespace pterm::frontend
