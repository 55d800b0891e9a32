#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pterm/constraint.hpp"
#include "pterm/errors.hpp"
#include "pterm/pcfg.hpp"

namespace pterm::frontend {

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// Problem in program text; `line()`/`column()` locate the first offending
/// token.
class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& what)
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + what), pos_(pos) {}
  int line() const { return pos_.line; }
  int column() const { return pos_.column; }

 private:
  SourcePos pos_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

class NonLinearExpression : public ParseError {
 public:
  using ParseError::ParseError;
};

class MultipleSamplesInAssignment : public ParseError {
 public:
  using ParseError::ParseError;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct Skip {};

/// target := base [+ coefficient * sample]
struct Assign {
  VarId target = 0;
  LinExpr base;
  std::optional<SampleTerm> sample;
};

/// target := ndet[lo, hi]
struct AssignNondet {
  VarId target = 0;
  Rational lo;
  Rational hi;
};

struct While {
  Predicate cond;
  Block body;
};

struct IfProb {
  Rational p;
  Block then_branch;
  Block else_branch;
};

/// Demonic choice between the two branches.
struct IfStar {
  Block then_branch;
  Block else_branch;
};

struct IfCond {
  Predicate cond;
  Block then_branch;
  Block else_branch;
};

struct Stmt {
  std::variant<Skip, Assign, AssignNondet, While, IfProb, IfStar, IfCond> node;
  SourcePos pos;
};

struct SourceProgram {
  /// Declared (`var x, y;`) or in order of first use.
  std::vector<std::string> variables;
  Block body;
};

/// Parses a whole program. An empty program is a single skip.
SourceProgram parse_program(std::string_view text);

/// Parses a conjunction of linear constraints such as "x >= -7 and y < 2*x"
/// over the given variable names. Used by the invariant sidecar format.
Polyhedron parse_polyhedron(std::string_view text, std::span<const std::string> variables);

}  // namespace pterm::frontend
