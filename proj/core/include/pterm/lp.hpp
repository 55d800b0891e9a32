#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pterm/constraint.hpp"

namespace pterm::lp {

using UnknownId = VarId;

struct Unknown {
  std::string name;
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

/// Linear program over rational unknowns: maximize `objective` subject to
/// rows `lhs <= 0` / `lhs == 0` and per-unknown bounds.
class LPProblem {
 public:
  UnknownId add_unknown(std::string name, std::optional<Rational> lower = std::nullopt,
                        std::optional<Rational> upper = std::nullopt);
  void set_bounds(UnknownId id, std::optional<Rational> lower, std::optional<Rational> upper);

  /// Strict rows are rejected with std::invalid_argument.
  void add_constraint(LinConstraint c);
  void set_objective(LinExpr e) { objective_ = std::move(e); }

  const std::vector<Unknown>& unknowns() const { return unknowns_; }
  const std::vector<LinConstraint>& constraints() const { return constraints_; }
  const LinExpr& objective() const { return objective_; }
  std::size_t num_unknowns() const { return unknowns_.size(); }

 private:
  std::vector<Unknown> unknowns_;
  std::vector<LinConstraint> constraints_;
  LinExpr objective_;
};

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* status_name(LPStatus s);

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  std::vector<Rational> assignment;  // one value per unknown when Optimal
  Rational value;
  std::size_t pivots = 0;
};

struct SolverOptions {
  std::size_t iteration_cap = 1'000'000;
};

/// Exact two-phase primal simplex over the rationals with Bland's rule.
/// Deterministic for a fixed problem.
LPResult solve_lp(const LPProblem& lp, const SolverOptions& options = {});

/// Every row and bound holds exactly at `assignment`.
bool satisfies(const LPProblem& lp, std::span<const Rational> assignment);

/// CPLEX LP text rendering (coefficients printed as decimals) for
/// cross-checking with external solvers.
std::string to_lp_format(const LPProblem& lp);

}  // namespace pterm::lp
