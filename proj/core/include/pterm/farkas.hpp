#pragma once

#include <span>
#include <string>
#include <vector>

#include "pterm/constraint.hpp"
#include "pterm/lp.hpp"

namespace pterm::lp {

struct FeasibilityResult {
  bool feasible = false;
  /// A point satisfying every row (strict ones strictly) when feasible.
  std::vector<Rational> witness;
};

/// Exact satisfiability of a conjunction that may contain strict rows.
/// `num_vars` sizes the witness; pass -1 to size it from the polyhedron.
FeasibilityResult check_feasible(const Polyhedron& p, int num_vars = -1);

struct EntailmentResult {
  bool holds = true;
  /// Point in `premise` violating the conclusion when `holds` is false.
  std::vector<Rational> counterexample;
};

/// Whether every point of `premise` satisfies `conclusion`.
EntailmentResult entails(const Polyhedron& premise, const LinConstraint& conclusion, int num_vars = -1);

/// `forall x. antecedent(x) => consequent(x) >= 0` where the consequent's
/// coefficients are affine in the unknowns of the LP it is encoded into.
struct Implication {
  Polyhedron antecedent;
  TemplateExpr consequent;
};

/// Adds nonnegative multipliers to `lp` and returns the rows that, together
/// with them, are equivalent to the implication (for a satisfiable
/// antecedent without strict rows). Throws InfeasibleAntecedentNotRelaxed on
/// strict rows.
std::vector<LinConstraint> encode_implication(const Implication& imp, LPProblem& lp, const std::string& tag);

/// Outcome of preparing an antecedent for encoding.
enum class AntecedentStatus { Empty, Relaxed };

/// Drops unsatisfiable antecedents (returns Empty) and relaxes strict rows
/// of satisfiable ones in place.
AntecedentStatus prepare_antecedent(Polyhedron& antecedent, int num_vars = -1);

}  // namespace pterm::lp
