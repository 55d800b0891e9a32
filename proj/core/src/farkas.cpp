#include "pterm/farkas.hpp"

#include <set>

#include "pterm/errors.hpp"

namespace pterm::lp {

namespace {

int width(const Polyhedron& p, int num_vars) {
  int w = num_vars;
  for (const auto& c : p.constraints) w = std::max(w, c.lhs.max_var() + 1);
  return std::max(w, 0);
}

}  // namespace

FeasibilityResult check_feasible(const Polyhedron& p, int num_vars) {
  const int n = width(p, num_vars);
  LPProblem lp;
  for (int v = 0; v < n; ++v) lp.add_unknown("x" + std::to_string(v));
  const bool strict = p.has_strict();
  // Strict rows are tightened by a common slack t which is then maximized.
  const UnknownId t = strict ? lp.add_unknown("t", std::nullopt, Rational(1)) : -1;
  for (const auto& c : p.constraints) {
    if (c.rel == Rel::Lt) {
      LinExpr lhs = c.lhs;
      lhs.add_term(t, Rational(1));
      lp.add_constraint({lhs, Rel::Le});
    } else {
      lp.add_constraint(c);
    }
  }
  if (strict) lp.set_objective(LinExpr::variable(t, Rational(1)));
  const LPResult r = solve_lp(lp);
  if (r.status != LPStatus::Optimal) return {};
  if (strict && r.value.sign() <= 0) return {};
  FeasibilityResult out;
  out.feasible = true;
  out.witness.assign(r.assignment.begin(), r.assignment.begin() + n);
  return out;
}

EntailmentResult entails(const Polyhedron& premise, const LinConstraint& conclusion, int num_vars) {
  for (const auto& neg : negate(conclusion)) {
    Polyhedron q = premise;
    q.constraints.push_back(neg);
    auto f = check_feasible(q, num_vars);
    if (f.feasible) return {false, std::move(f.witness)};
  }
  return {};
}

AntecedentStatus prepare_antecedent(Polyhedron& antecedent, int num_vars) {
  auto simplified = antecedent.simplified();
  if (!simplified) return AntecedentStatus::Empty;
  if (!check_feasible(*simplified, num_vars).feasible) return AntecedentStatus::Empty;
  antecedent = simplified->relaxed();
  return AntecedentStatus::Relaxed;
}

std::vector<LinConstraint> encode_implication(const Implication& imp, LPProblem& lp, const std::string& tag) {
  // Rows a.x <= b from lhs = a.x - b <= 0; equalities become two rows.
  std::vector<LinExpr> rows;
  for (const auto& c : imp.antecedent.constraints) {
    if (c.rel == Rel::Lt) throw InfeasibleAntecedentNotRelaxed("strict row in antecedent of " + tag);
    rows.push_back(c.lhs);
    if (c.rel == Rel::Eq) rows.push_back(-c.lhs);
  }

  std::set<VarId> vars;
  for (const auto& r : rows)
    for (const auto& [v, _] : r.coeffs()) vars.insert(v);
  for (const auto& [v, _] : imp.consequent.coeffs()) vars.insert(v);

  std::vector<UnknownId> lambda;
  lambda.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    lambda.push_back(lp.add_unknown(tag + ".lam" + std::to_string(r), Rational(0)));

  // sum_r lam_r a_r + c = 0 componentwise, and sum_r lam_r b_r - c0 <= 0.
  std::vector<LinConstraint> out;
  for (VarId v : vars) {
    LinExpr e = imp.consequent.coeff(v);
    for (std::size_t r = 0; r < rows.size(); ++r) e.add_term(lambda[r], rows[r].coeff(v));
    out.push_back({e, Rel::Eq});
  }
  LinExpr k = -imp.consequent.constant();
  for (std::size_t r = 0; r < rows.size(); ++r)
    k.add_term(lambda[r], -rows[r].constant());
  out.push_back({k, Rel::Le});
  return out;
}

}  // namespace pterm::lp
