#include "pterm/lp.hpp"

#include <cassert>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace pterm::lp {

UnknownId LPProblem::add_unknown(std::string name, std::optional<Rational> lower, std::optional<Rational> upper) {
  unknowns_.push_back({std::move(name), std::move(lower), std::move(upper)});
  return static_cast<UnknownId>(unknowns_.size() - 1);
}

void LPProblem::set_bounds(UnknownId id, std::optional<Rational> lower, std::optional<Rational> upper) {
  auto& u = unknowns_.at(static_cast<std::size_t>(id));
  u.lower = std::move(lower);
  u.upper = std::move(upper);
}

void LPProblem::add_constraint(LinConstraint c) {
  if (c.rel == Rel::Lt) throw std::invalid_argument("strict rows are not allowed in an LP");
  if (c.lhs.max_var() >= static_cast<VarId>(unknowns_.size()))
    throw std::invalid_argument("constraint mentions an undeclared unknown");
  constraints_.push_back(std::move(c));
}

const char* status_name(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

// x_j = offset + sum(coef * column)
struct ColumnMap {
  mpq_class offset;
  std::vector<std::pair<std::size_t, mpq_class>> terms;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : a_(rows, std::vector<mpq_class>(cols + 1)), basis_(rows, 0) {}

  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return a_.empty() ? 0 : a_.front().size() - 1; }
  mpq_class& at(std::size_t r, std::size_t c) { return a_[r][c]; }
  mpq_class& rhs(std::size_t r) { return a_[r].back(); }
  std::size_t& basic(std::size_t r) { return basis_[r]; }

  /// Objective row stores z_j - c_j so that a negative entry means the
  /// column improves a maximization.
  void set_objective(const std::vector<mpq_class>& cost) {
    obj_.assign(cols() + 1, 0);
    for (std::size_t j = 0; j < cols(); ++j) obj_[j] = -cost[j];
    for (std::size_t r = 0; r < rows(); ++r) {
      const mpq_class cb = cost[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols(); ++j)
        if (sgn(a_[r][j]) != 0) obj_[j] += cb * a_[r][j];
    }
  }

  const mpq_class& objective_value() const { return obj_.back(); }

  enum class Outcome { Optimal, Unbounded, IterationLimit };

  Outcome optimize(const std::vector<bool>& allowed, std::size_t& pivots, std::size_t cap) {
    for (;;) {
      std::size_t enter = cols();
      for (std::size_t j = 0; j < cols(); ++j)
        if (allowed[j] && sgn(obj_[j]) < 0) {
          enter = j;
          break;
        }
      if (enter == cols()) return Outcome::Optimal;

      std::size_t leave = rows();
      mpq_class best_ratio;
      for (std::size_t r = 0; r < rows(); ++r) {
        if (sgn(a_[r][enter]) <= 0) continue;
        mpq_class ratio = a_[r].back() / a_[r][enter];
        if (leave == rows() || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == rows()) return Outcome::Unbounded;
      if (pivots >= cap) return Outcome::IterationLimit;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = a_[r];
    const mpq_class p = prow[c];
    for (auto& v : prow)
      if (sgn(v) != 0) v /= p;
    auto eliminate = [&](std::vector<mpq_class>& row) {
      const mpq_class f = row[c];
      if (sgn(f) == 0) return;
      for (std::size_t j = 0; j < row.size(); ++j)
        if (sgn(prow[j]) != 0) row[j] -= f * prow[j];
    };
    for (std::size_t i = 0; i < rows(); ++i)
      if (i != r) eliminate(a_[i]);
    if (!obj_.empty()) eliminate(obj_);
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  std::vector<std::vector<mpq_class>> a_;
  std::vector<std::size_t> basis_;
  std::vector<mpq_class> obj_;
};

}  // namespace

LPResult solve_lp(const LPProblem& lp, const SolverOptions& options) {
  const auto& unknowns = lp.unknowns();
  std::vector<ColumnMap> maps(unknowns.size());
  std::size_t ncols = 0;

  // Rows in "sum(coef * col) <= / == rhs" form before slack insertion.
  struct Row {
    std::vector<std::pair<std::size_t, mpq_class>> terms;
    mpq_class rhs;
    bool equality = false;
  };
  std::vector<Row> rows;

  for (std::size_t j = 0; j < unknowns.size(); ++j) {
    const auto& u = unknowns[j];
    if (u.lower) {
      maps[j].offset = u.lower->raw();
      maps[j].terms.push_back({ncols, 1});
      if (u.upper) rows.push_back({{{ncols, 1}}, u.upper->raw() - u.lower->raw(), false});
      ++ncols;
    } else if (u.upper) {
      maps[j].offset = u.upper->raw();
      maps[j].terms.push_back({ncols++, -1});
    } else {
      maps[j].terms.push_back({ncols++, 1});
      maps[j].terms.push_back({ncols++, -1});
    }
  }

  auto expand = [&](const LinExpr& e, std::vector<mpq_class>& dense) {
    mpq_class constant = e.constant().raw();
    for (const auto& [v, c] : e.coeffs()) {
      const auto& m = maps[static_cast<std::size_t>(v)];
      constant += c.raw() * m.offset;
      for (const auto& [col, k] : m.terms) dense[col] += c.raw() * k;
    }
    return constant;
  };

  for (const auto& c : lp.constraints()) {
    std::vector<mpq_class> dense(ncols);
    const mpq_class constant = expand(c.lhs, dense);
    Row row;
    for (std::size_t col = 0; col < ncols; ++col)
      if (sgn(dense[col]) != 0) row.terms.push_back({col, dense[col]});
    row.rhs = -constant;
    row.equality = c.rel == Rel::Eq;
    rows.push_back(std::move(row));
  }

  std::size_t nslack = 0;
  for (const auto& r : rows)
    if (!r.equality) ++nslack;
  // Rows needing an artificial: equalities and rows whose rhs is negative.
  std::size_t nart = 0;
  for (const auto& r : rows)
    if (r.equality || sgn(r.rhs) < 0) ++nart;

  const std::size_t slack0 = ncols, art0 = ncols + nslack, total = ncols + nslack + nart;
  Tableau t(rows.size(), total);
  std::size_t next_slack = slack0, next_art = art0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool flip = sgn(r.rhs) < 0;
    const int s = flip ? -1 : 1;
    for (const auto& [col, k] : r.terms) t.at(i, col) = s * k;
    t.rhs(i) = s * r.rhs;
    std::optional<std::size_t> slack;
    if (!r.equality) {
      slack = next_slack++;
      t.at(i, *slack) = s;
    }
    if (r.equality || flip) {
      const std::size_t a = next_art++;
      t.at(i, a) = 1;
      t.basic(i) = a;
    } else {
      t.basic(i) = *slack;
    }
  }

  LPResult result;
  std::vector<bool> allowed(total, true);

  if (nart > 0) {
    std::vector<mpq_class> cost(total, 0);
    for (std::size_t a = art0; a < total; ++a) cost[a] = -1;
    t.set_objective(cost);
    auto outcome = t.optimize(allowed, result.pivots, options.iteration_cap);
    if (outcome == Tableau::Outcome::IterationLimit) {
      result.status = LPStatus::IterationLimit;
      return result;
    }
    if (sgn(t.objective_value()) != 0) {
      result.status = LPStatus::Infeasible;
      return result;
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    for (std::size_t i = t.rows(); i-- > 0;) {
      if (t.basic(i) < art0) continue;
      std::size_t col = art0;
      for (std::size_t j = 0; j < art0; ++j)
        if (sgn(t.at(i, j)) != 0) {
          col = j;
          break;
        }
      if (col == art0)
        t.drop_row(i);
      else
        t.pivot(i, col);
    }
    for (std::size_t a = art0; a < total; ++a) allowed[a] = false;
  }

  std::vector<mpq_class> cost(total, 0);
  {
    std::vector<mpq_class> dense(ncols);
    expand(lp.objective(), dense);
    for (std::size_t col = 0; col < ncols; ++col) cost[col] = dense[col];
  }
  t.set_objective(cost);
  auto outcome = t.optimize(allowed, result.pivots, options.iteration_cap);
  if (outcome == Tableau::Outcome::IterationLimit) {
    result.status = LPStatus::IterationLimit;
    return result;
  }
  if (outcome == Tableau::Outcome::Unbounded) {
    result.status = LPStatus::Unbounded;
    return result;
  }

  std::vector<mpq_class> colval(total, 0);
  for (std::size_t i = 0; i < t.rows(); ++i) colval[t.basic(i)] = t.rhs(i);
  result.assignment.reserve(unknowns.size());
  for (std::size_t j = 0; j < unknowns.size(); ++j) {
    mpq_class v = maps[j].offset;
    for (const auto& [col, k] : maps[j].terms) v += k * colval[col];
    result.assignment.emplace_back(v);
  }
  result.value = lp.objective().eval(result.assignment);
  result.status = LPStatus::Optimal;
#ifndef NDEBUG
  assert(satisfies(lp, result.assignment));
#endif
  return result;
}

bool satisfies(const LPProblem& lp, std::span<const Rational> assignment) {
  if (assignment.size() != lp.num_unknowns()) return false;
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    const auto& u = lp.unknowns()[j];
    if (u.lower && assignment[j] < *u.lower) return false;
    if (u.upper && assignment[j] > *u.upper) return false;
  }
  for (const auto& c : lp.constraints())
    if (!c.holds(assignment)) return false;
  return true;
}

namespace {

std::string lp_name(const LPProblem& lp, VarId v) {
  std::string s = lp.unknowns()[static_cast<std::size_t>(v)].name;
  for (auto& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') ch = '_';
  return "u" + std::to_string(v) + "_" + s;
}

void write_terms(std::ostream& os, const LPProblem& lp, const LinExpr& e) {
  bool first = true;
  for (const auto& [v, c] : e.coeffs()) {
    const double d = c.to_double();
    os << (first ? (d < 0 ? "- " : "") : (d < 0 ? " - " : " + ")) << std::abs(d) << " " << lp_name(lp, v);
    first = false;
  }
  if (first) os << "0 " << (lp.num_unknowns() ? lp_name(lp, 0) : "dummy");
}

}  // namespace

std::string to_lp_format(const LPProblem& lp) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "\\ exported by pterm\nMaximize\n obj: ";
  write_terms(os, lp, lp.objective());
  os << "\nSubject To\n";
  std::size_t k = 0;
  for (const auto& c : lp.constraints()) {
    os << " c" << k++ << ": ";
    write_terms(os, lp, c.lhs);
    os << (c.rel == Rel::Eq ? " = " : " <= ") << -c.lhs.constant().to_double() << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_unknowns(); ++j) {
    const auto& u = lp.unknowns()[j];
    const std::string n = lp_name(lp, static_cast<VarId>(j));
    if (!u.lower && !u.upper)
      os << " " << n << " free\n";
    else
      os << " " << (u.lower ? std::to_string(u.lower->to_double()) : std::string("-inf")) << " <= " << n
         << " <= " << (u.upper ? std::to_string(u.upper->to_double()) : std::string("+inf")) << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace pterm::lp
