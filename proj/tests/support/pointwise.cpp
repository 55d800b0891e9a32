#include "support/pointwise.hpp"

#include <algorithm>
#include <functional>

namespace pterm::testing {

namespace {

Rational eval(const LinExpr& e, const std::vector<Rational>& x) {
  Rational v = e.constant();
  for (const auto& [var, c] : e.coeffs()) v += c * x[static_cast<std::size_t>(var)];
  return v;
}

int level_of(const PCFG& p, const Certificate& c, LocId loc, const std::vector<Rational>& x) {
  int best = 0;
  for (const auto& t : p.transitions)
    if (t.source == loc && t.guard().holds(x)) best = std::max(best, c.levels.at(t.id));
  return best;
}

/// Successor valuations of a guarded step, one per nondet endpoint.
std::vector<std::vector<Rational>> step_outcomes(const GuardedStep& s, const std::vector<Rational>& x) {
  if (const auto* u = std::get_if<ExprUpdate>(&s.update)) {
    auto y = x;
    Rational v = eval(u->base, x);
    if (u->sample) v += u->sample->coefficient * u->sample->dist.mean;
    y[static_cast<std::size_t>(u->target)] = v;
    return {y};
  }
  if (const auto* u = std::get_if<NondetUpdate>(&s.update)) {
    auto lo = x, hi = x;
    lo[static_cast<std::size_t>(u->target)] = u->lo;
    hi[static_cast<std::size_t>(u->target)] = u->hi;
    return {lo, hi};
  }
  return {x};
}

}  // namespace

std::vector<PointViolation> pointwise_violations(const PCFG& p, const Certificate& c, const Transition& t,
                                                 const std::vector<Rational>& x) {
  std::vector<PointViolation> out;
  const int lev = c.levels.at(t.id);
  auto eta = [&](LocId l, int j, const std::vector<Rational>& y) { return eval(c.lem.at(l, j - 1), y); };
  for (int j = 1; j <= lev; ++j) {
    const Rational here = eta(t.source, j, x);
    if (here.sign() < 0) out.push_back({t.id, "P-NNEG", j});
    Rational hi, lo;
    if (t.is_pb()) {
      const auto& b = t.pb();
      hi = lo = b.p1 * eta(b.dest1, j, x) + b.p2 * eta(b.dest2, j, x);
      Rational restricted(0);
      if (level_of(p, c, b.dest1, x) <= j - 1) restricted += b.p1 * eta(b.dest1, j, x);
      if (level_of(p, c, b.dest2, x) <= j - 1) restricted += b.p2 * eta(b.dest2, j, x);
      if (restricted.sign() < 0) out.push_back({t.id, "EXP-NNEG", j});
    } else {
      const auto outcomes = step_outcomes(t.step(), x);
      hi = lo = eta(t.step().dest, j, outcomes.front());
      for (const auto& y : outcomes) {
        const Rational v = eta(t.step().dest, j, y);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
      if (lo.sign() < 0) out.push_back({t.id, "W-EXP-NNEG", j});
    }
    const Rational allowed = j == lev ? here - Rational(1) : here;
    if (hi > allowed) out.push_back({t.id, "P-RANK", j});
  }
  return out;
}

std::vector<std::vector<Rational>> enabled_grid(const PCFG& p, const Invariant& inv, const Transition& t, int r) {
  std::vector<std::vector<Rational>> out;
  const int n = p.num_vars();
  const int steps = 4 * r + 1;
  std::vector<Rational> x(static_cast<std::size_t>(n));
  const Predicate guard = t.guard();
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      if (inv[t.source].holds(x) && guard.holds(x)) out.push_back(x);
      return;
    }
    for (int k = 0; k < steps; ++k) {
      x[static_cast<std::size_t>(i)] = Rational(-r) + Rational(k) / Rational(2);
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace pterm::testing
