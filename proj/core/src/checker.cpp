#include "pterm/checker.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <json.hpp>

#include "pterm/errors.hpp"
#include "pterm/farkas.hpp"
#include "pterm/preexp.hpp"

namespace pterm::checker {

std::vector<ConditionResult> Report::violations() const {
  std::vector<ConditionResult> out;
  for (const auto& c : conditions)
    if (!c.holds) out.push_back(c);
  return out;
}

namespace {

void check_structure(const PCFG& p, const Certificate& c) {
  const auto& lem = c.lem;
  if (lem.dimension < 0) throw StructuralMismatch("negative dimension");
  if (lem.components.size() != static_cast<std::size_t>(p.num_locations()))
    throw StructuralMismatch("certificate has " + std::to_string(lem.components.size()) + " locations, program has " +
                             std::to_string(p.num_locations()));
  for (LocId l = 0; l < p.num_locations(); ++l) {
    const auto& comps = lem.components[static_cast<std::size_t>(l)];
    if (comps.size() != static_cast<std::size_t>(lem.dimension))
      throw StructuralMismatch("location " + p.locations[static_cast<std::size_t>(l)] + " has " +
                               std::to_string(comps.size()) + " components, expected " + std::to_string(lem.dimension));
    for (const auto& e : comps)
      if (e.max_var() >= p.num_vars())
        throw StructuralMismatch("component at " + p.locations[static_cast<std::size_t>(l)] + " uses an unknown variable");
  }
  std::set<std::string> ids;
  for (const auto& t : p.transitions) {
    ids.insert(t.id);
    auto it = c.levels.find(t.id);
    if (it == c.levels.end()) throw StructuralMismatch("no level for transition " + t.id);
    if (it->second < 0 || it->second > lem.dimension)
      throw StructuralMismatch("level of " + t.id + " outside 0.." + std::to_string(lem.dimension));
  }
  for (const auto& [id, lev] : c.levels)
    if (!ids.count(id)) throw StructuralMismatch("level given for unknown transition " + id);
}

class Checker {
 public:
  Checker(const PCFG& p, const Invariant& inv, const Certificate& c, const Options& o) : p_(p), inv_(inv), c_(c), o_(o) {}

  Report run() {
    Report r;
    r.mode = c_.mode;
    for (const auto& t : p_.transitions) check_transition(t);
    if (c_.mode == CertificateMode::GeneralSound) check_unbound();

    std::sort(results_.begin(), results_.end(), [](const ConditionResult& a, const ConditionResult& b) {
      return std::tie(a.transition, a.condition, a.component, a.detail) <
             std::tie(b.transition, b.condition, b.component, b.detail);
    });
    r.accepted = std::none_of(results_.begin(), results_.end(), [](const auto& x) { return !x.holds; });
    if (!o_.include_passed) std::erase_if(results_, [](const auto& x) { return x.holds; });
    r.conditions = std::move(results_);

    if (c_.mode == CertificateMode::BSPComplete) {
      const auto bsp = check_bsp(p_);
      if (!bsp.holds) {
        r.accepted = false;
        r.conditions.push_back({"", "BSP", 0, false, std::nullopt, "bounded-support mode on a program sampling from an unbounded distribution"});
      } else {
        const Rational needed = Rational(2) * effective_support_bound(p_) * c_.lem.max_coeff();
        r.shift_sufficient = c_.shift >= needed;
        r.assumptions.push_back(r.shift_sufficient
                                    ? "bounded support: the stored shift makes the map a LinGLexRSM map; a.s. termination follows"
                                    : "bounded support: premises hold, so shifting every component by a constant yields a "
                                      "LinGLexRSM map; a.s. termination follows");
      }
    } else {
      r.assumptions.push_back(
          "unbounded support: premises plus UNBOUND imply a piecewise linear GLexRSM map exists; this construction is "
          "not checked");
      if (!check_linpp_star(p_)) {
        r.accepted = false;
        r.conditions.push_back({"", "LINPP*", 0, false, std::nullopt,
                                "a location is both a probabilistic-branch successor and a sampling target"});
      }
    }
    return r;
  }

 private:
  const LinExpr& eta(LocId l, int j) const { return c_.lem.at(l, j - 1); }
  int level(const Transition& t) const { return c_.levels.at(t.id); }

  void record(const Transition& t, const char* cond, int j, std::optional<std::vector<Rational>> cex, std::string detail = {}) {
    ConditionResult r{t.id, cond, j, !cex, std::nullopt, std::move(detail)};
    if (cex) {
      std::map<std::string, Rational> named;
      for (int v = 0; v < p_.num_vars(); ++v)
        named[p_.variables[static_cast<std::size_t>(v)]] =
            static_cast<std::size_t>(v) < cex->size() ? (*cex)[static_cast<std::size_t>(v)] : Rational(0);
      r.counterexample = std::move(named);
    }
    results_.push_back(std::move(r));
  }

  void record_flag(const Transition& t, const char* cond, int j, bool holds, std::string detail) {
    results_.push_back({t.id, cond, j, holds, std::nullopt, std::move(detail)});
  }

  /// First disjunct of `domain` where `value >= 0` fails, if any.
  std::optional<std::vector<Rational>> nonneg_on(const Predicate& domain, const LinExpr& value) const {
    const LinConstraint goal = LinConstraint::ge(value, LinExpr());
    for (const auto& d : domain.disjuncts()) {
      const auto r = lp::entails(d, goal, p_.num_vars());
      if (!r.holds) return r.counterexample;
    }
    return std::nullopt;
  }

  Predicate level_at_most(LocId dest, int j) const {
    std::vector<Predicate> guards;
    for (const auto& u : p_.transitions)
      if (u.source == dest && level(u) > j) guards.push_back(u.guard());
    return negate_guards_to_dnf(guards, o_.dnf_cap);
  }

  void check_transition(const Transition& t) {
    const int lev = level(t);
    const bool terminal_loop = p_.is_terminal_self_loop(t);
    if ((lev == 0) != terminal_loop) {
      record_flag(t, "LEVEL", 0, false,
                  terminal_loop ? "terminal self-loop must have level 0" : "only terminal self-loops may have level 0");
      return;
    }
    if (lev == 0) return;

    std::vector<Polyhedron> feasible;
    const Predicate enabled = conjoin(Predicate(inv_[t.source]), t.guard(), o_.dnf_cap);
    for (const auto& d : enabled.disjuncts())
      if (lp::check_feasible(d, p_.num_vars()).feasible) feasible.push_back(d);
    if (feasible.empty()) {
      record_flag(t, "P-RANK", lev, true, "never enabled under the invariant");
      return;
    }
    const Predicate domain(feasible);

    for (int j = 1; j <= lev; ++j) {
      const auto at = [&](LocId l) -> const LinExpr& { return eta(l, j); };
      const LinExpr here = eta(t.source, j);

      record(t, "P-NNEG", j, nonneg_on(domain, here));

      const LinExpr bound = j == lev ? here - LinExpr(Rational(1)) : here;
      record(t, "P-RANK", j, nonneg_on(domain, bound - max_pre(p_, t, at)));

      if (t.is_pb()) {
        const auto& b = t.pb();
        const auto cases =
            pre_pb_restricted(b, at(b.dest1), at(b.dest2), level_at_most(b.dest1, j - 1), level_at_most(b.dest2, j - 1), o_.dnf_cap);
        std::optional<std::vector<Rational>> cex;
        for (const auto& c : cases) {
          if (cex) break;
          cex = nonneg_on(conjoin(domain, c.context, o_.dnf_cap), c.value);
        }
        record(t, "EXP-NNEG", j, std::move(cex));
      } else {
        record(t, "W-EXP-NNEG", j, nonneg_on(domain, min_pre(p_, t, at)));
      }
    }
  }

  void check_unbound() {
    for (const auto& t : p_.transitions) {
      if (t.is_pb() || !samples_unbounded(t)) continue;
      const VarId v = *t.updated_variable();
      for (int j = 1; j < level(t); ++j) {
        const Rational coeff = eta(t.step().dest, j).coeff(v);
        record_flag(t, "UNBOUND", j, coeff.is_zero(),
                    coeff.is_zero() ? std::string() : "coefficient of " + p_.variables[static_cast<std::size_t>(v)] + " at " +
                                                     p_.locations[static_cast<std::size_t>(t.step().dest)] + " is " +
                                                     coeff.to_string());
      }
    }
  }

  const PCFG& p_;
  const Invariant& inv_;
  const Certificate& c_;
  const Options& o_;
  std::vector<ConditionResult> results_;
};

}  // namespace

Report check_certificate(const PCFG& p, const Invariant& inv, const Certificate& c, const Options& options) {
  check_structure(p, c);
  if (inv.at.size() != static_cast<std::size_t>(p.num_locations()))
    throw StructuralMismatch("invariant does not cover every location");
  return Checker(p, inv, c, options).run();
}

std::string report_to_json(const Report& r, bool pretty) {
  nlohmann::ordered_json doc;
  doc["verdict"] = r.accepted ? "accepted" : "rejected";
  doc["mode"] = mode_name(r.mode);
  auto& conds = doc["conditions"] = nlohmann::ordered_json::array();
  for (const auto& c : r.conditions) {
    nlohmann::ordered_json e;
    e["transition"] = c.transition;
    e["condition"] = c.condition;
    e["component"] = c.component;
    e["status"] = c.holds ? "ok" : "violated";
    if (c.counterexample) {
      auto& x = e["counterexample"] = nlohmann::ordered_json::object();
      for (const auto& [name, v] : *c.counterexample) x[name] = v.to_string();
    }
    if (!c.detail.empty()) e["detail"] = c.detail;
    conds.push_back(std::move(e));
  }
  doc["assumptions"] = r.assumptions;
  if (r.mode == CertificateMode::BSPComplete) doc["shift_sufficient"] = r.shift_sufficient;
  return doc.dump(pretty ? 2 : -1) + "\n";
}

std::optional<int> state_level(const PCFG& p, const LevelMap& levels, LocId loc, const std::vector<Rational>& x) {
  if (loc == p.terminal) return 0;
  std::optional<int> best;
  for (const auto& t : p.transitions) {
    if (t.source != loc || !t.guard().holds(x)) continue;
    auto it = levels.find(t.id);
    const int lev = it == levels.end() ? 0 : it->second;
    best = std::max(best.value_or(0), lev);
  }
  return best;
}

}  // namespace pterm::checker
