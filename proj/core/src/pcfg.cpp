#include "pterm/pcfg.hpp"

#include <algorithm>
#include <set>

namespace pterm {

Predicate Transition::guard() const { return is_pb() ? Predicate::True() : step().guard; }

std::vector<LocId> Transition::successors() const {
  if (is_pb()) return {pb().dest1, pb().dest2};
  return {step().dest};
}

const SampleTerm* Transition::sample() const {
  if (is_pb()) return nullptr;
  const auto* u = std::get_if<ExprUpdate>(&step().update);
  return (u && u->sample) ? &*u->sample : nullptr;
}

std::optional<VarId> Transition::updated_variable() const {
  if (is_pb()) return std::nullopt;
  if (const auto* u = std::get_if<ExprUpdate>(&step().update)) return u->target;
  if (const auto* u = std::get_if<NondetUpdate>(&step().update)) return u->target;
  return std::nullopt;
}

std::optional<LocId> PCFG::location(std::string_view name) const {
  auto it = std::find(locations.begin(), locations.end(), name);
  if (it == locations.end()) return std::nullopt;
  return static_cast<LocId>(it - locations.begin());
}

std::optional<VarId> PCFG::variable(std::string_view name) const {
  auto it = std::find(variables.begin(), variables.end(), name);
  if (it == variables.end()) return std::nullopt;
  return static_cast<VarId>(it - variables.begin());
}

std::optional<std::size_t> PCFG::transition_index(std::string_view id) const {
  for (std::size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].id == id) return i;
  return std::nullopt;
}

std::vector<std::size_t> PCFG::outgoing(LocId loc) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].source == loc) out.push_back(i);
  return out;
}

bool PCFG::is_terminal_self_loop(const Transition& t) const {
  if (t.source != terminal) return false;
  auto succ = t.successors();
  return std::all_of(succ.begin(), succ.end(), [&](LocId l) { return l == terminal; });
}

const char* kind_name(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::UnknownLocation: return "UnknownLocation";
    case DiagnosticKind::UnknownVariable: return "UnknownVariable";
    case DiagnosticKind::NoOutgoingTransition: return "NoOutgoingTransition";
    case DiagnosticKind::NonSelfLoopAtTerminal: return "NonSelfLoopAtTerminal";
    case DiagnosticKind::PBProbNotOne: return "PBProbNotOne";
    case DiagnosticKind::PBProbNotPositive: return "PBProbNotPositive";
    case DiagnosticKind::BadNondetInterval: return "BadNondetInterval";
    case DiagnosticKind::InvalidDistribution: return "InvalidDistribution";
    case DiagnosticKind::DuplicateTransitionId: return "DuplicateTransitionId";
    case DiagnosticKind::DuplicateName: return "DuplicateName";
    case DiagnosticKind::ReservedName: return "ReservedName";
  }
  return "?";
}

namespace {

bool vars_in_range(const LinExpr& e, int n) { return e.max_var() < n && (e.coeffs().empty() || e.coeffs().begin()->first >= 0); }

}  // namespace

std::vector<Diagnostic> validate_pcfg(const PCFG& p) {
  std::vector<Diagnostic> out;
  auto add = [&](DiagnosticKind k, std::string msg) { out.push_back({k, std::move(msg)}); };
  const int nloc = p.num_locations();
  const int nvar = p.num_vars();
  auto loc_ok = [&](LocId l) { return l >= 0 && l < nloc; };

  std::set<std::string> seen;
  for (const auto& v : p.variables) {
    if (v == "const") add(DiagnosticKind::ReservedName, "variable name 'const' is reserved");
    if (!seen.insert("v:" + v).second) add(DiagnosticKind::DuplicateName, "duplicate variable '" + v + "'");
  }
  for (const auto& l : p.locations)
    if (!seen.insert("l:" + l).second) add(DiagnosticKind::DuplicateName, "duplicate location '" + l + "'");

  if (!loc_ok(p.init)) add(DiagnosticKind::UnknownLocation, "init location out of range");
  if (!loc_ok(p.terminal)) add(DiagnosticKind::UnknownLocation, "terminal location out of range");

  std::set<std::string> ids;
  for (const auto& t : p.transitions) {
    const std::string where = "transition '" + t.id + "'";
    if (!ids.insert(t.id).second) add(DiagnosticKind::DuplicateTransitionId, "duplicate id " + where);
    if (!loc_ok(t.source)) add(DiagnosticKind::UnknownLocation, where + " has an unknown source");
    for (LocId s : t.successors())
      if (!loc_ok(s)) add(DiagnosticKind::UnknownLocation, where + " has an unknown successor");
    if (t.source == p.terminal && !p.is_terminal_self_loop(t))
      add(DiagnosticKind::NonSelfLoopAtTerminal, where + " leaves the terminal location");

    if (t.is_pb()) {
      const auto& b = t.pb();
      if (b.p1.sign() <= 0 || b.p2.sign() <= 0) add(DiagnosticKind::PBProbNotPositive, where + " has a non-positive branch probability");
      if (b.p1 + b.p2 != Rational(1))
        add(DiagnosticKind::PBProbNotOne, where + " branch probabilities sum to " + (b.p1 + b.p2).to_string());
      continue;
    }
    const auto& s = t.step();
    for (const auto& d : s.guard.disjuncts())
      for (const auto& c : d.constraints)
        if (!vars_in_range(c.lhs, nvar)) add(DiagnosticKind::UnknownVariable, where + " guard mentions an unknown variable");
    std::visit(
        [&](const auto& u) {
          using T = std::decay_t<decltype(u)>;
          if constexpr (std::is_same_v<T, ExprUpdate>) {
            if (u.target < 0 || u.target >= nvar) add(DiagnosticKind::UnknownVariable, where + " updates an unknown variable");
            if (!vars_in_range(u.base, nvar)) add(DiagnosticKind::UnknownVariable, where + " update mentions an unknown variable");
            if (u.sample)
              for (const auto& msg : u.sample->dist.problems()) add(DiagnosticKind::InvalidDistribution, where + ": " + msg);
          } else if constexpr (std::is_same_v<T, NondetUpdate>) {
            if (u.target < 0 || u.target >= nvar) add(DiagnosticKind::UnknownVariable, where + " updates an unknown variable");
            if (u.hi < u.lo) add(DiagnosticKind::BadNondetInterval, where + " has an empty nondet interval");
          }
        },
        s.update);
  }

  for (LocId l = 0; l < nloc; ++l) {
    if (l == p.terminal) continue;
    if (p.outgoing(l).empty())
      add(DiagnosticKind::NoOutgoingTransition, "location '" + p.locations[static_cast<std::size_t>(l)] + "' has no outgoing transition");
  }
  return out;
}

BspResult check_bsp(const PCFG& p) {
  Rational bound(0);
  for (const auto& t : p.transitions) {
    if (t.is_pb()) continue;
    if (const auto* s = t.sample()) {
      if (!s->dist.bounded()) return {false, std::nullopt};
      bound = max(bound, max(s->dist.support_lo->abs(), s->dist.support_hi->abs()));
    }
    if (const auto* n = std::get_if<NondetUpdate>(&t.step().update)) bound = max(bound, max(n->lo.abs(), n->hi.abs()));
  }
  return {true, bound};
}

Rational effective_support_bound(const PCFG& p) {
  Rational bound(0);
  for (const auto& t : p.transitions) {
    if (t.is_pb()) continue;
    if (const auto* s = t.sample(); s && s->dist.bounded())
      bound = max(bound, s->coefficient.abs() * max(s->dist.support_lo->abs(), s->dist.support_hi->abs()));
    if (const auto* n = std::get_if<NondetUpdate>(&t.step().update)) bound = max(bound, max(n->lo.abs(), n->hi.abs()));
  }
  return bound;
}

bool check_linpp_star(const PCFG& p) {
  std::set<LocId> pb_targets, sampling_targets;
  for (const auto& t : p.transitions) {
    if (t.is_pb()) {
      pb_targets.insert(t.pb().dest1);
      pb_targets.insert(t.pb().dest2);
    } else if (t.sample()) {
      sampling_targets.insert(t.step().dest);
    }
  }
  return std::none_of(pb_targets.begin(), pb_targets.end(), [&](LocId l) { return sampling_targets.count(l) > 0; });
}

bool samples_unbounded(const Transition& t) {
  const auto* s = t.sample();
  return s != nullptr && !s->dist.bounded();
}

}  // namespace pterm
