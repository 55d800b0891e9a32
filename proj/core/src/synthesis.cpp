#include "pterm/synthesis.hpp"

#include <algorithm>

#include "pterm/errors.hpp"
#include "pterm/farkas.hpp"
#include "pterm/preexp.hpp"

namespace pterm::synthesis {

const char* status_name(Status s) {
  switch (s) {
    case Status::Found: return "found";
    case Status::NoLinGLexRSM: return "no-linglexrsm";
    case Status::NoWitness: return "no-witness";
  }
  return "?";
}

TemplateExpr IterationLP::at(LocId loc) const {
  const auto l = static_cast<std::size_t>(loc);
  TemplateExpr e(LinExpr::variable(constant[l], Rational(1)));
  for (std::size_t v = 0; v < coeff[l].size(); ++v)
    e.add_term(static_cast<VarId>(v), LinExpr::variable(coeff[l][v], Rational(1)));
  return e;
}

namespace {

class Builder {
 public:
  Builder(const PCFG& p, IterationLP& out, std::size_t cap) : p_(p), out_(out), cap_(cap) {}

  /// forall x in `ante`: value(x) >= 0.
  void require(Polyhedron ante, const TemplateExpr& value, const std::string& tag) {
    if (lp::prepare_antecedent(ante, p_.num_vars() + 1) == lp::AntecedentStatus::Empty) {
      ++out_.dropped_antecedents;
      return;
    }
    for (auto& row : lp::encode_implication({std::move(ante), value}, out_.lp, tag)) out_.lp.add_constraint(std::move(row));
    ++out_.implications;
  }

  void require(const Predicate& ante, const TemplateExpr& value, const std::string& tag) {
    if (ante.is_false()) return;
    for (std::size_t k = 0; k < ante.disjuncts().size(); ++k)
      require(ante.disjuncts()[k], value, tag + ".c" + std::to_string(k));
  }

  std::size_t cap() const { return cap_; }

 private:
  const PCFG& p_;
  IterationLP& out_;
  std::size_t cap_;
};

TemplateExpr minus_eps(TemplateExpr e, lp::UnknownId eps) {
  LinExpr c = e.constant();
  c.add_term(eps, Rational(-1));
  e.set_constant(std::move(c));
  return e;
}

}  // namespace

IterationLP build_lp(const PCFG& p, const Invariant& inv, const std::set<std::string>& unranked,
                     const TemplateRestriction& restriction, std::size_t dnf_cap) {
  IterationLP out;
  const int n = p.num_vars();
  const VarId choice = n;
  for (LocId l = 0; l < p.num_locations(); ++l) {
    const std::string& ln = p.locations[static_cast<std::size_t>(l)];
    std::vector<lp::UnknownId> row;
    for (VarId v = 0; v < n; ++v) {
      const bool zero = restriction.zero_coeffs.count({l, v}) > 0;
      row.push_back(out.lp.add_unknown("a[" + ln + "," + p.variables[static_cast<std::size_t>(v)] + "]",
                                       zero ? std::optional<Rational>(0) : std::nullopt,
                                       zero ? std::optional<Rational>(0) : std::nullopt));
    }
    out.coeff.push_back(std::move(row));
    out.constant.push_back(out.lp.add_unknown("b[" + ln + "]"));
  }

  LinExpr objective;
  for (const auto& t : p.transitions) {
    if (!unranked.count(t.id)) continue;
    const Rational lo = restriction.force_rank.count(t.id) ? Rational(1) : Rational(0);
    const Rational hi = restriction.force_unranked.count(t.id) ? Rational(0) : Rational(1);
    const auto eps = out.lp.add_unknown("eps[" + t.id + "]", lo, hi);
    out.eps[t.id] = eps;
    objective.add_term(eps, Rational(1));
  }
  out.lp.set_objective(objective);

  Builder b(p, out, dnf_cap);
  for (const auto& t : p.transitions) {
    if (!unranked.count(t.id)) continue;
    const auto eps = out.eps.at(t.id);
    const TemplateExpr here = out.at(t.source);
    const Predicate enabled = conjoin(Predicate(inv[t.source]), t.guard(), dnf_cap);

    // (1) nonnegativity at the source
    b.require(enabled, here, t.id + ".nneg");

    if (t.is_pb()) {
      const auto& br = t.pb();
      const TemplateExpr pre = pre_pb(br, out.at(br.dest1), out.at(br.dest2));
      // (2) + (5) unaffecting, and ranking when eps > 0
      b.require(enabled, minus_eps(here - pre, eps), t.id + ".rank");
      // (4) expectation over successors already ranked away
      auto in_set = [&](LocId dest) {
        std::vector<Predicate> guards;
        for (const auto& u : p.transitions)
          if (u.source == dest && unranked.count(u.id)) guards.push_back(u.guard());
        return negate_guards_to_dnf(guards, dnf_cap);
      };
      const auto cases = pre_pb_restricted(br, out.at(br.dest1), out.at(br.dest2), in_set(br.dest1), in_set(br.dest2), dnf_cap);
      for (std::size_t k = 0; k < cases.size(); ++k)
        b.require(conjoin(enabled, cases[k].context, dnf_cap), cases[k].value, t.id + ".pbexp" + std::to_string(k));
      continue;
    }

    const auto& s = t.step();
    const TemplateExpr pre = pre_step(s, out.at(s.dest), choice);
    Predicate quantified = enabled;
    if (const auto* nd = std::get_if<NondetUpdate>(&s.update)) {
      // The chosen value becomes a universally quantified variable.
      const Predicate range(Polyhedron{{LinConstraint::ge(LinExpr::variable(choice, Rational(1)), LinExpr(nd->lo)),
                                        LinConstraint::le(LinExpr::variable(choice, Rational(1)), LinExpr(nd->hi))}});
      quantified = conjoin(enabled, range, dnf_cap);
    }
    // (2) + (5)
    b.require(quantified, minus_eps(here - pre, eps), t.id + ".rank");
    // (3) weak expectation nonnegativity
    b.require(quantified, pre, t.id + ".wexp");
  }
  return out;
}

namespace {

bool is_candidate(const PCFG& p, const Transition& t) { return !p.is_terminal_self_loop(t); }

struct Attempt {
  bool ranked_any = false;
  std::vector<LinExpr> component;  // per location
  IterationRecord record;
};

Attempt attempt(const PCFG& p, const Invariant& inv, const std::set<std::string>& unranked,
                const TemplateRestriction& restriction, const Options& options, const std::string& label,
                std::vector<std::string>& warnings) {
  IterationLP it = build_lp(p, inv, unranked, restriction, options.dnf_cap);
  if (options.on_lp) options.on_lp(it.lp, label);
  const lp::LPResult r = lp::solve_lp(it.lp, options.solver);

  Attempt a;
  a.record.unranked_before = unranked.size();
  a.record.lp_unknowns = it.lp.num_unknowns();
  a.record.lp_rows = it.lp.constraints().size();
  a.record.lp_status = lp::status_name(r.status);
  if (r.status == lp::LPStatus::IterationLimit)
    warnings.push_back(label + ": simplex iteration cap reached; treated as infeasible");
  if (r.status != lp::LPStatus::Optimal) return a;
  a.record.objective = r.value;

  std::optional<Rational> smallest;
  for (const auto& t : p.transitions) {
    auto e = it.eps.find(t.id);
    if (e == it.eps.end()) continue;
    const Rational& v = r.assignment[static_cast<std::size_t>(e->second)];
    if (v.sign() <= 0) continue;
    a.record.ranked.push_back(t.id);
    if (!smallest || v < *smallest) smallest = v;
  }
  if (!smallest) return a;
  a.ranked_any = true;
  // Rescale so that every transition with positive epsilon drops by >= 1.
  const Rational scale = Rational(1) / *smallest;
  for (LocId l = 0; l < p.num_locations(); ++l) a.component.push_back(instantiate(it.at(l), r.assignment) * scale);
  return a;
}

struct Run {
  std::vector<std::vector<LinExpr>> components;  // [iteration][location]
  std::set<std::string> unranked;
  Result result;
};

void accept(Run& run, Attempt&& a, const Options& options) {
  a.record.iteration = static_cast<int>(run.components.size()) + 1;
  for (const auto& id : a.record.ranked) run.unranked.erase(id);
  run.components.push_back(std::move(a.component));
  if (options.on_iteration) options.on_iteration(a.record);
  run.result.history.push_back(std::move(a.record));
}

Run start(const PCFG& p) {
  Run run;
  for (const auto& t : p.transitions)
    if (is_candidate(p, t)) run.unranked.insert(t.id);
  return run;
}

Certificate assemble(const PCFG& p, const Run& run, CertificateMode mode) {
  Certificate c;
  c.mode = mode;
  c.lem.dimension = static_cast<int>(run.components.size());
  c.lem.components.assign(static_cast<std::size_t>(p.num_locations()), {});
  for (const auto& comp : run.components)
    for (LocId l = 0; l < p.num_locations(); ++l) c.lem.components[static_cast<std::size_t>(l)].push_back(comp[static_cast<std::size_t>(l)]);
  c.levels = extract_level_map(p, run.result.history);
  return c;
}

std::vector<std::string> ordered(const PCFG& p, const std::set<std::string>& ids) {
  std::vector<std::string> out;
  for (const auto& t : p.transitions)
    if (ids.count(t.id)) out.push_back(t.id);
  return out;
}

}  // namespace

LevelMap extract_level_map(const PCFG& p, const std::vector<IterationRecord>& history) {
  LevelMap levels;
  for (const auto& t : p.transitions)
    if (p.is_terminal_self_loop(t)) levels[t.id] = 0;
  for (const auto& rec : history)
    for (const auto& id : rec.ranked) levels[id] = rec.iteration;
  return levels;
}

Result synthesize_bsp(const PCFG& p, const Invariant& inv, const Options& options) {
  if (!check_bsp(p).holds) throw NotBSP("program samples from a distribution with unbounded support");
  Run run = start(p);
  while (!run.unranked.empty()) {
    const std::string label = "iteration " + std::to_string(run.components.size() + 1);
    Attempt a = attempt(p, inv, run.unranked, {}, options, label, run.result.warnings);
    if (!a.ranked_any) {
      run.result.status = Status::NoLinGLexRSM;
      run.result.unranked = ordered(p, run.unranked);
      return std::move(run.result);
    }
    accept(run, std::move(a), options);
  }
  Certificate c = assemble(p, run, CertificateMode::BSPComplete);
  c.shift = Rational(2) * effective_support_bound(p) * c.lem.max_coeff();
  c.lem.shift(c.shift);
  run.result.status = Status::Found;
  run.result.certificate = std::move(c);
  return std::move(run.result);
}

Result synthesize_general(const PCFG& p, const Invariant& inv, const Options& options) {
  if (!check_linpp_star(p))
    throw NotLinPPStar("a location is both a probabilistic-branch successor and the target of a sampling transition");
  Run run = start(p);

  auto unbounded_pending = [&] {
    std::vector<const Transition*> out;
    for (const auto& t : p.transitions)
      if (run.unranked.count(t.id) && samples_unbounded(t)) out.push_back(&t);
    return out;
  };
  auto key = [](const Transition& t) { return std::make_pair(t.step().dest, *t.updated_variable()); };

  while (!run.unranked.empty()) {
    const auto unb = unbounded_pending();
    TemplateRestriction base;
    for (const auto* t : unb) base.zero_coeffs.insert(key(*t));

    const int iteration = static_cast<int>(run.components.size()) + 1;
    Attempt a = attempt(p, inv, run.unranked, base, options, "iteration " + std::to_string(iteration), run.result.warnings);
    if (a.ranked_any) {
      accept(run, std::move(a), options);
      continue;
    }

    bool found = false;
    for (const auto* t0 : unb) {
      TemplateRestriction r = base;
      r.zero_coeffs.erase(key(*t0));
      // Every pending unbounded transition into the same location must be
      // ranked by this component, t0 included.
      for (const auto* t : unb)
        if (t->step().dest == t0->step().dest) r.force_rank.insert(t->id);
      Attempt b = attempt(p, inv, run.unranked, r, options,
                          "iteration " + std::to_string(iteration) + " releasing " + t0->id, run.result.warnings);
      if (!b.ranked_any) continue;
      b.record.released = t0->id;
      accept(run, std::move(b), options);
      found = true;
      break;
    }
    if (!found) {
      run.result.status = Status::NoWitness;
      run.result.unranked = ordered(p, run.unranked);
      return std::move(run.result);
    }
  }
  Certificate c = assemble(p, run, CertificateMode::GeneralSound);
  run.result.status = Status::Found;
  run.result.certificate = std::move(c);
  return std::move(run.result);
}

}  // namespace pterm::synthesis
