#pragma once

#include <functional>
#include <type_traits>
#include <variant>

#include "pterm/errors.hpp"
#include "pterm/pcfg.hpp"

namespace pterm {

/// Next-step expectation of `eta_dest` (an expression at the destination)
/// across a guarded step. Samples are replaced by their means. A
/// nondeterministic update leaves the chosen value symbolic as variable
/// `choice`; resolve it with resolve_max / resolve_min or quantify over it.
template <class Coeff>
BasicLinExpr<Coeff> pre_step(const GuardedStep& s, const BasicLinExpr<Coeff>& eta_dest, VarId choice) {
  return std::visit(
      [&](const auto& u) -> BasicLinExpr<Coeff> {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, NoUpdate>) {
          return eta_dest;
        } else if constexpr (std::is_same_v<T, ExprUpdate>) {
          LinExpr replacement = u.base;
          if (u.sample) replacement += LinExpr(u.sample->coefficient * u.sample->dist.mean);
          return eta_dest.substitute(u.target, replacement);
        } else {
          return eta_dest.rename(u.target, choice);
        }
      },
      s.update);
}

template <class Coeff>
BasicLinExpr<Coeff> pre_pb(const ProbBranch& b, const BasicLinExpr<Coeff>& eta1, const BasicLinExpr<Coeff>& eta2) {
  return eta1 * b.p1 + eta2 * b.p2;
}

template <class Coeff>
struct PbCase {
  Predicate context;
  BasicLinExpr<Coeff> value;
};

/// Expectation of a probabilistic branch restricted to a state set S, split
/// into the cases where each successor lies in S or not. `in1`/`in2` describe
/// S at the two successors. Cases with an unsatisfiable context are dropped,
/// so both successors outside S yields no case at all.
template <class Coeff>
std::vector<PbCase<Coeff>> pre_pb_restricted(const ProbBranch& b, const BasicLinExpr<Coeff>& eta1,
                                             const BasicLinExpr<Coeff>& eta2, const Predicate& in1,
                                             const Predicate& in2, std::size_t cap = kDefaultDnfCap) {
  const std::vector<Predicate> n1{in1}, n2{in2};
  const Predicate out1 = negate_guards_to_dnf(n1, cap), out2 = negate_guards_to_dnf(n2, cap);
  std::vector<PbCase<Coeff>> cases;
  auto add = [&](const Predicate& a, const Predicate& c, BasicLinExpr<Coeff> v) {
    Predicate ctx = conjoin(a, c, cap);
    if (!ctx.is_false()) cases.push_back({std::move(ctx), std::move(v)});
  };
  add(in1, in2, eta1 * b.p1 + eta2 * b.p2);
  add(in1, out2, eta1 * b.p1);
  add(out1, in2, eta2 * b.p2);
  return cases;
}

/// Replaces `choice` by the interval endpoint maximizing (resp. minimizing)
/// the expression: the upper endpoint for a nonnegative coefficient.
LinExpr resolve_max(const LinExpr& e, VarId choice, const Rational& lo, const Rational& hi);
LinExpr resolve_min(const LinExpr& e, VarId choice, const Rational& lo, const Rational& hi);

/// Template versions; throw UnresolvedSup / UnresolvedInf when the
/// coefficient of `choice` still depends on LP unknowns.
TemplateExpr resolve_max(const TemplateExpr& e, VarId choice, const Rational& lo, const Rational& hi);
TemplateExpr resolve_min(const TemplateExpr& e, VarId choice, const Rational& lo, const Rational& hi);

using EtaAt = std::function<const LinExpr&(LocId)>;

/// max-pre / min-pre of a one-dimensional expression map over all successor
/// states. Identical for transitions without nondeterministic assignment.
LinExpr max_pre(const PCFG& p, const Transition& t, const EtaAt& eta);
LinExpr min_pre(const PCFG& p, const Transition& t, const EtaAt& eta);

}  // namespace pterm
