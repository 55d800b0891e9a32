#include "pterm/preexp.hpp"

namespace pterm {

namespace {

template <class Coeff>
BasicLinExpr<Coeff> pick(const BasicLinExpr<Coeff>& e, VarId choice, const Rational& endpoint) {
  return e.substitute(choice, LinExpr(endpoint));
}

int constant_sign(const LinExpr& c) {
  if (!c.is_constant()) return 2;
  return c.constant().sign();
}

LinExpr resolve(const PCFG& p, const Transition& t, const EtaAt& eta, bool maximize) {
  if (t.is_pb()) return pre_pb(t.pb(), eta(t.pb().dest1), eta(t.pb().dest2));
  const auto& s = t.step();
  const VarId choice = p.num_vars();
  LinExpr e = pre_step(s, eta(s.dest), choice);
  if (const auto* n = std::get_if<NondetUpdate>(&s.update))
    return maximize ? resolve_max(e, choice, n->lo, n->hi) : resolve_min(e, choice, n->lo, n->hi);
  return e;
}

}  // namespace

LinExpr resolve_max(const LinExpr& e, VarId choice, const Rational& lo, const Rational& hi) {
  return pick(e, choice, e.coeff(choice).sign() >= 0 ? hi : lo);
}

LinExpr resolve_min(const LinExpr& e, VarId choice, const Rational& lo, const Rational& hi) {
  return pick(e, choice, e.coeff(choice).sign() >= 0 ? lo : hi);
}

TemplateExpr resolve_max(const TemplateExpr& e, VarId choice, const Rational& lo, const Rational& hi) {
  const int s = constant_sign(e.coeff(choice));
  if (s == 2) throw UnresolvedSup("supremum over a nondeterministic choice depends on an unknown coefficient");
  return pick(e, choice, s >= 0 ? hi : lo);
}

TemplateExpr resolve_min(const TemplateExpr& e, VarId choice, const Rational& lo, const Rational& hi) {
  const int s = constant_sign(e.coeff(choice));
  if (s == 2) throw UnresolvedInf("infimum over a nondeterministic choice depends on an unknown coefficient");
  return pick(e, choice, s >= 0 ? lo : hi);
}

LinExpr max_pre(const PCFG& p, const Transition& t, const EtaAt& eta) { return resolve(p, t, eta, true); }
LinExpr min_pre(const PCFG& p, const Transition& t, const EtaAt& eta) { return resolve(p, t, eta, false); }

}  // namespace pterm
