#include "pterm/constraint.hpp"

#include <algorithm>
#include <sstream>

#include "pterm/errors.hpp"

namespace pterm {

namespace {

bool compare_value(const Rational& v, Rel rel) {
  switch (rel) {
    case Rel::Le: return v.sign() <= 0;
    case Rel::Lt: return v.sign() < 0;
    case Rel::Eq: return v.is_zero();
  }
  return false;
}

LinConstraint false_row() { return {LinExpr(Rational(1)), Rel::Le}; }

}  // namespace

bool LinConstraint::holds(std::span<const Rational> point) const { return compare_value(lhs.eval(point), rel); }

bool LinConstraint::holds(std::span<const double> point) const {
  const double v = eval_double(lhs, point);
  switch (rel) {
    case Rel::Le: return v <= 0.0;
    case Rel::Lt: return v < 0.0;
    case Rel::Eq: return v == 0.0;
  }
  return false;
}

std::optional<bool> LinConstraint::constant_truth() const {
  if (!lhs.is_constant()) return std::nullopt;
  return compare_value(lhs.constant(), rel);
}

std::vector<LinConstraint> negate(const LinConstraint& c) {
  switch (c.rel) {
    case Rel::Le: return {{-c.lhs, Rel::Lt}};
    case Rel::Lt: return {{-c.lhs, Rel::Le}};
    case Rel::Eq: return {{c.lhs, Rel::Lt}, {-c.lhs, Rel::Lt}};
  }
  return {};
}

bool Polyhedron::holds(std::span<const Rational> point) const {
  return std::all_of(constraints.begin(), constraints.end(), [&](const auto& c) { return c.holds(point); });
}

bool Polyhedron::holds(std::span<const double> point) const {
  return std::all_of(constraints.begin(), constraints.end(), [&](const auto& c) { return c.holds(point); });
}

bool Polyhedron::has_strict() const {
  return std::any_of(constraints.begin(), constraints.end(), [](const auto& c) { return c.rel == Rel::Lt; });
}

std::optional<Polyhedron> Polyhedron::simplified() const {
  Polyhedron out;
  for (const auto& c : constraints) {
    if (auto t = c.constant_truth()) {
      if (!*t) return std::nullopt;
      continue;
    }
    if (std::find(out.constraints.begin(), out.constraints.end(), c) == out.constraints.end())
      out.constraints.push_back(c);
  }
  return out;
}

Polyhedron Polyhedron::relaxed() const {
  Polyhedron out = *this;
  for (auto& c : out.constraints)
    if (c.rel == Rel::Lt) c.rel = Rel::Le;
  return out;
}

Polyhedron operator&&(const Polyhedron& a, const Polyhedron& b) {
  Polyhedron out = a;
  out.constraints.insert(out.constraints.end(), b.constraints.begin(), b.constraints.end());
  return out;
}

Predicate::Predicate(Polyhedron p) : disjuncts_{std::move(p)} { normalize(); }

Predicate::Predicate(std::vector<Polyhedron> disjuncts) : disjuncts_(std::move(disjuncts)) { normalize(); }

Predicate Predicate::False() { return Predicate(Polyhedron{{false_row()}}); }

void Predicate::normalize() {
  std::vector<Polyhedron> kept;
  for (const auto& d : disjuncts_) {
    auto s = d.simplified();
    if (!s) continue;
    if (s->constraints.empty()) {
      disjuncts_ = {Polyhedron{}};
      return;
    }
    if (std::find(kept.begin(), kept.end(), *s) == kept.end()) kept.push_back(std::move(*s));
  }
  if (kept.empty()) kept.push_back(Polyhedron{{false_row()}});
  disjuncts_ = std::move(kept);
}

bool Predicate::holds(std::span<const Rational> point) const {
  return std::any_of(disjuncts_.begin(), disjuncts_.end(), [&](const auto& d) { return d.holds(point); });
}

bool Predicate::holds(std::span<const double> point) const {
  return std::any_of(disjuncts_.begin(), disjuncts_.end(), [&](const auto& d) { return d.holds(point); });
}

bool Predicate::is_true() const { return disjuncts_.size() == 1 && disjuncts_.front().constraints.empty(); }

bool Predicate::is_false() const {
  return disjuncts_.size() == 1 && disjuncts_.front().constraints.size() == 1 &&
         disjuncts_.front().constraints.front().constant_truth() == false;
}

Predicate conjoin(const Predicate& a, const Predicate& b, std::size_t cap) {
  if (a.is_false() || b.is_false()) return Predicate::False();
  if (a.disjuncts().size() * b.disjuncts().size() > cap)
    throw EncodingBlowup("DNF product exceeds " + std::to_string(cap) + " disjuncts");
  std::vector<Polyhedron> out;
  out.reserve(a.disjuncts().size() * b.disjuncts().size());
  for (const auto& x : a.disjuncts())
    for (const auto& y : b.disjuncts()) out.push_back(x && y);
  return Predicate(std::move(out));
}

Predicate conjoin(std::span<const Predicate> parts, std::size_t cap) {
  Predicate acc = Predicate::True();
  for (const auto& p : parts) acc = conjoin(acc, p, cap);
  return acc;
}

Predicate disjoin(const Predicate& a, const Predicate& b) {
  if (a.is_false()) return b;
  if (b.is_false()) return a;
  std::vector<Polyhedron> out = a.disjuncts();
  out.insert(out.end(), b.disjuncts().begin(), b.disjuncts().end());
  return Predicate(std::move(out));
}

Predicate negate_guards_to_dnf(std::span<const Predicate> guards, std::size_t cap) {
  // not(OR_g OR_D AND_c c) = AND_g AND_D OR_c not(c); distribute into DNF.
  Predicate acc = Predicate::True();
  for (const auto& g : guards) {
    for (const auto& d : g.disjuncts()) {
      std::vector<Polyhedron> clause;
      for (const auto& c : d.constraints)
        for (auto& n : negate(c)) clause.push_back(Polyhedron{{std::move(n)}});
      // An empty disjunct is "true"; its negation is "false".
      Predicate neg = clause.empty() ? Predicate::False() : Predicate(std::move(clause));
      acc = conjoin(acc, neg, cap);
      if (acc.is_false()) return acc;
    }
  }
  return acc;
}

std::string to_string(const LinConstraint& c, std::span<const std::string> names) {
  // Print as "terms op constant", flipping to >= / > when every variable
  // coefficient is negative.
  LinExpr terms = c.lhs;
  terms.set_constant(Rational(0));
  Rational rhs = -c.lhs.constant();
  bool flip = !terms.is_constant() &&
              std::all_of(terms.coeffs().begin(), terms.coeffs().end(), [](const auto& kv) { return kv.second.sign() < 0; });
  const char* op = c.rel == Rel::Le ? "<=" : (c.rel == Rel::Lt ? "<" : "==");
  if (flip) {
    terms = -terms;
    rhs = -rhs;
    op = c.rel == Rel::Le ? ">=" : (c.rel == Rel::Lt ? ">" : "==");
  }
  std::ostringstream os;
  os << to_string(terms, names) << " " << op << " " << rhs;
  return os.str();
}

std::string to_string(const Polyhedron& p, std::span<const std::string> names) {
  if (p.constraints.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (i) out += " and ";
    out += to_string(p.constraints[i], names);
  }
  return out;
}

std::string to_string(const Predicate& p, std::span<const std::string> names) {
  if (p.is_false()) return "false";
  std::string out;
  for (std::size_t i = 0; i < p.disjuncts().size(); ++i) {
    if (i) out += " or ";
    const bool paren = p.disjuncts().size() > 1 && p.disjuncts()[i].constraints.size() > 1;
    out += paren ? "(" + to_string(p.disjuncts()[i], names) + ")" : to_string(p.disjuncts()[i], names);
  }
  return out;
}

}  // namespace pterm
