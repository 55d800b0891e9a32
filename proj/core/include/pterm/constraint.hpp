#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pterm/linexpr.hpp"

namespace pterm {

enum class Rel { Le, Lt, Eq };

/// `lhs rel 0`.
struct LinConstraint {
  LinExpr lhs;
  Rel rel = Rel::Le;

  static LinConstraint le(const LinExpr& a, const LinExpr& b) { return {a - b, Rel::Le}; }
  static LinConstraint lt(const LinExpr& a, const LinExpr& b) { return {a - b, Rel::Lt}; }
  static LinConstraint ge(const LinExpr& a, const LinExpr& b) { return {b - a, Rel::Le}; }
  static LinConstraint gt(const LinExpr& a, const LinExpr& b) { return {b - a, Rel::Lt}; }
  static LinConstraint eq(const LinExpr& a, const LinExpr& b) { return {a - b, Rel::Eq}; }

  bool holds(std::span<const Rational> point) const;
  bool holds(std::span<const double> point) const;

  /// Truth value when the lhs has no variables.
  std::optional<bool> constant_truth() const;

  friend bool operator==(const LinConstraint&, const LinConstraint&) = default;
};

/// Complement of a single constraint as a disjunction of constraints:
/// not(e <= 0) is (-e < 0), not(e < 0) is (-e <= 0), and an equality is
/// split into two inequalities first.
std::vector<LinConstraint> negate(const LinConstraint& c);

/// Conjunction of constraints; the empty list means "true".
struct Polyhedron {
  std::vector<LinConstraint> constraints;

  bool holds(std::span<const Rational> point) const;
  bool holds(std::span<const double> point) const;
  bool has_strict() const;
  /// Drops constant-true rows; returns nullopt when a constant-false row is
  /// present.
  std::optional<Polyhedron> simplified() const;
  /// Strict rows replaced by their non-strict closure.
  Polyhedron relaxed() const;

  friend Polyhedron operator&&(const Polyhedron& a, const Polyhedron& b);
  friend bool operator==(const Polyhedron&, const Polyhedron&) = default;
};

/// Boolean combination of linear constraints in disjunctive normal form.
/// Never empty: `false` is a single disjunct holding the row `1 <= 0`.
class Predicate {
 public:
  Predicate() : disjuncts_{Polyhedron{}} {}
  explicit Predicate(Polyhedron p);
  explicit Predicate(std::vector<Polyhedron> disjuncts);

  static Predicate True() { return Predicate(); }
  static Predicate False();

  const std::vector<Polyhedron>& disjuncts() const { return disjuncts_; }

  bool holds(std::span<const Rational> point) const;
  bool holds(std::span<const double> point) const;

  bool is_true() const;
  bool is_false() const;

  friend bool operator==(const Predicate&, const Predicate&) = default;

 private:
  void normalize();
  std::vector<Polyhedron> disjuncts_;
};

inline constexpr std::size_t kDefaultDnfCap = 4096;

/// DNF of a conjunction of predicates. Throws EncodingBlowup when the
/// product exceeds `cap` disjuncts.
Predicate conjoin(std::span<const Predicate> parts, std::size_t cap = kDefaultDnfCap);
Predicate conjoin(const Predicate& a, const Predicate& b, std::size_t cap = kDefaultDnfCap);
Predicate disjoin(const Predicate& a, const Predicate& b);

/// DNF of not(g_1 or ... or g_k). The empty list yields `true`.
Predicate negate_guards_to_dnf(std::span<const Predicate> guards, std::size_t cap = kDefaultDnfCap);

std::string to_string(const LinConstraint& c, std::span<const std::string> names);
std::string to_string(const Polyhedron& p, std::span<const std::string> names);
std::string to_string(const Predicate& p, std::span<const std::string> names);

}  // namespace pterm
