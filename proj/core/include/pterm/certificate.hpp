#pragma once

#include <map>
#include <string>
#include <vector>

#include "pterm/constraint.hpp"
#include "pterm/pcfg.hpp"

namespace pterm {

/// Per-location linear invariant. Locations without an entry are `true`.
struct Invariant {
  std::vector<Polyhedron> at;

  static Invariant trivial(const PCFG& p) { return Invariant{std::vector<Polyhedron>(static_cast<std::size_t>(p.num_locations()))}; }

  const Polyhedron& operator[](LocId l) const;
  friend bool operator==(const Invariant&, const Invariant&) = default;
};

/// Linear expression map: `components[loc][j]` is the j-th (0-based)
/// component at location `loc`.
struct LEM {
  int dimension = 0;
  std::vector<std::vector<LinExpr>> components;

  const LinExpr& at(LocId loc, int j) const { return components[static_cast<std::size_t>(loc)][static_cast<std::size_t>(j)]; }

  /// Largest absolute variable coefficient over all components and
  /// locations (constants excluded).
  Rational max_coeff() const;

  /// Adds `k` to the constant of every component.
  void shift(const Rational& k);

  friend bool operator==(const LEM&, const LEM&) = default;
};

/// Transition id -> level in {0..d}. Level 0 is reserved for terminal
/// self-loops.
using LevelMap = std::map<std::string, int>;

enum class CertificateMode {
  /// Bounded-support program; premises of the constant-shift lemma hold and
  /// the stored map includes the shift.
  BSPComplete,
  /// Program may sample from unbounded-support distributions; the map
  /// additionally satisfies the zero-coefficient (UNBOUND) restriction.
  GeneralSound,
};

const char* mode_name(CertificateMode m);

struct Certificate {
  LEM lem;
  LevelMap levels;
  Rational shift{0};
  CertificateMode mode = CertificateMode::BSPComplete;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

}  // namespace pterm
