#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pterm/certificate.hpp"

namespace pterm::checker {

/// Outcome of one side condition for one transition and component.
struct ConditionResult {
  std::string transition;
  /// P-NNEG, P-RANK, W-EXP-NNEG, EXP-NNEG, UNBOUND or LEVEL.
  std::string condition;
  /// 1-based component index; 0 for conditions not tied to a component.
  int component = 0;
  bool holds = true;
  /// Variable name -> value of a violating state.
  std::optional<std::map<std::string, Rational>> counterexample;
  std::string detail;
};

struct Report {
  bool accepted = false;
  CertificateMode mode = CertificateMode::BSPComplete;
  /// Sorted by (transition, condition, component, detail).
  std::vector<ConditionResult> conditions;
  /// Reasoning the verdict relies on without checking it.
  std::vector<std::string> assumptions;
  /// BSP only: the stored shift already meets 2 * N * max-coeff, so the map
  /// itself is a LinGLexRSM map rather than a witness that one exists.
  bool shift_sufficient = false;

  std::vector<ConditionResult> violations() const;
};

struct Options {
  std::size_t dnf_cap = kDefaultDnfCap;
  /// Keep passing conditions in the report.
  bool include_passed = true;
};

/// Verifies the premise conditions of the certificate on every feasible
/// disjunct of I(source) and the guard. Throws StructuralMismatch when the
/// certificate does not fit the program.
Report check_certificate(const PCFG& p, const Invariant& inv, const Certificate& c, const Options& options = {});

/// `{verdict, mode, conditions: [...], assumptions: [...]}`.
std::string report_to_json(const Report& r, bool pretty = true);

/// Largest level among the transitions enabled at the state; 0 at the
/// terminal location; nullopt when a non-terminal state has no enabled
/// transition.
std::optional<int> state_level(const PCFG& p, const LevelMap& levels, LocId loc, const std::vector<Rational>& x);

}  // namespace pterm::checker
