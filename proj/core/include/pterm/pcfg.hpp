#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pterm/constraint.hpp"
#include "pterm/distribution.hpp"
#include "pterm/linexpr.hpp"

namespace pterm {

using LocId = int;

struct NoUpdate {
  friend bool operator==(const NoUpdate&, const NoUpdate&) = default;
};

/// `coefficient * X` with X drawn from `dist`.
struct SampleTerm {
  Rational coefficient{1};
  DistributionSpec dist;
  friend bool operator==(const SampleTerm&, const SampleTerm&) = default;
};

/// target := base(x) [+ coefficient * sample].
struct ExprUpdate {
  VarId target = 0;
  LinExpr base;
  std::optional<SampleTerm> sample;
  friend bool operator==(const ExprUpdate&, const ExprUpdate&) = default;
};

/// target := any value in [lo, hi], chosen by the scheduler.
struct NondetUpdate {
  VarId target = 0;
  Rational lo;
  Rational hi;
  friend bool operator==(const NondetUpdate&, const NondetUpdate&) = default;
};

using UpdateElement = std::variant<NoUpdate, ExprUpdate, NondetUpdate>;

/// Probabilistic branching: no guard, no update.
struct ProbBranch {
  LocId dest1 = 0;
  Rational p1;
  LocId dest2 = 0;
  Rational p2;
  friend bool operator==(const ProbBranch&, const ProbBranch&) = default;
};

/// Guarded single-successor transition carrying at most one update.
struct GuardedStep {
  LocId dest = 0;
  Predicate guard;
  UpdateElement update = NoUpdate{};
  friend bool operator==(const GuardedStep&, const GuardedStep&) = default;
};

struct Transition {
  std::string id;
  LocId source = 0;
  std::variant<ProbBranch, GuardedStep> kind;

  bool is_pb() const { return std::holds_alternative<ProbBranch>(kind); }
  const ProbBranch& pb() const { return std::get<ProbBranch>(kind); }
  const GuardedStep& step() const { return std::get<GuardedStep>(kind); }

  /// Guard of the transition; probabilistic branching is always enabled.
  Predicate guard() const;
  std::vector<LocId> successors() const;

  /// Sampling term of an expression update, if any.
  const SampleTerm* sample() const;
  /// Variable written by the update, if any.
  std::optional<VarId> updated_variable() const;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Probabilistic control-flow graph.
struct PCFG {
  std::vector<std::string> variables;
  std::vector<std::string> locations;
  std::vector<Transition> transitions;
  LocId init = 0;
  LocId terminal = 0;

  int num_vars() const { return static_cast<int>(variables.size()); }
  int num_locations() const { return static_cast<int>(locations.size()); }

  std::optional<LocId> location(std::string_view name) const;
  std::optional<VarId> variable(std::string_view name) const;
  std::optional<std::size_t> transition_index(std::string_view id) const;

  /// Indices into `transitions` whose source is `loc`, in input order.
  std::vector<std::size_t> outgoing(LocId loc) const;

  bool is_terminal_self_loop(const Transition& t) const;

  friend bool operator==(const PCFG&, const PCFG&) = default;
};

enum class DiagnosticKind {
  UnknownLocation,
  UnknownVariable,
  NoOutgoingTransition,
  NonSelfLoopAtTerminal,
  PBProbNotOne,
  PBProbNotPositive,
  BadNondetInterval,
  InvalidDistribution,
  DuplicateTransitionId,
  DuplicateName,
  ReservedName,
};

struct Diagnostic {
  DiagnosticKind kind;
  std::string message;
};

const char* kind_name(DiagnosticKind k);

/// Structural well-formedness; one diagnostic per violation, empty when the
/// program is well formed.
std::vector<Diagnostic> validate_pcfg(const PCFG& p);

struct BspResult {
  bool holds = false;
  /// Smallest N with every support bound and nondet endpoint in [-N, N];
  /// set only when `holds`.
  std::optional<Rational> bound;
};

/// Bounded support property: every sampled distribution has finite support.
BspResult check_bsp(const PCFG& p);

/// Bound on |coefficient * X - c| style deviations used by the constant
/// shift: max over sampling terms of |coefficient| * max(|lo|, |hi|) and over
/// nondet endpoints. Only meaningful when check_bsp holds.
Rational effective_support_bound(const PCFG& p);

/// No location is both a probabilistic-branching successor and the target of
/// a sampling transition.
bool check_linpp_star(const PCFG& p);

/// True when the transition samples from a distribution of unbounded support.
bool samples_unbounded(const Transition& t);

}  // namespace pterm
