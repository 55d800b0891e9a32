#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pterm/certificate.hpp"
#include "pterm/lp.hpp"

namespace pterm::synthesis {

/// Extra shape constraints on the component template of one iteration.
struct TemplateRestriction {
  /// (location, variable) coefficients fixed to zero.
  std::set<std::pair<LocId, VarId>> zero_coeffs;
  /// Transitions that must be 1-ranked (epsilon fixed to 1).
  std::set<std::string> force_rank;
  /// Transitions that may not be ranked (epsilon fixed to 0).
  std::set<std::string> force_unranked;
};

/// LP of one iteration together with the unknowns of the template.
struct IterationLP {
  lp::LPProblem lp;
  std::vector<std::vector<lp::UnknownId>> coeff;  // [location][variable]
  std::vector<lp::UnknownId> constant;            // [location]
  std::map<std::string, lp::UnknownId> eps;       // per unranked transition
  std::size_t implications = 0;
  std::size_t dropped_antecedents = 0;

  /// Template at `loc` as an expression over program variables whose
  /// coefficients are LP unknowns.
  TemplateExpr at(LocId loc) const;
};

/// Builds the LP whose optimum is a new component that is nonnegative,
/// unaffecting and expectation-nonnegative on every transition in
/// `unranked`, and 1-ranks as many of them as possible (maximize the sum of
/// epsilons).
IterationLP build_lp(const PCFG& p, const Invariant& inv, const std::set<std::string>& unranked,
                     const TemplateRestriction& restriction = {}, std::size_t dnf_cap = kDefaultDnfCap);

struct IterationRecord {
  int iteration = 0;
  std::size_t unranked_before = 0;
  std::size_t lp_unknowns = 0;
  std::size_t lp_rows = 0;
  std::string lp_status;
  Rational objective;
  std::vector<std::string> ranked;
  /// Unbounded-sampling transition whose coefficient was released, if any.
  std::optional<std::string> released;
};

struct Options {
  std::size_t dnf_cap = kDefaultDnfCap;
  lp::SolverOptions solver;
  /// Called after every successful iteration.
  std::function<void(const IterationRecord&)> on_iteration;
  /// Called with every LP before it is solved; the label names the attempt.
  std::function<void(const lp::LPProblem&, const std::string&)> on_lp;
};

enum class Status {
  Found,
  /// Bounded-support mode: no LinGLexRSM map exists for this invariant.
  NoLinGLexRSM,
  /// General mode: no map satisfying the unbounded-support premises exists;
  /// termination is unknown.
  NoWitness,
};

const char* status_name(Status s);

struct Result {
  Status status = Status::NoWitness;
  std::optional<Certificate> certificate;
  std::vector<IterationRecord> history;
  /// Transitions left unranked when synthesis failed.
  std::vector<std::string> unranked;
  std::vector<std::string> warnings;
};

/// Bounded-support algorithm: complete for LinGLexRSM maps, minimal
/// dimension, final constant shift included. Throws NotBSP.
Result synthesize_bsp(const PCFG& p, const Invariant& inv, const Options& options = {});

/// General algorithm for programs where no probabilistic branch and no
/// sampling transition share a target. Sound, not complete; no shift.
/// Throws NotLinPPStar.
Result synthesize_general(const PCFG& p, const Invariant& inv, const Options& options = {});

/// Level of each transition: the iteration that ranked it, 0 for terminal
/// self-loops.
LevelMap extract_level_map(const PCFG& p, const std::vector<IterationRecord>& history);

}  // namespace pterm::synthesis
