#pragma once

#include <string>
#include <vector>

#include "pterm/simulator.hpp"

namespace pterm::sim {

struct InvariantViolation {
  std::size_t run = 0;
  std::size_t step = 0;
  State state;
};

/// Visited states lying outside the invariant (with a 1e-9 slack for
/// floating point). Finding none does not prove invariance.
std::vector<InvariantViolation> audit_invariant(const PCFG& p, const Invariant& inv,
                                                const std::vector<TrajectoryReport>& trajectories);

struct DynamicsFlag {
  std::size_t run = 0;
  std::size_t step = 0;
  std::string transition;
  /// P-NNEG or P-RANK.
  std::string condition;
  int component = 0;  // 1-based
  double value = 0;   // component value, or empirical next-step mean
  double bound = 0;   // 0, or the allowed mean
};

struct DynamicsOptions {
  std::size_t resamples = 200;
  std::size_t steps_per_trajectory = 50;
  double standard_errors = 5;
  std::uint64_t seed = 1;
};

struct DynamicsReport {
  std::size_t audited_steps = 0;
  std::vector<DynamicsFlag> flags;
};

/// Along recorded trajectories, checks components 1..lev(tau) >= 0 at each
/// audited state and estimates the one-step mean of component lev(tau) from
/// fresh successors of the transition actually taken, flagging means above
/// eta - 1 by more than the given number of standard errors.
DynamicsReport audit_certificate_dynamics(const Simulator& sim, const Certificate& c,
                                          const std::vector<TrajectoryReport>& trajectories,
                                          const DynamicsOptions& options = {});

}  // namespace pterm::sim
