#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pterm/certificate.hpp"
#include "pterm/rng.hpp"
#include "pterm/samplers.hpp"

namespace pterm::sim {

struct State {
  LocId loc = 0;
  std::vector<double> x;
  friend bool operator==(const State&, const State&) = default;
};

enum class SchedulerKind {
  /// Uniform choice among enabled transitions.
  UniformRandom,
  /// First enabled transition in priority order (default: input order).
  FixedPriority,
  /// Greedy: the choice whose expected next state has the lexicographically
  /// largest certificate value. Needs a certificate.
  Adversarial,
};

/// How nondeterministic assignments pick their value.
enum class NondetChoice { Uniform, Lower, Upper };

struct Scheduler {
  SchedulerKind kind = SchedulerKind::FixedPriority;
  /// Transition ids, highest priority first; unlisted transitions follow in
  /// input order.
  std::vector<std::string> priority;
  NondetChoice nondet = NondetChoice::Uniform;
};

const char* scheduler_name(SchedulerKind k);
std::optional<SchedulerKind> parse_scheduler(std::string_view name);

struct Visit {
  State state;
  /// Transition taken from this state; unset for the last state.
  std::optional<std::size_t> transition;
};

struct TrajectoryReport {
  bool terminated = false;
  bool stuck = false;
  std::uint64_t steps = 0;
  State final_state;
  /// Certificate value at each visited state, when requested.
  std::vector<std::vector<double>> eta_trace;
  /// Visited states, when requested.
  std::vector<Visit> visited;
};

struct RunOptions {
  std::uint64_t step_cap = 1'000'000;
  bool record_states = false;
  bool record_eta = false;
};

/// Executes a pCFG on doubles. Expressions are compiled to dense form once.
class Simulator {
 public:
  Simulator(const PCFG& p, Scheduler scheduler = {}, const Certificate* certificate = nullptr,
            const SamplerRegistry& registry = SamplerRegistry::builtins());
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  const PCFG& program() const;

  /// Indices of transitions enabled at `s`, in input order.
  std::vector<std::size_t> enabled(const State& s) const;
  /// Scheduler's choice among the enabled transitions; nullopt when stuck.
  std::optional<std::size_t> choose(const State& s, Streams& streams) const;
  /// Fires transition `t` (assumed enabled) in place.
  void apply(std::size_t t, State& s, Streams& streams) const;
  /// One scheduler step; returns the transition taken or nullopt when stuck.
  std::optional<std::size_t> step(State& s, Streams& streams) const;

  TrajectoryReport run(State init, Streams& streams, const RunOptions& options = {}) const;
  TrajectoryReport run(State init, std::uint64_t seed, std::uint64_t index, const RunOptions& options = {}) const;

  /// Certificate value at `s`; empty without a certificate.
  std::vector<double> eta(const State& s) const;

 private:
  struct Compiled;
  std::unique_ptr<Compiled> c_;
};

/// 95% Wilson score interval for `successes` out of `n`.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.959963984540054);

struct RunSummary {
  std::uint64_t run = 0;
  bool terminated = false;
  bool stuck = false;
  std::uint64_t steps = 0;
};

struct Estimate {
  std::uint64_t runs = 0;
  std::uint64_t terminated = 0;
  std::uint64_t stuck = 0;
  std::uint64_t capped = 0;
  double fraction = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  double mean_steps = 0;  // over terminated runs
  std::vector<RunSummary> per_run;
};

/// Runs `runs` independent trajectories, run i seeded from (seed, i); the
/// result does not depend on `threads` (0 = hardware concurrency).
Estimate estimate_termination(const Simulator& sim, const State& init, std::uint64_t runs, std::uint64_t step_cap,
                              std::uint64_t seed, unsigned threads = 1);

/// Runs trajectories that record their states, for the audits.
std::vector<TrajectoryReport> sample_trajectories(const Simulator& sim, const State& init, std::uint64_t runs,
                                                  std::uint64_t step_cap, std::uint64_t seed, unsigned threads = 1);

/// Default thread count: PTERM_THREADS when set, else 1.
unsigned default_threads();

}  // namespace pterm::sim
