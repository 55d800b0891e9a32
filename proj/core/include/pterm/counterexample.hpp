#pragma once

#include <cstdint>

namespace pterm::sim {

/// Process Y_0 = 1; while Y_t >= 0, with probability p_t = 2^-t / 4 set
/// Y_{t+1} = Y_t - 2/p_t, else Y_{t+1} = Y_t + 1/(1 - p_t). It satisfies
/// every GLexRSM condition except expected leftward nonnegativity, yet
/// stops (Y < 0) with probability p* < 1/2.

/// p* = sum_t p_t prod_{s<t} (1 - p_s), summed in long double.
double counterexample_probability(int terms = 200);

/// Frozen reference value of p* to ten significant digits.
inline constexpr double kCounterexampleOracle = 0.4224238098;

struct CounterexampleEstimate {
  std::uint64_t runs = 0;
  std::uint64_t stopped = 0;
  double fraction = 0;
  double standard_error = 0;
  int truncation_step = 0;
  /// Upper bound on the probability of stopping at or after the truncation
  /// step, which the simulation cannot observe.
  double residual_bound = 0;
};

CounterexampleEstimate counterexample_process(std::uint64_t seed, std::uint64_t runs, int truncation_step = 60,
                                              unsigned threads = 1);

}  // namespace pterm::sim
