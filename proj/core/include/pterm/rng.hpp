#pragma once

#include <cstdint>
#include <random>

namespace pterm::sim {

/// splitmix64 step; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of substream `stream` of run `index` under `master`.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream);

/// mt19937_64 with fixed, platform-independent derived variates.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by the Marsaglia polar method.
  double normal();
  /// Exponential with rate 1 by inversion.
  double exponential();
  /// Uniform index in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0;
  bool has_spare_ = false;
};

/// The two independent streams of one run: sampling (distributions and
/// branching coins) and scheduling (transition choice and nondet values).
struct Streams {
  Rng samples;
  Rng scheduler;

  static Streams for_run(std::uint64_t master, std::uint64_t index) {
    return {Rng(substream_seed(master, index, 0)), Rng(substream_seed(master, index, 1))};
  }
};

}  // namespace pterm::sim
