#include "pterm/counterexample.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "pterm/rng.hpp"

namespace pterm::sim {

double counterexample_probability(int terms) {
  long double total = 0, survive = 1;
  for (int t = 0; t < terms; ++t) {
    const long double p = std::ldexp(0.25L, -t);
    total += p * survive;
    survive *= 1 - p;
  }
  return static_cast<double>(total);
}

namespace {

bool stops(Rng& rng, int horizon) {
  double y = 1;
  for (int t = 0; t < horizon; ++t) {
    const double p = std::ldexp(0.25, -t);
    if (rng.uniform() < p)
      y -= 2 / p;
    else
      y += 1 / (1 - p);
    if (y < 0) return true;
  }
  return false;
}

}  // namespace

CounterexampleEstimate counterexample_process(std::uint64_t seed, std::uint64_t runs, int truncation_step,
                                              unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::uint64_t> counts(threads, 0);
  auto work = [&](unsigned w) {
    for (std::uint64_t i = w; i < runs; i += threads) {
      Rng rng(substream_seed(seed, i, 0));
      counts[w] += stops(rng, truncation_step);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();

  CounterexampleEstimate e;
  e.runs = runs;
  for (auto c : counts) e.stopped += c;
  e.fraction = runs ? static_cast<double>(e.stopped) / static_cast<double>(runs) : 0;
  e.standard_error = runs ? std::sqrt(e.fraction * (1 - e.fraction) / static_cast<double>(runs)) : 0;
  e.truncation_step = truncation_step;
  // sum_{t >= t*} 2^-t / 4 = 2^-t* / 2
  e.residual_bound = std::ldexp(0.5, -truncation_step);
  return e;
}

}  // namespace pterm::sim
