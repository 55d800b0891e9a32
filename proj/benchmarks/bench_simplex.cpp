#include <benchmark/benchmark.h>

#include <random>

#include "pterm/lp.hpp"

using namespace pterm;
using namespace pterm::lp;

namespace {

// Random bounded LP: n unknowns in [0, 10], m random <= rows, random objective.
LPProblem random_lp(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto small = [&](int span) { return Rational(static_cast<long>(rng() % (2 * span + 1)) - span); };
  LPProblem lp;
  for (int i = 0; i < n; ++i) lp.add_unknown("x" + std::to_string(i), Rational(0), Rational(10));
  for (int r = 0; r < m; ++r) {
    LinExpr row(-Rational(static_cast<long>(rng() % 20)));
    for (int i = 0; i < n; ++i) row += LinExpr::variable(i, small(4));
    lp.add_constraint({row, Rel::Le});
  }
  LinExpr obj;
  for (int i = 0; i < n; ++i) obj += LinExpr::variable(i, small(5));
  lp.set_objective(obj);
  return lp;
}

void BM_SimplexRandom(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LPProblem lp = random_lp(n, 2 * n, 42);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp));
  state.SetComplexityN(n);
}

}  // namespace

BENCHMARK(BM_SimplexRandom)->RangeMultiplier(2)->Range(4, 32)->Complexity();
BENCHMARK_MAIN();
