#include <benchmark/benchmark.h>

#include "pterm/counterexample.hpp"
#include "pterm/json_io.hpp"
#include "pterm/lowering.hpp"
#include "pterm/simulator.hpp"

using namespace pterm;

namespace {

void BM_SimulateFig1b(benchmark::State& state) {
  const PCFG p = frontend::compile_program(io::read_file(std::string(PTERM_FIXTURES) + "/fig1b.prob"));
  sim::Simulator simulator(p);
  const sim::State init{p.init, {3, 3}};
  std::uint64_t index = 0, steps = 0;
  for (auto _ : state) {
    const auto r = simulator.run(init, 1, index++, {});
    steps += r.steps;
  }
  state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}

void BM_CounterexampleProcess(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sim::counterexample_process(5, 10000, 60, 1));
  state.SetItemsProcessed(state.iterations() * 10000);
}

}  // namespace

BENCHMARK(BM_SimulateFig1b);
BENCHMARK(BM_CounterexampleProcess)->Unit(benchmark::kMillisecond);
