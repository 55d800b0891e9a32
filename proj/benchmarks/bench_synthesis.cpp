#include <benchmark/benchmark.h>

#include "pterm/checker.hpp"
#include "pterm/json_io.hpp"
#include "pterm/lowering.hpp"
#include "pterm/synthesis.hpp"

using namespace pterm;

namespace {

struct Subject {
  PCFG program;
  Invariant invariant;
};

Subject load(const std::string& stem) {
  const std::string dir = PTERM_FIXTURES;
  PCFG p = frontend::compile_program(io::read_file(dir + "/" + stem + ".prob"));
  Invariant inv = io::load_invariant(dir + "/" + stem + ".inv.json", p);
  return {std::move(p), std::move(inv)};
}

void BM_SynthesizeBsp(benchmark::State& state) {
  const auto s = load("fig1b");
  for (auto _ : state) benchmark::DoNotOptimize(synthesis::synthesize_bsp(s.program, s.invariant));
}

void BM_SynthesizeGeneral(benchmark::State& state) {
  const auto s = load("fig1a");
  for (auto _ : state) benchmark::DoNotOptimize(synthesis::synthesize_general(s.program, s.invariant));
}

void BM_Check(benchmark::State& state) {
  const auto s = load("fig1b");
  const auto c = io::load_certificate(std::string(PTERM_FIXTURES) + "/example3.cert.json", s.program);
  for (auto _ : state) benchmark::DoNotOptimize(checker::check_certificate(s.program, s.invariant, c));
}

}  // namespace

BENCHMARK(BM_SynthesizeBsp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SynthesizeGeneral)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Check)->Unit(benchmark::kMillisecond);
