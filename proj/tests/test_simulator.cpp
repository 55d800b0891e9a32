#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pterm/audit.hpp"
#include "pterm/counterexample.hpp"
#include "pterm/json_io.hpp"
#include "pterm/lowering.hpp"
#include "pterm/simulator.hpp"
#include "support/fixtures.hpp"
#include "support/interpreter.hpp"

using namespace pterm;
using namespace pterm::sim;
using pterm::testing::fixture_path;
using pterm::testing::load_subject;

namespace {

State at_init(const PCFG& p, std::vector<double> x) { return {p.init, std::move(x)}; }

Certificate load_cert(const PCFG& p, const std::string& name) { return io::load_certificate(fixture_path(name), p); }

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST(Rng, SubstreamsAreDeterministicAndDistinct) {
  Rng a(substream_seed(42, 7, 0)), b(substream_seed(42, 7, 0)), c(substream_seed(42, 7, 1)), d(substream_seed(42, 8, 0));
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  EXPECT_NE(x, d.next());
}

TEST(Rng, VariatesHaveTheRightMoments) {
  Rng r(1);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, se = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
    se += r.exponential();
  }
  EXPECT_NEAR(su / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sn / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(sn2 / n, 1.0, 5 * std::sqrt(2.0 / n));
  EXPECT_NEAR(se / n, 1.0, 5 / std::sqrt(n));
  std::vector<int> counts(3);
  for (int i = 0; i < 30000; ++i) ++counts[r.below(3)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 5 * std::sqrt(30000 * (1.0 / 3) * (2.0 / 3)));
}

TEST(Samplers, EmpiricalMeansMatchDeclaredMeans) {
  const std::vector<DistributionSpec> dists = {
      DistributionSpec::normal(Rational(2), Rational(3)),
      DistributionSpec::uniform(Rational(-7), Rational(1)),
      DistributionSpec::discrete({{Rational(-1), Rational(2, 3)}, {Rational(1), Rational(1, 3)}}),
      DistributionSpec::bernoulli(Rational(1, 4)),
      DistributionSpec::custom("exp_shifted", Rational(-1), Rational(-2), std::nullopt),
      DistributionSpec::custom("exp", Rational(1), Rational(0), std::nullopt),
      DistributionSpec::custom("laplace", Rational(0), std::nullopt, std::nullopt),
  };
  Rng r(9);
  for (const auto& d : dists) {
    const int n = 100000;
    double s = 0, s2 = 0, lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < n; ++i) {
      const double v = sample(d, r);
      s += v;
      s2 += v * v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double mean = s / n, sd = std::sqrt(s2 / n - mean * mean);
    EXPECT_NEAR(mean, d.mean.to_double(), 5 * sd / std::sqrt(n)) << kind_name(d.kind());
    if (d.support_lo) EXPECT_GE(lo, d.support_lo->to_double());
    if (d.support_hi) EXPECT_LE(hi, d.support_hi->to_double());
  }
  EXPECT_THROW(sample(DistributionSpec::custom("nope", Rational(0), std::nullopt, std::nullopt), r), std::invalid_argument);
}

TEST(Trajectory, StartAtTerminal) {
  const auto s = load_subject("fig1b");
  Simulator sim(s.program);
  const auto r = sim.run({s.program.terminal, {0, 0}}, 1, 0);
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.steps, 0u);
}

TEST(Trajectory, DivergentHitsTheCap) {
  const auto s = load_subject("divergent");
  Simulator sim(s.program);
  RunOptions o;
  o.step_cap = 1000;
  const auto r = sim.run(at_init(s.program, {0}), 1, 0, o);
  EXPECT_FALSE(r.terminated);
  EXPECT_FALSE(r.stuck);
  EXPECT_EQ(r.steps, 1000u);
  EXPECT_EQ(estimate_termination(sim, at_init(s.program, {0}), 50, 1000, 3).fraction, 0.0);
}

TEST(Trajectory, Fig1bFromOriginTerminates) {
  const auto s = load_subject("fig1b");
  Simulator sim(s.program);
  const auto e = estimate_termination(sim, at_init(s.program, {0, 0}), 2000, 100000, 11);
  EXPECT_GE(e.fraction, 0.999);
}

TEST(Trajectory, TerminatedRunsStayTerminal) {
  const auto s = load_subject("coin_walk");
  Simulator sim(s.program);
  for (std::uint64_t i = 0; i < 50; ++i) {
    Streams streams = Streams::for_run(5, i);
    auto r = sim.run(at_init(s.program, {4}), streams);
    ASSERT_TRUE(r.terminated);
    ASSERT_EQ(r.final_state.loc, s.program.terminal);
    State st = r.final_state;
    for (int k = 0; k < 10; ++k) {
      ASSERT_TRUE(sim.step(st, streams));
      EXPECT_EQ(st, r.final_state);
    }
  }
}

TEST(Trajectory, StuckWithoutEnabledTransition) {
  auto s = load_subject("fig1b");
  std::erase_if(s.program.transitions, [](const Transition& t) { return t.id == "t2"; });
  Simulator sim(s.program);
  const auto r = sim.run(at_init(s.program, {-1, 0}), 1, 0);
  EXPECT_TRUE(r.stuck);
  EXPECT_FALSE(r.terminated);
  EXPECT_EQ(r.steps, 0u);
}

TEST(Trajectory, ReproducibleAndThreadIndependent) {
  const auto s = load_subject("fig1a");
  Simulator sim(s.program);
  RunOptions o;
  o.record_states = true;
  const auto a = sim.run(at_init(s.program, {5, 3}), 77, 4, o);
  const auto b = sim.run(at_init(s.program, {5, 3}), 77, 4, o);
  ASSERT_EQ(a.visited.size(), b.visited.size());
  for (std::size_t i = 0; i < a.visited.size(); ++i) EXPECT_EQ(a.visited[i].state, b.visited[i].state);

  const auto one = estimate_termination(sim, at_init(s.program, {5, 3}), 200, 100000, 5, 1);
  const auto four = estimate_termination(sim, at_init(s.program, {5, 3}), 200, 100000, 5, 4);
  ASSERT_EQ(one.per_run.size(), four.per_run.size());
  for (std::size_t i = 0; i < one.per_run.size(); ++i) {
    EXPECT_EQ(one.per_run[i].steps, four.per_run[i].steps);
    EXPECT_EQ(one.per_run[i].terminated, four.per_run[i].terminated);
  }
}

TEST(Trajectory, EtaTrace) {
  const auto s = load_subject("fig1b");
  const auto c = load_cert(s.program, "example3.cert.json");
  Simulator sim(s.program, {}, &c);
  RunOptions o;
  o.record_eta = true;
  const auto r = sim.run(at_init(s.program, {1, 2}), 1, 0, o);
  ASSERT_FALSE(r.eta_trace.empty());
  EXPECT_EQ(r.eta_trace.front(), (std::vector<double>{1, 8, 9}));
  EXPECT_EQ(r.eta_trace.size(), r.steps + 1);
}

TEST(Wilson, KnownValues) {
  auto [lo, hi] = wilson_interval(5, 10);
  EXPECT_NEAR(lo, 0.236593, 1e-6);
  EXPECT_NEAR(hi, 0.763407, 1e-6);
  std::tie(lo, hi) = wilson_interval(0, 10);
  EXPECT_EQ(lo, 0.0);
  EXPECT_NEAR(hi, 0.277533, 1e-6);
}

TEST(Scheduler, PriorityListIsHonoured) {
  const auto s = load_subject("demonic");
  Scheduler sched;
  sched.priority = {"t1"};
  Simulator sim(s.program, sched);
  RunOptions o;
  o.record_states = true;
  const auto r = sim.run(at_init(s.program, {5, 0}), 1, 0, o);
  ASSERT_TRUE(r.terminated);
  for (const auto& v : r.visited)
    if (v.transition && v.state.loc == 0 && v.state.x[0] >= 0) EXPECT_EQ(s.program.transitions[*v.transition].id, "t1");
}

TEST(Scheduler, EndpointNondetChoices) {
  const auto s = load_subject("demonic");
  Scheduler sched;
  sched.priority = {"t1"};
  for (auto [choice, y] : {std::pair{NondetChoice::Lower, 0.0}, std::pair{NondetChoice::Upper, 2.0}}) {
    sched.nondet = choice;
    Simulator sim(s.program, sched);
    State st = at_init(s.program, {5, 1});
    Streams streams = Streams::for_run(1, 0);
    sim.step(st, streams);
    EXPECT_EQ(st.x[1], y);
  }
}

TEST(Scheduler, AdversarialNeedsACertificate) {
  const auto s = load_subject("demonic");
  Scheduler sched;
  sched.kind = SchedulerKind::Adversarial;
  EXPECT_THROW(Simulator(s.program, sched), std::invalid_argument);
}

TEST(Scheduler, AdversarialPrefersTheSlowerBranch) {
  const auto s = load_subject("demonic");
  // eta(l0) = x + 1 with eta(l1) = x - y + 1: x := x - 1 leaves more than
  // the nondet branch at its minimum y = 0 after the second step.
  Certificate c;
  c.lem.dimension = 1;
  c.lem.components = {{LinExpr::variable(0, Rational(1)) + LinExpr(Rational(1))},
                      {LinExpr::variable(0, Rational(1)) - LinExpr::variable(1, Rational(1)) + LinExpr(Rational(1))},
                      {LinExpr(Rational(0))}};
  c.levels = {{"t0", 1}, {"t1", 1}, {"t2", 1}, {"t3", 1}, {"t4", 0}};
  Scheduler sched;
  sched.kind = SchedulerKind::Adversarial;
  Simulator sim(s.program, sched, &c);
  State st = at_init(s.program, {5, 2});
  Streams streams = Streams::for_run(1, 0);
  // After t0: x + 1 = 5; after t1 (at l1, y chosen): x - y + 1 is 6 at y = 0.
  const auto t = sim.step(st, streams);
  ASSERT_TRUE(t);
  EXPECT_EQ(s.program.transitions[*t].id, "t1");
  EXPECT_EQ(st.x[1], 0.0);
}

// Without nondeterminism every state has one enabled transition, so the
// scheduler cannot change the distribution of step counts. KS at alpha 0.01.
TEST(Scheduler, IrrelevantWithoutNondeterminism) {
  const auto s = load_subject("coin_walk");
  Scheduler uniform;
  uniform.kind = SchedulerKind::UniformRandom;
  Simulator a(s.program, uniform), b(s.program);
  const std::uint64_t n = 2000;
  const auto ea = estimate_termination(a, at_init(s.program, {6}), n, 100000, 21);
  const auto eb = estimate_termination(b, at_init(s.program, {6}), n, 100000, 22);
  std::vector<double> sa, sb;
  for (const auto& r : ea.per_run) sa.push_back(static_cast<double>(r.steps));
  for (const auto& r : eb.per_run) sb.push_back(static_cast<double>(r.steps));
  EXPECT_LT(ks_statistic(sa, sb), 1.628 * std::sqrt(2.0 / n));
}

TEST(Counterexample, SeriesMatchesOracle) {
  const double p = counterexample_probability();
  EXPECT_NEAR(p, kCounterexampleOracle, 1e-10);
  EXPECT_LT(p, 0.5);
}

TEST(Counterexample, EmpiricalFrequencyWithinFourStandardErrors) {
  const auto e = counterexample_process(2024, 200000, 60, 2);
  const double se = std::sqrt(kCounterexampleOracle * (1 - kCounterexampleOracle) / 200000);
  EXPECT_NEAR(e.fraction, kCounterexampleOracle, 4 * se);
  EXPECT_LT(e.residual_bound, 1e-15);
  // Doubling the runs shrinks the standard error by about sqrt(2).
  const auto half = counterexample_process(2025, 100000, 60, 2);
  EXPECT_NEAR(half.standard_error / e.standard_error, std::sqrt(2.0), 0.05);
}

TEST(Audit, Example3InvariantHolds) {
  const auto s = load_subject("fig1b");
  Simulator sim(s.program);
  const auto runs = sample_trajectories(sim, at_init(s.program, {3, 3}), 1000, 10000, 8);
  EXPECT_TRUE(audit_invariant(s.program, s.invariant, runs).empty());
  EXPECT_TRUE(audit_invariant(s.program, s.invariant, {}).empty());
}

TEST(Audit, WrongInvariantIsRefutedAtStepZero) {
  auto s = load_subject("fig1b");
  s.invariant.at[0] = Polyhedron{{LinConstraint::ge(LinExpr::variable(0, Rational(1)), LinExpr(Rational(100)))}};
  Simulator sim(s.program);
  const auto runs = sample_trajectories(sim, at_init(s.program, {0, 0}), 5, 10000, 8);
  const auto v = audit_invariant(s.program, s.invariant, runs);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().run, 0u);
  EXPECT_EQ(v.front().step, 0u);
}

TEST(Audit, Example4DynamicsRaiseNoFlags) {
  const auto s = load_subject("fig1a");
  const auto c = load_cert(s.program, "example4.cert.json");
  Simulator sim(s.program);
  const auto runs = sample_trajectories(sim, at_init(s.program, {5, 3}), 100, 10000, 4);
  const auto r = audit_certificate_dynamics(sim, c, runs);
  EXPECT_GT(r.audited_steps, 100u);
  EXPECT_TRUE(r.flags.empty());
}

TEST(Audit, PlantedNegativeComponentIsFlagged) {
  const auto s = load_subject("fig1a");
  auto c = load_cert(s.program, "example4.cert.json");
  c.lem.components[0][0] = LinExpr(Rational(-1));
  Simulator sim(s.program);
  const auto runs = sample_trajectories(sim, at_init(s.program, {5, 3}), 10, 10000, 4);
  const auto r = audit_certificate_dynamics(sim, c, runs);
  EXPECT_TRUE(std::any_of(r.flags.begin(), r.flags.end(), [](const auto& f) { return f.condition == "P-NNEG" && f.component == 1; }));
}

TEST(Audit, DeterministicStepsAreCheckedExactly) {
  const auto s = load_subject("countdown");
  // x at l0 decreases by exactly 1 per step: P-RANK holds with equality,
  // and the zero-variance mean must not be flagged. The exit leaves x = -1,
  // so lout sits at -1.
  Certificate c;
  c.lem.dimension = 1;
  c.lem.components = {{LinExpr::variable(0, Rational(1)) + LinExpr(Rational(1))}, {LinExpr(Rational(-1))}};
  c.levels = {{"t0", 1}, {"t1", 1}, {"t2", 0}};
  Simulator sim(s.program);
  const auto runs = sample_trajectories(sim, at_init(s.program, {20}), 3, 1000, 1);
  EXPECT_TRUE(audit_certificate_dynamics(sim, c, runs).flags.empty());
  // With x/2 + 1 the loop only drops by 1/2: every loop step is flagged.
  c.lem.components[0][0] = LinExpr::variable(0, Rational(1, 2)) + LinExpr(Rational(1));
  const auto r = audit_certificate_dynamics(sim, c, runs);
  EXPECT_EQ(std::count_if(r.flags.begin(), r.flags.end(), [](const auto& f) { return f.transition == "t0"; }), 3 * 21);
}

// The pCFG simulator and the source interpreter see the same loop-head
// states when they share random streams.
TEST(Lowering, AgreesWithSourceInterpreter) {
  for (const auto& stem : pterm::testing::fixture_programs()) {
    const auto text = io::read_file(fixture_path(stem + ".prob"));
    const auto source = frontend::parse_program(text);
    frontend::LoweringInfo info;
    const PCFG p = frontend::lower_to_pcfg(source, &info);
    Simulator sim(p);
    RunOptions o;
    o.record_states = true;
    o.step_cap = 501 * (p.transitions.size() + 1);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      std::vector<double> x;
      for (int v = 0; v < p.num_vars(); ++v) x.push_back(static_cast<double>((seed * 7 + v * 3) % 9) - 2);
      Streams a = Streams::for_run(seed, 0), b = Streams::for_run(seed, 0);
      const auto ref = pterm::testing::interpret(source, x, a, 500);
      const auto run = sim.run(at_init(p, x), b, o);
      std::vector<pterm::testing::HeadVisit> heads;
      for (const auto& v : run.visited) {
        const auto it = std::find(info.loop_heads.begin(), info.loop_heads.end(), v.state.loc);
        if (it != info.loop_heads.end() && heads.size() < 500)
          heads.push_back({static_cast<std::size_t>(it - info.loop_heads.begin()), v.state.x});
      }
      ASSERT_EQ(heads.size(), ref.heads.size()) << stem << " seed " << seed;
      for (std::size_t k = 0; k < heads.size(); ++k) {
        ASSERT_EQ(heads[k].loop, ref.heads[k].loop) << stem << " seed " << seed << " visit " << k;
        for (std::size_t i = 0; i < heads[k].x.size(); ++i)
          ASSERT_NEAR(heads[k].x[i], ref.heads[k].x[i], 1e-9 * (1 + std::abs(ref.heads[k].x[i]))) << stem;
      }
      if (ref.terminated) EXPECT_TRUE(run.terminated) << stem << " seed " << seed;
    }
  }
}
