// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "pterm/checker.hpp"
#include "pterm/counterexample.hpp"
#include "pterm/farkas.hpp"
#include "pterm/json_io.hpp"
#include "pterm/lowering.hpp"
#include "pterm/simulator.hpp"
#include "pterm/synthesis.hpp"
#include "support/fixtures.hpp"
#include "support/interpreter.hpp"
#include "support/mutations.hpp"
#include "support/oracles.hpp"

using namespace pterm;
using pterm::testing::fixture_path;
using pterm::testing::load_subject;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

Outcome check_reference(const std::string& stem, const std::string& cert, CertificateMode mode) {
  const auto s = load_subject(stem);
  const auto c = io::load_certificate(fixture_path(cert), s.program);
  if (c.mode != mode) return {false, "certificate has the wrong mode"};
  const auto r = checker::check_certificate(s.program, s.invariant, c);
  std::size_t unbound = 0;
  for (const auto& cond : r.conditions) unbound += cond.condition == "UNBOUND";
  std::ostringstream os;
  os << r.conditions.size() << " conditions, " << r.violations().size() << " violated";
  if (mode == CertificateMode::GeneralSound) os << ", " << unbound << " UNBOUND";
  const bool ok = r.accepted && (mode != CertificateMode::GeneralSound || unbound > 0);
  return {ok, os.str()};
}

Outcome criterion_example3() { return check_reference("fig1b", "example3.cert.json", CertificateMode::BSPComplete); }

Outcome criterion_example4() { return check_reference("fig1a", "example4.cert.json", CertificateMode::GeneralSound); }

Outcome criterion_bsp_synthesis() {
  const auto s = load_subject("fig1b");
  const auto a = synthesis::synthesize_bsp(s.program, s.invariant);
  const auto b = synthesis::synthesize_bsp(s.program, s.invariant);
  if (!a.certificate || !b.certificate) return {false, synthesis::status_name(a.status)};
  const auto& c = *a.certificate;
  const bool accepted = checker::check_certificate(s.program, s.invariant, c).accepted;
  const bool identical = io::certificate_to_json(c, s.program) == io::certificate_to_json(*b.certificate, s.program);
  std::ostringstream os;
  os << "dimension " << c.lem.dimension << ", shift " << c.shift.to_string() << ", "
     << (accepted ? "accepted" : "rejected") << ", reruns " << (identical ? "identical" : "differ");
  return {c.lem.dimension <= 3 && accepted && identical, os.str()};
}

Outcome criterion_general_synthesis() {
  const auto s = load_subject("fig1a");
  const auto r = synthesis::synthesize_general(s.program, s.invariant);
  if (!r.certificate) return {false, synthesis::status_name(r.status)};
  const bool accepted = checker::check_certificate(s.program, s.invariant, *r.certificate).accepted;
  std::ostringstream os;
  os << "dimension " << r.certificate->lem.dimension << ", " << (accepted ? "accepted" : "rejected");
  return {accepted, os.str()};
}

Outcome criterion_negative() {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto zd = load_subject("zero_drift");
  const auto a = synthesis::synthesize_general(zd.program, zd.invariant);
  const double ta = std::chrono::duration<double>(clock::now() - t0).count();
  const auto t1 = clock::now();
  const auto dv = load_subject("divergent");
  const auto b = synthesis::synthesize_bsp(dv.program, dv.invariant);
  const double tb = std::chrono::duration<double>(clock::now() - t1).count();
  std::ostringstream os;
  os << "zero_drift: " << synthesis::status_name(a.status) << "; divergent: " << synthesis::status_name(b.status);
  const bool ok = !a.certificate && b.status == synthesis::Status::NoLinGLexRSM && ta < 5 && tb < 5;
  return {ok, os.str()};
}

Outcome criterion_counterexample() {
  const std::uint64_t runs = 1000000;
  const double oracle = sim::counterexample_probability();
  const auto e = sim::counterexample_process(20240, runs, 60, sim::default_threads());
  const double se = std::sqrt(oracle * (1 - oracle) / static_cast<double>(runs));
  const double z = (e.fraction - oracle) / se;
  char buf[160];
  std::snprintf(buf, sizeof buf, "p* = %.10f, empirical %.6f over %llu runs, z = %+.2f", oracle, e.fraction,
                static_cast<unsigned long long>(runs), z);
  return {std::abs(z) <= 4 && oracle < 0.5, buf};
}

Outcome criterion_simulation() {
  struct Case {
    const char* stem;
    std::vector<double> init;
  };
  std::ostringstream os;
  bool ok = true;
  for (const Case& c : {Case{"fig1a", {5, 3}}, Case{"fig1b", {3, 3}}}) {
    const auto s = load_subject(c.stem);
    sim::Simulator simulator(s.program);
    const auto e = sim::estimate_termination(simulator, {s.program.init, c.init}, 2000, 1000000, 7,
                                             sim::default_threads());
    ok = ok && e.fraction >= 0.99;
    os << c.stem << " " << e.terminated << "/" << e.runs << "  ";
  }
  return {ok, os.str()};
}

Outcome criterion_farkas() {
  using pterm::testing::box;
  using pterm::testing::brute_force_max;
  using pterm::testing::random_expr;
  std::mt19937_64 rng(8);
  int instances = 0, agree = 0, holds = 0;
  while (instances < 500) {
    const int n = 1 + static_cast<int>(rng() % 3);
    Polyhedron ante = box(n, Rational(2 + static_cast<long>(rng() % 4)));
    const int extra = static_cast<int>(rng() % 4);
    for (int k = 0; k < extra; ++k) ante.constraints.push_back({random_expr(rng, n), Rel::Le});
    // The offset balances valid and invalid implications.
    const LinExpr cons = random_expr(rng, n, 3) + LinExpr(Rational(static_cast<long>(rng() % 12)));
    const auto worst = brute_force_max(ante, -cons, n);
    if (!worst) continue;
    ++instances;
    const bool expected = -*worst >= Rational(0);
    holds += expected;
    lp::LPProblem problem;
    for (const auto& row : lp::encode_implication({ante, lift(cons)}, problem, "imp")) problem.add_constraint(row);
    const bool feasible = lp::solve_lp(problem).status == lp::LPStatus::Optimal;
    agree += feasible == expected;
  }
  std::ostringstream os;
  os << agree << "/" << instances << " agree (" << holds << " valid, " << instances - holds << " invalid)";
  return {agree == instances, os.str()};
}

Outcome criterion_mutations() {
  const auto& list = pterm::testing::curated_mutations();
  std::size_t correct = 0;
  for (const auto& m : list) {
    auto s = load_subject(m.program);
    auto c = io::load_certificate(fixture_path(m.certificate), s.program);
    pterm::testing::apply(m, s.program, c);
    const auto r = checker::check_certificate(s.program, s.invariant, c);
    bool ok = r.accepted == m.accepted;
    if (ok && !m.accepted)
      ok = std::any_of(r.conditions.begin(), r.conditions.end(), [&](const checker::ConditionResult& x) {
        return !x.holds && x.transition == m.transition && x.condition == m.condition &&
               x.component == m.violated_component;
      });
    correct += ok;
  }
  std::ostringstream os;
  os << correct << "/" << list.size() << " verdicts as expected";
  return {list.size() >= 10 && correct == list.size(), os.str()};
}

Outcome criterion_lowering() {
  std::size_t programs = 0, traces = 0, agree = 0;
  for (const auto& stem : pterm::testing::fixture_programs()) {
    const auto source = frontend::parse_program(io::read_file(fixture_path(stem + ".prob")));
    frontend::LoweringInfo info;
    const PCFG p = frontend::lower_to_pcfg(source, &info);
    sim::Simulator simulator(p);
    sim::RunOptions o;
    o.record_states = true;
    o.step_cap = 501 * (p.transitions.size() + 1);
    ++programs;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      std::vector<double> x;
      for (int v = 0; v < p.num_vars(); ++v) x.push_back(static_cast<double>((seed * 7 + v * 3) % 9) - 2);
      auto a = sim::Streams::for_run(seed, 0), b = sim::Streams::for_run(seed, 0);
      const auto ref = pterm::testing::interpret(source, x, a, 500);
      const auto run = simulator.run({p.init, x}, b, o);
      std::vector<pterm::testing::HeadVisit> heads;
      for (const auto& v : run.visited) {
        const auto it = std::find(info.loop_heads.begin(), info.loop_heads.end(), v.state.loc);
        if (it != info.loop_heads.end() && heads.size() < 500)
          heads.push_back({static_cast<std::size_t>(it - info.loop_heads.begin()), v.state.x});
      }
      bool same = heads.size() == ref.heads.size() && (!ref.terminated || run.terminated);
      for (std::size_t k = 0; same && k < heads.size(); ++k) {
        same = heads[k].loop == ref.heads[k].loop;
        for (std::size_t i = 0; same && i < heads[k].x.size(); ++i)
          same = std::abs(heads[k].x[i] - ref.heads[k].x[i]) <= 1e-9 * (1 + std::abs(ref.heads[k].x[i]));
      }
      ++traces;
      agree += same;
    }
  }
  std::ostringstream os;
  os << agree << "/" << traces << " traces agree over " << programs << " programs";
  return {agree == traces && programs > 0, os.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Example 3 certificate accepted exactly", 1, criterion_example3},
      {2, "Example 4 certificate accepted (general-sound)", 1, criterion_example4},
      {3, "bsp synthesis on fig1b: dim <= 3, accepted, deterministic", 10, criterion_bsp_synthesis},
      {4, "general synthesis on fig1a: accepted", 10, criterion_general_synthesis},
      {5, "negative decisions", 10, criterion_negative},
      {6, "counterexample process matches series oracle", 60, criterion_counterexample},
      {7, "simulated termination >= 99%", 120, criterion_simulation},
      {8, "Farkas encoding vs brute-force entailment", 60, criterion_farkas},
      {9, "curated certificate mutations", 10, criterion_mutations},
      {10, "lowering vs source interpreter", 30, criterion_lowering},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.limit_s;
    if (o.pass && !pass) o.detail += " (over time limit)";
    failed += !pass;
    std::printf("[%s] %2d %s: %s (%.2fs, limit %.0fs)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
