#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "pterm/checker.hpp"
#include "pterm/errors.hpp"
#include "pterm/json_io.hpp"
#include "support/fixtures.hpp"
#include "support/mutations.hpp"
#include "support/pointwise.hpp"

using namespace pterm;
using namespace pterm::checker;
using pterm::testing::fixture_path;
using pterm::testing::load_subject;

namespace {

struct Case {
  PCFG program;
  Invariant invariant;
  Certificate certificate;
};

Case example(const std::string& stem, const std::string& cert) {
  auto s = load_subject(stem);
  Certificate c = io::load_certificate(fixture_path(cert), s.program);
  return {std::move(s.program), std::move(s.invariant), std::move(c)};
}

bool has_violation(const Report& r, const std::string& t, const std::string& cond, int j) {
  return std::any_of(r.conditions.begin(), r.conditions.end(), [&](const ConditionResult& c) {
    return !c.holds && c.transition == t && c.condition == cond && c.component == j;
  });
}

std::vector<Rational> point(const PCFG& p, const std::map<std::string, Rational>& named) {
  std::vector<Rational> x;
  for (const auto& v : p.variables) x.push_back(named.at(v));
  return x;
}

}  // namespace

TEST(Checker, AcceptsExample3) {
  const auto e = example("fig1b", "example3.cert.json");
  const auto r = check_certificate(e.program, e.invariant, e.certificate);
  EXPECT_TRUE(r.accepted);
  EXPECT_FALSE(r.shift_sufficient);
  EXPECT_TRUE(r.violations().empty());
  // Three components for t0, two for t1 and t3, one for t2.
  const auto prank = std::count_if(r.conditions.begin(), r.conditions.end(),
                                   [](const ConditionResult& c) { return c.condition == "P-RANK"; });
  EXPECT_EQ(prank, 3 + 2 + 1 + 2);
}

TEST(Checker, AcceptsExample4WithZeroCoefficients) {
  const auto e = example("fig1a", "example4.cert.json");
  const auto r = check_certificate(e.program, e.invariant, e.certificate);
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.mode, CertificateMode::GeneralSound);
  std::vector<int> unbound;
  for (const auto& c : r.conditions)
    if (c.condition == "UNBOUND") {
      EXPECT_EQ(c.transition, "t2");
      EXPECT_TRUE(c.holds);
      unbound.push_back(c.component);
    }
  EXPECT_EQ(unbound, (std::vector<int>{1, 2}));
  EXPECT_FALSE(r.assumptions.empty());
}

TEST(Checker, Example4FailsAsBoundedCertificate) {
  auto e = example("fig1a", "example4.cert.json");
  e.certificate.mode = CertificateMode::BSPComplete;
  EXPECT_FALSE(check_certificate(e.program, e.invariant, e.certificate).accepted);
}

TEST(Checker, Example3NeedsTheInvariant) {
  auto e = example("fig1b", "example3.cert.json");
  const auto r = check_certificate(e.program, Invariant::trivial(e.program), e.certificate);
  EXPECT_FALSE(r.accepted);
  EXPECT_TRUE(has_violation(r, "t3", "P-NNEG", 2));
}

TEST(Checker, CuratedMutations) {
  for (const auto& m : pterm::testing::curated_mutations()) {
    auto e = example(m.program, m.certificate);
    pterm::testing::apply(m, e.program, e.certificate);
    const auto r = check_certificate(e.program, e.invariant, e.certificate);
    EXPECT_EQ(r.accepted, m.accepted) << m.name;
    if (!m.accepted) EXPECT_TRUE(has_violation(r, m.transition, m.condition, m.violated_component)) << m.name;
  }
}

TEST(Checker, CounterexamplesReallyViolate) {
  for (const auto& m : pterm::testing::curated_mutations()) {
    auto e = example(m.program, m.certificate);
    pterm::testing::apply(m, e.program, e.certificate);
    const auto r = check_certificate(e.program, e.invariant, e.certificate);
    for (const auto& c : r.violations()) {
      if (!c.counterexample) continue;
      const auto& t = *std::find_if(e.program.transitions.begin(), e.program.transitions.end(),
                                    [&](const Transition& u) { return u.id == c.transition; });
      const auto x = point(e.program, *c.counterexample);
      ASSERT_TRUE(e.invariant[t.source].holds(x)) << m.name;
      ASSERT_TRUE(t.guard().holds(x)) << m.name;
      const auto found = pterm::testing::pointwise_violations(e.program, e.certificate, t, x);
      EXPECT_TRUE(std::any_of(found.begin(), found.end(),
                              [&](const auto& v) { return v.condition == c.condition && v.component == c.component; }))
          << m.name << " " << c.transition << " " << c.condition;
    }
  }
}

// Accepted certificates hold at every enabled grid point; every grid
// violation of a mutated certificate is also reported symbolically.
TEST(Checker, AgreesWithPointwiseEvaluation) {
  std::vector<std::pair<Case, std::string>> cases;
  cases.push_back({example("fig1b", "example3.cert.json"), "example3"});
  cases.push_back({example("fig1a", "example4.cert.json"), "example4"});
  for (const auto& m : pterm::testing::curated_mutations()) {
    auto e = example(m.program, m.certificate);
    pterm::testing::apply(m, e.program, e.certificate);
    cases.push_back({std::move(e), m.name});
  }
  for (const auto& [e, name] : cases) {
    const auto r = check_certificate(e.program, e.invariant, e.certificate);
    for (const auto& t : e.program.transitions) {
      for (const auto& x : pterm::testing::enabled_grid(e.program, e.invariant, t, 9)) {
        for (const auto& v : pterm::testing::pointwise_violations(e.program, e.certificate, t, x)) {
          ASSERT_FALSE(r.accepted) << name;
          EXPECT_TRUE(has_violation(r, v.transition, v.condition, v.component))
              << name << " " << v.transition << " " << v.condition << " " << v.component;
        }
      }
    }
  }
}

TEST(Checker, PerturbingAnyCoefficientIsJudgedConsistently) {
  const auto base = example("fig1b", "example3.cert.json");
  for (LocId l = 0; l < base.program.num_locations(); ++l) {
    for (int j = 1; j <= base.certificate.lem.dimension; ++j) {
      for (int term = -1; term < base.program.num_vars(); ++term) {
        for (int delta : {-1, 1}) {
          Case e = base;
          LinExpr& expr = e.certificate.lem.components[static_cast<std::size_t>(l)][static_cast<std::size_t>(j - 1)];
          if (term < 0)
            expr.set_constant(expr.constant() + Rational(delta));
          else
            expr.set_coeff(term, expr.coeff(term) + Rational(delta));
          const auto r = check_certificate(e.program, e.invariant, e.certificate);
          bool grid_violation = false;
          for (const auto& t : e.program.transitions)
            for (const auto& x : pterm::testing::enabled_grid(e.program, e.invariant, t, 9))
              grid_violation = grid_violation || !pterm::testing::pointwise_violations(e.program, e.certificate, t, x).empty();
          if (grid_violation) EXPECT_FALSE(r.accepted);
        }
      }
    }
  }
}

TEST(Checker, IndependentOfOrdering) {
  const auto e = example("fig1b", "example3.cert.json");
  auto m = e;
  pterm::testing::apply(pterm::testing::curated_mutations()[0], m.program, m.certificate);
  const auto before = report_to_json(check_certificate(m.program, m.invariant, m.certificate));
  auto shuffled = m;
  std::reverse(shuffled.program.transitions.begin(), shuffled.program.transitions.end());
  for (auto& t : shuffled.program.transitions)
    if (!t.is_pb()) {
      auto& g = std::get<GuardedStep>(t.kind).guard;
      auto ds = g.disjuncts();
      std::reverse(ds.begin(), ds.end());
      g = Predicate(ds);
    }
  EXPECT_EQ(report_to_json(check_certificate(shuffled.program, shuffled.invariant, shuffled.certificate)), before);
}

TEST(Checker, StructuralMismatch) {
  auto e = example("fig1b", "example3.cert.json");
  auto bad = e.certificate;
  bad.lem.components.pop_back();
  EXPECT_THROW(check_certificate(e.program, e.invariant, bad), StructuralMismatch);
  bad = e.certificate;
  bad.levels.erase("t1");
  EXPECT_THROW(check_certificate(e.program, e.invariant, bad), StructuralMismatch);
  bad = e.certificate;
  bad.levels["t1"] = 4;
  EXPECT_THROW(check_certificate(e.program, e.invariant, bad), StructuralMismatch);
  bad = e.certificate;
  bad.lem.components[0][0] = LinExpr::variable(5, Rational(1));
  EXPECT_THROW(check_certificate(e.program, e.invariant, bad), StructuralMismatch);
}

TEST(Checker, LevelZeroIsReservedForTerminalLoops) {
  auto e = example("fig1b", "example3.cert.json");
  e.certificate.levels["t2"] = 0;
  auto r = check_certificate(e.program, e.invariant, e.certificate);
  EXPECT_TRUE(has_violation(r, "t2", "LEVEL", 0));
  e = example("fig1b", "example3.cert.json");
  e.certificate.levels["t4"] = 1;
  r = check_certificate(e.program, e.invariant, e.certificate);
  EXPECT_TRUE(has_violation(r, "t4", "LEVEL", 0));
}

TEST(Checker, VerdictDocument) {
  auto e = example("fig1b", "example3.cert.json");
  pterm::testing::apply(pterm::testing::curated_mutations()[0], e.program, e.certificate);
  Options o;
  o.include_passed = false;
  const auto json = report_to_json(check_certificate(e.program, e.invariant, e.certificate, o));
  EXPECT_NE(json.find("\"verdict\": \"rejected\""), std::string::npos);
  EXPECT_NE(json.find("\"condition\": \"P-RANK\""), std::string::npos);
  EXPECT_NE(json.find("\"counterexample\""), std::string::npos);
  EXPECT_EQ(json.find("\"status\": \"ok\""), std::string::npos);
}

TEST(StateLevel, Fig1b) {
  const auto e = example("fig1b", "example3.cert.json");
  const auto& p = e.program;
  EXPECT_EQ(state_level(p, e.certificate.levels, 0, {Rational(1), Rational(1)}), 3);
  EXPECT_EQ(state_level(p, e.certificate.levels, 0, {Rational(-1), Rational(0)}), 1);
  EXPECT_EQ(state_level(p, e.certificate.levels, p.terminal, {Rational(0), Rational(0)}), 0);
}

TEST(StateLevel, StuckStateHasNoLevel) {
  auto e = example("fig1b", "example3.cert.json");
  auto& p = e.program;
  // Drop the exit: states with x < 0 at l0 have no enabled transition.
  std::erase_if(p.transitions, [](const Transition& t) { return t.id == "t2"; });
  EXPECT_EQ(state_level(p, e.certificate.levels, 0, {Rational(-1), Rational(0)}), std::nullopt);
}
