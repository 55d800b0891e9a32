#include "pterm/audit.hpp"

#include <cmath>

namespace pterm::sim {

namespace {

constexpr double kSlack = 1e-9;

bool holds_with_slack(const Polyhedron& p, const std::vector<double>& x) {
  for (const auto& c : p.constraints) {
    const double v = eval_double(c.lhs, x);
    const double tol = kSlack * (1 + std::abs(v));
    if (c.rel == Rel::Eq ? std::abs(v) > tol : v > tol) return false;
  }
  return true;
}

}  // namespace

std::vector<InvariantViolation> audit_invariant(const PCFG& p, const Invariant& inv,
                                                const std::vector<TrajectoryReport>& trajectories) {
  (void)p;
  std::vector<InvariantViolation> out;
  for (std::size_t r = 0; r < trajectories.size(); ++r) {
    const auto& visited = trajectories[r].visited;
    for (std::size_t k = 0; k < visited.size(); ++k)
      if (!holds_with_slack(inv[visited[k].state.loc], visited[k].state.x)) out.push_back({r, k, visited[k].state});
  }
  return out;
}

DynamicsReport audit_certificate_dynamics(const Simulator& sim, const Certificate& c,
                                          const std::vector<TrajectoryReport>& trajectories,
                                          const DynamicsOptions& options) {
  const PCFG& p = sim.program();
  DynamicsReport report;
  auto value = [&](const State& s, int j) { return eval_double(c.lem.at(s.loc, j - 1), s.x); };

  for (std::size_t r = 0; r < trajectories.size(); ++r) {
    const auto& visited = trajectories[r].visited;
    std::size_t moves = visited.empty() ? 0 : visited.size() - 1;
    const std::size_t stride = std::max<std::size_t>(1, moves / std::max<std::size_t>(1, options.steps_per_trajectory));
    for (std::size_t k = 0; k < moves; k += stride) {
      const auto& v = visited[k];
      const auto& t = p.transitions[*v.transition];
      const int lev = c.levels.at(t.id);
      if (lev == 0) continue;
      ++report.audited_steps;
      for (int j = 1; j <= lev; ++j) {
        const double e = value(v.state, j);
        if (e < -kSlack * (1 + std::abs(e))) report.flags.push_back({r, k, t.id, "P-NNEG", j, e, 0});
      }

      Streams streams = Streams::for_run(options.seed, (static_cast<std::uint64_t>(r) << 32) ^ k);
      double sum = 0, sq = 0;
      for (std::size_t i = 0; i < options.resamples; ++i) {
        State next = v.state;
        sim.apply(*v.transition, next, streams);
        const double x = value(next, lev);
        sum += x;
        sq += x * x;
      }
      const double n = static_cast<double>(options.resamples);
      const double mean = sum / n;
      const double var = std::max(0.0, sq / n - mean * mean) * n / std::max(1.0, n - 1);
      const double se = std::sqrt(var / n);
      const double bound = value(v.state, lev) - 1;
      if (mean - bound > options.standard_errors * se + kSlack * (1 + std::abs(bound)))
        report.flags.push_back({r, k, t.id, "P-RANK", lev, mean, bound});
    }
  }
  return report;
}

}  // namespace pterm::sim
