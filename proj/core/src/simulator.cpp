#include "pterm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace pterm::sim {

const char* scheduler_name(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::UniformRandom: return "uniform";
    case SchedulerKind::FixedPriority: return "priority";
    case SchedulerKind::Adversarial: return "adversarial";
  }
  return "?";
}

std::optional<SchedulerKind> parse_scheduler(std::string_view name) {
  for (auto k : {SchedulerKind::UniformRandom, SchedulerKind::FixedPriority, SchedulerKind::Adversarial})
    if (name == scheduler_name(k)) return k;
  return std::nullopt;
}

namespace {

struct Affine {
  std::vector<std::pair<std::size_t, double>> terms;
  double constant = 0;

  explicit Affine(const LinExpr& e) : constant(e.constant().to_double()) {
    for (const auto& [v, c] : e.coeffs()) terms.emplace_back(static_cast<std::size_t>(v), c.to_double());
  }
  double operator()(const std::vector<double>& x) const {
    double r = constant;
    for (const auto& [v, c] : terms) r += c * x[v];
    return r;
  }
};

struct Row {
  Affine lhs;
  Rel rel;
  bool holds(const std::vector<double>& x) const {
    const double v = lhs(x);
    switch (rel) {
      case Rel::Le: return v <= 0;
      case Rel::Lt: return v < 0;
      case Rel::Eq: return v == 0;
    }
    return false;
  }
};

struct Guard {
  std::vector<std::vector<Row>> disjuncts;
  bool holds(const std::vector<double>& x) const {
    for (const auto& d : disjuncts)
      if (std::all_of(d.begin(), d.end(), [&](const Row& r) { return r.holds(x); })) return true;
    return false;
  }
};

Guard compile(const Predicate& p) {
  Guard g;
  for (const auto& d : p.disjuncts()) {
    std::vector<Row> rows;
    for (const auto& c : d.constraints) rows.push_back({Affine(c.lhs), c.rel});
    g.disjuncts.push_back(std::move(rows));
  }
  return g;
}

struct CompiledTransition {
  LocId source = 0;
  bool pb = false;
  LocId dest1 = 0, dest2 = 0;
  double p1 = 0;
  Guard guard;
  enum { None, Assign, Nondet } update = None;
  std::size_t target = 0;
  std::optional<Affine> base;
  double sample_coeff = 0;
  const DistributionSpec* dist = nullptr;
  double sample_mean = 0;
  double lo = 0, hi = 0;
};

}  // namespace

struct Simulator::Compiled {
  const PCFG& p;
  Scheduler scheduler;
  const SamplerRegistry& registry;
  std::vector<CompiledTransition> transitions;
  std::vector<std::vector<std::size_t>> by_priority;  // per location
  std::vector<std::vector<Affine>> eta;                // [location][component]

  Compiled(const PCFG& prog, Scheduler s, const SamplerRegistry& r) : p(prog), scheduler(std::move(s)), registry(r) {}
};

Simulator::Simulator(const PCFG& p, Scheduler scheduler, const Certificate* certificate, const SamplerRegistry& registry)
    : c_(std::make_unique<Compiled>(p, std::move(scheduler), registry)) {
  for (const auto& t : p.transitions) {
    CompiledTransition ct;
    ct.source = t.source;
    if (t.is_pb()) {
      ct.pb = true;
      ct.dest1 = t.pb().dest1;
      ct.dest2 = t.pb().dest2;
      ct.p1 = t.pb().p1.to_double();
    } else {
      const auto& s = t.step();
      ct.dest1 = s.dest;
      ct.guard = compile(s.guard);
      if (const auto* u = std::get_if<ExprUpdate>(&s.update)) {
        ct.update = CompiledTransition::Assign;
        ct.target = static_cast<std::size_t>(u->target);
        ct.base.emplace(u->base);
        if (u->sample) {
          ct.sample_coeff = u->sample->coefficient.to_double();
          ct.dist = &u->sample->dist;
          ct.sample_mean = u->sample->dist.mean.to_double();
          if (const auto* cp = std::get_if<CustomParams>(&ct.dist->params); cp && !registry.find(cp->sampler_id))
            throw std::invalid_argument("no sampler registered for custom distribution '" + cp->sampler_id + "'");
        }
      } else if (const auto* n = std::get_if<NondetUpdate>(&s.update)) {
        ct.update = CompiledTransition::Nondet;
        ct.target = static_cast<std::size_t>(n->target);
        ct.lo = n->lo.to_double();
        ct.hi = n->hi.to_double();
      }
    }
    c_->transitions.push_back(std::move(ct));
  }

  c_->by_priority.resize(static_cast<std::size_t>(p.num_locations()));
  std::vector<std::size_t> order;
  for (const auto& id : c_->scheduler.priority) {
    auto idx = p.transition_index(id);
    if (!idx) throw std::invalid_argument("unknown transition in priority list: " + id);
    if (std::find(order.begin(), order.end(), *idx) == order.end()) order.push_back(*idx);
  }
  for (std::size_t i = 0; i < p.transitions.size(); ++i)
    if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
  for (std::size_t i : order) c_->by_priority[static_cast<std::size_t>(p.transitions[i].source)].push_back(i);

  if (certificate) {
    for (const auto& comps : certificate->lem.components) {
      std::vector<Affine> row;
      for (const auto& e : comps) row.emplace_back(e);
      c_->eta.push_back(std::move(row));
    }
  }
  if (c_->scheduler.kind == SchedulerKind::Adversarial && c_->eta.empty())
    throw std::invalid_argument("the adversarial scheduler needs a certificate");
}

Simulator::~Simulator() = default;

const PCFG& Simulator::program() const { return c_->p; }

std::vector<std::size_t> Simulator::enabled(const State& s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c_->transitions.size(); ++i) {
    const auto& t = c_->transitions[i];
    if (t.source == s.loc && (t.pb || t.guard.holds(s.x))) out.push_back(i);
  }
  return out;
}

std::vector<double> Simulator::eta(const State& s) const {
  std::vector<double> out;
  if (c_->eta.empty()) return out;
  for (const auto& e : c_->eta[static_cast<std::size_t>(s.loc)]) out.push_back(e(s.x));
  return out;
}

std::optional<std::size_t> Simulator::choose(const State& s, Streams& streams) const {
  const auto& sched = c_->scheduler;
  if (sched.kind == SchedulerKind::FixedPriority) {
    for (std::size_t i : c_->by_priority[static_cast<std::size_t>(s.loc)]) {
      const auto& t = c_->transitions[i];
      if (t.pb || t.guard.holds(s.x)) return i;
    }
    return std::nullopt;
  }
  const auto en = enabled(s);
  if (en.empty()) return std::nullopt;
  if (sched.kind == SchedulerKind::UniformRandom) return en[streams.scheduler.below(en.size())];

  // Adversarial: expected certificate value after each choice.
  auto expected = [&](std::size_t i) {
    const auto& t = c_->transitions[i];
    auto at = [&](LocId l, const std::vector<double>& x) {
      std::vector<double> v;
      for (const auto& e : c_->eta[static_cast<std::size_t>(l)]) v.push_back(e(x));
      return v;
    };
    if (t.pb) {
      auto a = at(t.dest1, s.x), b = at(t.dest2, s.x);
      for (std::size_t j = 0; j < a.size(); ++j) a[j] = t.p1 * a[j] + (1 - t.p1) * b[j];
      return a;
    }
    auto x = s.x;
    if (t.update == CompiledTransition::Assign) x[t.target] = (*t.base)(s.x) + t.sample_coeff * t.sample_mean;
    if (t.update == CompiledTransition::Nondet) {
      x[t.target] = t.lo;
      auto lo = at(t.dest1, x);
      x[t.target] = t.hi;
      auto hi = at(t.dest1, x);
      return std::max(lo, hi);
    }
    return at(t.dest1, x);
  };
  std::size_t best = en.front();
  auto best_value = expected(best);
  for (std::size_t k = 1; k < en.size(); ++k) {
    auto v = expected(en[k]);
    if (v > best_value) {
      best = en[k];
      best_value = std::move(v);
    }
  }
  return best;
}

void Simulator::apply(std::size_t i, State& s, Streams& streams) const {
  const auto& t = c_->transitions[i];
  if (t.pb) {
    s.loc = streams.samples.uniform() < t.p1 ? t.dest1 : t.dest2;
    return;
  }
  switch (t.update) {
    case CompiledTransition::None: break;
    case CompiledTransition::Assign: {
      double v = (*t.base)(s.x);
      if (t.dist) v += t.sample_coeff * sample(*t.dist, streams.samples, c_->registry);
      s.x[t.target] = v;
      break;
    }
    case CompiledTransition::Nondet: {
      double v = 0;
      switch (c_->scheduler.nondet) {
        case NondetChoice::Uniform: v = streams.scheduler.uniform(t.lo, t.hi); break;
        case NondetChoice::Lower: v = t.lo; break;
        case NondetChoice::Upper: v = t.hi; break;
      }
      if (c_->scheduler.kind == SchedulerKind::Adversarial) {
        State a = s, b = s;
        a.x[t.target] = t.lo;
        b.x[t.target] = t.hi;
        a.loc = b.loc = t.dest1;
        v = eta(a) >= eta(b) ? t.lo : t.hi;
      }
      s.x[t.target] = v;
      break;
    }
  }
  s.loc = t.dest1;
}

std::optional<std::size_t> Simulator::step(State& s, Streams& streams) const {
  auto t = choose(s, streams);
  if (t) apply(*t, s, streams);
  return t;
}

TrajectoryReport Simulator::run(State s, Streams& streams, const RunOptions& options) const {
  if (s.x.size() != static_cast<std::size_t>(c_->p.num_vars()))
    throw std::invalid_argument("initial state has the wrong number of variables");
  TrajectoryReport r;
  const LocId terminal = c_->p.terminal;
  while (true) {
    if (options.record_eta) r.eta_trace.push_back(eta(s));
    if (s.loc == terminal) {
      r.terminated = true;
      break;
    }
    if (r.steps >= options.step_cap) break;
    State before = options.record_states ? s : State{};
    auto t = step(s, streams);
    if (!t) {
      r.stuck = true;
      break;
    }
    if (options.record_states) r.visited.push_back({std::move(before), t});
    ++r.steps;
  }
  if (options.record_states) r.visited.push_back({s, std::nullopt});
  r.final_state = std::move(s);
  return r;
}

TrajectoryReport Simulator::run(State init, std::uint64_t seed, std::uint64_t index, const RunOptions& options) const {
  Streams streams = Streams::for_run(seed, index);
  return run(std::move(init), streams, options);
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0) return {0, 1};
  const double nn = static_cast<double>(n), p = static_cast<double>(successes) / nn, z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

template <class Fn>
void parallel_for(std::uint64_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(n, 1)));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::uint64_t i = w; i < n; i += threads) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

Estimate estimate_termination(const Simulator& sim, const State& init, std::uint64_t runs, std::uint64_t step_cap,
                              std::uint64_t seed, unsigned threads) {
  Estimate e;
  e.runs = runs;
  e.per_run.resize(runs);
  RunOptions o;
  o.step_cap = step_cap;
  parallel_for(runs, threads, [&](std::uint64_t i) {
    const auto r = sim.run(init, seed, i, o);
    e.per_run[i] = {i, r.terminated, r.stuck, r.steps};
  });
  double steps = 0;
  for (const auto& r : e.per_run) {
    if (r.terminated) {
      ++e.terminated;
      steps += static_cast<double>(r.steps);
    } else if (r.stuck) {
      ++e.stuck;
    } else {
      ++e.capped;
    }
  }
  e.fraction = runs ? static_cast<double>(e.terminated) / static_cast<double>(runs) : 0;
  std::tie(e.ci_lo, e.ci_hi) = wilson_interval(e.terminated, runs);
  e.mean_steps = e.terminated ? steps / static_cast<double>(e.terminated) : 0;
  return e;
}

std::vector<TrajectoryReport> sample_trajectories(const Simulator& sim, const State& init, std::uint64_t runs,
                                                  std::uint64_t step_cap, std::uint64_t seed, unsigned threads) {
  std::vector<TrajectoryReport> out(runs);
  RunOptions o;
  o.step_cap = step_cap;
  o.record_states = true;
  parallel_for(runs, threads, [&](std::uint64_t i) { out[i] = sim.run(init, seed, i, o); });
  return out;
}

unsigned default_threads() {
  if (const char* env = std::getenv("PTERM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) return static_cast<unsigned>(v);
  }
  return 1;
}

}  // namespace pterm::sim
