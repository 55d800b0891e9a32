#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "pterm/audit.hpp"
#include "pterm/checker.hpp"
#include "pterm/counterexample.hpp"
#include "pterm/dot.hpp"
#include "pterm/errors.hpp"
#include "pterm/json_io.hpp"
#include "pterm/lowering.hpp"
#include "pterm/simulator.hpp"
#include "pterm/synthesis.hpp"

namespace pterm::cli {

namespace {

using Json = nlohmann::ordered_json;

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int fail(bool json, int code, const std::string& kind, const std::string& message) {
  if (json) {
    emit(Json{{"status", "error"}, {"error", kind}, {"message", message}});
  } else {
    std::cerr << "pterm: " << message << "\n";
  }
  return code;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

Json levels_json(const LevelMap& levels, const PCFG& p) {
  Json j = Json::object();
  for (const auto& t : p.transitions) j[t.id] = levels.at(t.id);
  return j;
}

Json record_json(const synthesis::IterationRecord& r) {
  Json j{{"iteration", r.iteration},
         {"unranked", r.unranked_before},
         {"lp_unknowns", r.lp_unknowns},
         {"lp_rows", r.lp_rows},
         {"lp_status", r.lp_status},
         {"objective", r.objective.to_string()},
         {"ranked", r.ranked}};
  if (r.released) j["released"] = *r.released;
  return j;
}

}  // namespace

int run_parse(const ParseArgs& a) {
  std::string text;
  try {
    text = io::read_file(a.source);
  } catch (const Error& e) {
    return fail(a.json, kBadInput, "io", e.what());
  }
  PCFG p;
  try {
    p = frontend::compile_program(text);
  } catch (const frontend::ParseError& e) {
    if (a.json) {
      emit(Json{{"status", "error"}, {"error", "syntax"}, {"line", e.line()}, {"column", e.column()}, {"message", e.what()}});
    } else {
      std::cerr << a.source << ":" << e.what() << "\n";
    }
    return kBadInput;
  } catch (const Error& e) {
    return fail(a.json, kBadInput, "program", e.what());
  }
  const auto diagnostics = validate_pcfg(p);
  if (!diagnostics.empty()) {
    std::string msg;
    for (const auto& d : diagnostics) msg += std::string(kind_name(d.kind)) + ": " + d.message + "; ";
    return fail(a.json, kBadInput, "program", msg);
  }
  std::optional<std::string> dot_path;
  try {
    io::dump_pcfg(p, a.output);
    if (a.dot) {
      dot_path = a.dot->empty() ? std::filesystem::path(a.output).replace_extension(".dot").string() : *a.dot;
      io::write_file(*dot_path, io::to_dot(p));
    }
  } catch (const Error& e) {
    return fail(a.json, kBadInput, "io", e.what());
  }
  if (a.json) {
    Json j{{"status", "ok"},
           {"output", a.output},
           {"variables", p.variables},
           {"locations", p.num_locations()},
           {"transitions", p.transitions.size()}};
    if (dot_path) j["dot"] = *dot_path;
    emit(j);
  } else {
    std::cout << a.output << ": " << p.num_locations() << " locations, " << p.transitions.size() << " transitions\n";
  }
  return kOk;
}

int run_synthesize(const SynthesizeArgs& a) {
  PCFG p;
  Invariant inv;
  try {
    p = io::load_program(a.program);
    inv = a.invariant ? io::load_invariant(*a.invariant, p) : Invariant::trivial(p);
  } catch (const Error& e) {
    return fail(a.json, kBadInput, "input", e.what());
  }

  std::string mode = a.mode;
  const bool bsp = check_bsp(p).holds;
  if (mode == "auto") mode = bsp ? "bsp" : "general";

  synthesis::Options options;
  int lp_count = 0;
  if (a.verbose)
    options.on_iteration = [](const synthesis::IterationRecord& r) { std::cerr << record_json(r).dump() << "\n"; };
  if (a.dump_lp)
    options.on_lp = [&](const lp::LPProblem& lp, const std::string& label) {
      io::write_file(*a.dump_lp + std::to_string(++lp_count) + ".lp", "\\ " + label + "\n" + lp::to_lp_format(lp));
    };

  synthesis::Result r;
  try {
    r = mode == "bsp" ? synthesis::synthesize_bsp(p, inv, options) : synthesis::synthesize_general(p, inv, options);
  } catch (const NotBSP& e) {
    return fail(a.json, kPrecondition, "not-bsp", e.what());
  } catch (const NotLinPPStar& e) {
    return fail(a.json, kPrecondition, "not-linpp-star", e.what());
  } catch (const EncodingBlowup& e) {
    return fail(a.json, kPrecondition, "encoding-blowup", e.what());
  } catch (const Error& e) {
    return fail(a.json, kPrecondition, "synthesis", e.what());
  }
  for (const auto& w : r.warnings) std::cerr << "pterm: warning: " << w << "\n";

  Json summary{{"status", synthesis::status_name(r.status)}, {"mode", mode}};
  Json history = Json::array();
  for (const auto& rec : r.history) history.push_back(record_json(rec));

  try {
    if (r.status == synthesis::Status::Found) {
      io::dump_certificate(*r.certificate, p, a.output);
      summary["output"] = a.output;
      summary["dimension"] = r.certificate->lem.dimension;
      summary["levels"] = levels_json(r.certificate->levels, p);
      summary["shift"] = r.certificate->shift.to_string();
    } else {
      const std::string message = r.status == synthesis::Status::NoLinGLexRSM
                                      ? "no LinGLexRSM map exists for this invariant"
                                      : "no certificate found; termination unknown";
      Json refusal{{"status", synthesis::status_name(r.status)}, {"mode", mode}, {"message", message}, {"unranked", r.unranked}};
      io::write_file(a.output, refusal.dump(2) + "\n");
      summary["message"] = message;
      summary["unranked"] = r.unranked;
    }
  } catch (const Error& e) {
    return fail(a.json, kBadInput, "io", e.what());
  }
  summary["iterations"] = std::move(history);
  summary["warnings"] = r.warnings;

  if (a.json) {
    emit(summary);
  } else if (r.status == synthesis::Status::Found) {
    std::cout << "certificate of dimension " << r.certificate->lem.dimension << " (" << mode << " mode) written to "
              << a.output << "\n";
  } else {
    std::cout << summary["message"].get<std::string>() << " (" << mode << " mode); unranked:";
    for (const auto& id : r.unranked) std::cout << " " << id;
    std::cout << "\n";
  }
  return r.status == synthesis::Status::Found ? kOk : kNegative;
}

int run_check(const CheckArgs& a) {
  PCFG p;
  Invariant inv;
  Certificate c;
  try {
    p = io::load_program(a.program);
    inv = io::load_invariant(a.invariant, p);
    c = io::load_certificate(a.certificate, p);
  } catch (const Error& e) {
    return fail(a.json, kBadInput, "input", e.what());
  }
  checker::Report r;
  try {
    checker::Options o;
    o.include_passed = !a.violations_only;
    r = checker::check_certificate(p, inv, c, o);
  } catch (const StructuralMismatch& e) {
    return fail(a.json, kPrecondition, "structural-mismatch", e.what());
  } catch (const Error& e) {
    return fail(a.json, kPrecondition, "check", e.what());
  }
  if (a.json) {
    std::cout << checker::report_to_json(r);
  } else {
    std::cout << (r.accepted ? "accepted" : "rejected") << " (" << mode_name(r.mode) << ")\n";
    for (const auto& v : r.violations()) {
      std::cout << "  " << (v.transition.empty() ? "-" : v.transition) << " " << v.condition;
      if (v.component) std::cout << " component " << v.component;
      if (v.counterexample) {
        std::cout << " at";
        for (const auto& [name, val] : *v.counterexample) std::cout << " " << name << "=" << val.to_string();
      }
      if (!v.detail.empty()) std::cout << ": " << v.detail;
      std::cout << "\n";
    }
    for (const auto& s : r.assumptions) std::cout << "  note: " << s << "\n";
  }
  return r.accepted ? kOk : kNegative;
}

namespace {

int run_counterexample(const SimulateArgs& a, unsigned threads) {
  const auto e = sim::counterexample_process(a.seed, a.runs, 60, threads);
  const double oracle = sim::kCounterexampleOracle;
  const double se = std::sqrt(oracle * (1 - oracle) / static_cast<double>(std::max<std::uint64_t>(a.runs, 1)));
  const double z = se > 0 ? (e.fraction - oracle) / se : 0;
  if (a.json) {
    emit(Json{{"runs", e.runs},
              {"stopped", e.stopped},
              {"fraction", e.fraction},
              {"standard_error", e.standard_error},
              {"oracle", oracle},
              {"z", z},
              {"within_4se", std::abs(z) <= 4},
              {"truncation_step", e.truncation_step},
              {"residual_bound", e.residual_bound},
              {"seed", a.seed}});
  } else {
    std::cout << "empirical P[T < inf] = " << e.fraction << " over " << e.runs << " runs (se " << e.standard_error
              << ")\nseries value p* = " << oracle << ", z = " << z << "\ntruncated at step " << e.truncation_step
              << ", unobserved mass < " << e.residual_bound << "\n";
  }
  return kOk;
}

}  // namespace

int run_simulate(const SimulateArgs& a) {
  const unsigned threads = a.threads ? *a.threads : sim::default_threads();
  if (a.counterexample) return run_counterexample(a, threads);
  if (!a.program) return fail(a.json, kBadInput, "usage", "simulate needs a program (or --counterexample-s3)");

  PCFG p;
  std::optional<Certificate> cert;
  std::optional<Invariant> audit_inv;
  sim::State init;
  try {
    p = io::load_program(*a.program);
    if (a.certificate) cert = io::load_certificate(*a.certificate, p);
    if (a.audit_invariant) audit_inv = io::load_invariant(*a.audit_invariant, p);
    init.loc = p.init;
    if (a.location) {
      auto l = p.location(*a.location);
      if (!l) throw Error("unknown location " + *a.location);
      init.loc = *l;
    }
    init.x.assign(static_cast<std::size_t>(p.num_vars()), 0.0);
    for (const auto& item : split(a.init, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error("bad --init entry '" + item + "', expected name=value");
      const auto v = p.variable(item.substr(0, eq));
      if (!v) throw Error("unknown variable in --init: " + item.substr(0, eq));
      init.x[static_cast<std::size_t>(*v)] = Rational::parse(item.substr(eq + 1)).to_double();
    }
  } catch (const std::exception& e) {
    return fail(a.json, kBadInput, "input", e.what());
  }
  if (a.audit_certificate && !cert) return fail(a.json, kBadInput, "usage", "--audit-certificate needs --cert");

  sim::Scheduler sched;
  sched.kind = *sim::parse_scheduler(a.scheduler);
  sched.priority = split(a.priority, ',');
  sched.nondet = a.nondet == "lower" ? sim::NondetChoice::Lower
                 : a.nondet == "upper" ? sim::NondetChoice::Upper
                                       : sim::NondetChoice::Uniform;
  std::unique_ptr<sim::Simulator> simulator;
  try {
    simulator = std::make_unique<sim::Simulator>(p, sched, cert ? &*cert : nullptr);
  } catch (const std::invalid_argument& e) {
    return fail(a.json, kBadInput, "input", e.what());
  }

  const auto est = sim::estimate_termination(*simulator, init, a.runs, a.cap, a.seed, threads);
  Json report{{"runs", est.runs},
              {"terminated", est.terminated},
              {"stuck", est.stuck},
              {"capped", est.capped},
              {"fraction", est.fraction},
              {"ci95", {est.ci_lo, est.ci_hi}},
              {"mean_steps", est.mean_steps},
              {"seed", a.seed},
              {"scheduler", a.scheduler}};

  if (a.csv) {
    std::ostringstream out;
    out << "run,terminated,steps\n";
    for (const auto& r : est.per_run) out << r.run << "," << (r.terminated ? 1 : 0) << "," << r.steps << "\n";
    try {
      io::write_file(*a.csv, out.str());
    } catch (const Error& e) {
      return fail(a.json, kBadInput, "io", e.what());
    }
  }

  if (audit_inv || a.audit_certificate) {
    const std::uint64_t audit_runs = std::min<std::uint64_t>(a.runs, 1000);
    const auto trajectories = sim::sample_trajectories(*simulator, init, audit_runs, std::min<std::uint64_t>(a.cap, 10000),
                                                       a.seed, threads);
    if (audit_inv) {
      const auto v = sim::audit_invariant(p, *audit_inv, trajectories);
      Json list = Json::array();
      for (std::size_t i = 0; i < std::min<std::size_t>(v.size(), 20); ++i)
        list.push_back(Json{{"run", v[i].run},
                            {"step", v[i].step},
                            {"location", p.locations[static_cast<std::size_t>(v[i].state.loc)]},
                            {"state", v[i].state.x}});
      report["invariant_audit"] = Json{{"trajectories", audit_runs}, {"violations", v.size()}, {"first", list}};
    }
    if (a.audit_certificate) {
      const auto d = sim::audit_certificate_dynamics(*simulator, *cert, trajectories);
      Json flags = Json::array();
      for (std::size_t i = 0; i < std::min<std::size_t>(d.flags.size(), 20); ++i) {
        const auto& f = d.flags[i];
        flags.push_back(Json{{"run", f.run},
                             {"step", f.step},
                             {"transition", f.transition},
                             {"condition", f.condition},
                             {"component", f.component},
                             {"value", f.value},
                             {"bound", f.bound}});
      }
      report["certificate_audit"] = Json{{"audited_steps", d.audited_steps}, {"flags", d.flags.size()}, {"first", flags}};
    }
  }

  if (a.json) {
    emit(report);
  } else {
    std::cout << "terminated " << est.terminated << "/" << est.runs << " (" << est.fraction << "), 95% CI [" << est.ci_lo
              << ", " << est.ci_hi << "]\n"
              << "stuck " << est.stuck << ", capped " << est.capped << ", mean steps " << est.mean_steps << "\n";
    if (report.contains("invariant_audit"))
      std::cout << "invariant violations: " << report["invariant_audit"]["violations"] << "\n";
    if (report.contains("certificate_audit"))
      std::cout << "certificate flags: " << report["certificate_audit"]["flags"] << " over "
                << report["certificate_audit"]["audited_steps"] << " audited steps\n";
  }
  return kOk;
}

}  // namespace pterm::cli
