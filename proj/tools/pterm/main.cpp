#include <CLI11.hpp>

#include "commands.hpp"

using namespace pterm::cli;

int main(int argc, char** argv) {
  CLI::App app{"Almost-sure termination proofs for linear probabilistic programs"};
  app.set_version_flag("--version", "pterm 0.1.0");
  app.require_subcommand(1);

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "Compile program source to a pCFG file");
  parse->add_option("source", pa.source, "Program source")->required();
  parse->add_option("-o,--output", pa.output, "pCFG JSON output")->required();
  parse->add_option("--emit-dot", pa.dot, "Also write a Graphviz file (default: output with .dot)")
      ->expected(0, 1)
      ->default_str("");
  parse->add_flag("--json", pa.json, "Machine-readable status on stdout");

  SynthesizeArgs sa;
  auto* synth = app.add_subcommand("synthesize", "Search for a LinGLexRSM certificate");
  synth->add_option("program", sa.program, "pCFG JSON or program source")->required();
  synth->add_option("invariant", sa.invariant, "Invariant JSON (default: true everywhere)");
  synth->add_option("--mode", sa.mode, "auto, bsp or general")
      ->check(CLI::IsMember({"auto", "bsp", "general"}))
      ->capture_default_str();
  synth->add_option("-o,--output", sa.output, "Certificate (or refusal) JSON output")->required();
  synth->add_flag("-v,--verbose", sa.verbose, "Per-iteration JSON lines on stderr");
  synth->add_option("--dump-lp", sa.dump_lp, "Write every LP as <prefix><n>.lp");
  synth->add_flag("--json", sa.json, "Machine-readable summary on stdout");

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Verify a certificate");
  check->add_option("program", ca.program, "pCFG JSON or program source")->required();
  check->add_option("invariant", ca.invariant, "Invariant JSON")->required();
  check->add_option("certificate", ca.certificate, "Certificate JSON")->required();
  check->add_flag("--violations-only", ca.violations_only, "Omit passing conditions");
  check->add_flag("--json", ca.json, "Print the verdict document");

  SimulateArgs ma;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo termination estimate");
  sim->add_option("program", ma.program, "pCFG JSON or program source");
  sim->add_option("--init", ma.init, "Initial valuation, e.g. x=5,y=3 (others 0)");
  sim->add_option("--at", ma.location, "Initial location (default: the program's)");
  sim->add_option("--runs", ma.runs, "Number of runs")->capture_default_str();
  sim->add_option("--cap", ma.cap, "Step cap per run")->capture_default_str();
  sim->add_option("--seed", ma.seed, "Master seed")->capture_default_str();
  sim->add_option("--scheduler", ma.scheduler, "uniform, priority or adversarial")
      ->check(CLI::IsMember({"uniform", "priority", "adversarial"}))
      ->capture_default_str();
  sim->add_option("--priority", ma.priority, "Comma-separated transition ids, highest priority first");
  sim->add_option("--nondet", ma.nondet, "Nondet values: uniform, lower or upper")
      ->check(CLI::IsMember({"uniform", "lower", "upper"}))
      ->capture_default_str();
  sim->add_option("--cert", ma.certificate, "Certificate for eta traces, audits and the adversarial scheduler");
  sim->add_option("--threads", ma.threads, "Worker threads (default: PTERM_THREADS or 1; 0 = all cores)");
  sim->add_option("--csv", ma.csv, "Write run,terminated,steps per run");
  sim->add_option("--audit-invariant", ma.audit_invariant, "Report visited states outside this invariant");
  sim->add_flag("--audit-certificate", ma.audit_certificate, "Audit the certificate along sampled runs (needs --cert)");
  sim->add_flag("--counterexample-s3", ma.counterexample, "Simulate the built-in counterexample process instead");
  sim->add_flag("--json", ma.json, "Machine-readable report on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }

  if (parse->parsed()) return run_parse(pa);
  if (synth->parsed()) return run_synthesize(sa);
  if (check->parsed()) return run_check(ca);
  return run_simulate(ma);
}
