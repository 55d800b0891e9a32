#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pterm::cli {

/// Exit codes shared by all subcommands.
enum Exit : int {
  kOk = 0,
  /// synthesize: no certificate; check: rejected.
  kNegative = 1,
  /// Unreadable or malformed input.
  kBadInput = 2,
  /// Program outside the class the requested algorithm handles, or a
  /// certificate that does not fit the program.
  kPrecondition = 3,
};

struct ParseArgs {
  std::string source;
  std::string output;
  std::optional<std::string> dot;
  bool json = false;
};

struct SynthesizeArgs {
  std::string program;
  std::optional<std::string> invariant;
  std::string mode = "auto";
  std::string output;
  bool verbose = false;
  std::optional<std::string> dump_lp;
  bool json = false;
};

struct CheckArgs {
  std::string program;
  std::string invariant;
  std::string certificate;
  bool violations_only = false;
  bool json = false;
};

struct SimulateArgs {
  std::optional<std::string> program;
  std::string init;
  std::optional<std::string> location;
  std::uint64_t runs = 1000;
  std::uint64_t cap = 1'000'000;
  std::uint64_t seed = 1;
  std::string scheduler = "priority";
  std::string priority;
  std::string nondet = "uniform";
  std::optional<std::string> certificate;
  std::optional<unsigned> threads;
  std::optional<std::string> csv;
  std::optional<std::string> audit_invariant;
  bool audit_certificate = false;
  bool counterexample = false;
  bool json = false;
};

int run_parse(const ParseArgs& a);
int run_synthesize(const SynthesizeArgs& a);
int run_check(const CheckArgs& a);
int run_simulate(const SimulateArgs& a);

}  // namespace pterm::cli
