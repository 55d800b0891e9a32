#pragma once

#include <filesystem>
#include <string>

#include "pterm/certificate.hpp"

namespace pterm::testing {

std::filesystem::path fixture_path(const std::string& name);

struct Subject {
  PCFG program;
  Invariant invariant;
};

/// `<stem>.prob` with `<stem>.inv.json` when present, else the trivial
/// invariant.
Subject load_subject(const std::string& stem);

/// Program stems under fixtures/.
std::vector<std::string> fixture_programs();

}  // namespace pterm::testing
