#pragma once

#include <string>

#include "pterm/pcfg.hpp"

namespace pterm::io {

/// Graphviz rendering: one node per location, edges labelled with id,
/// guard and update (or branch probability).
std::string to_dot(const PCFG& p);

}  // namespace pterm::io
