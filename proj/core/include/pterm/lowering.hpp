#pragma once

#include <string_view>
#include <vector>

#include "pterm/ast.hpp"
#include "pterm/pcfg.hpp"

namespace pterm::frontend {

struct LoweringInfo {
  /// Head location of every while loop, in source pre-order.
  std::vector<LocId> loop_heads;
};

/// One location per loop head plus fresh locations wherever a transition
/// would otherwise carry two assignments. Locations are named l0, l1, ...
/// in creation order and the terminal location is "lout". Transitions are
/// numbered t0, t1, ... grouped by source location, then-branches before
/// else-branches and loop bodies before loop exits.
PCFG lower_to_pcfg(const SourceProgram& program, LoweringInfo* info = nullptr);

/// parse_program followed by lower_to_pcfg.
PCFG compile_program(std::string_view text, LoweringInfo* info = nullptr);

}  // namespace pterm::frontend
