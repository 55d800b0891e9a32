#pragma once

#include <string>
#include <vector>

#include "pterm/certificate.hpp"

namespace pterm::testing {

struct PointViolation {
  std::string transition;
  std::string condition;
  int component = 0;
};

/// Evaluates the certificate conditions of `t` at the concrete state `x`
/// (assumed to satisfy the invariant and the guard) by direct arithmetic:
/// successor valuations are computed with sample means and both nondet
/// endpoints, successor levels from guard evaluation.
std::vector<PointViolation> pointwise_violations(const PCFG& p, const Certificate& c, const Transition& t,
                                                 const std::vector<Rational>& x);

/// Grid points with coordinates in {-r, -r+1/2, ..., r} that satisfy the
/// invariant at `t`'s source and its guard.
std::vector<std::vector<Rational>> enabled_grid(const PCFG& p, const Invariant& inv, const Transition& t, int r);

}  // namespace pterm::testing
