#include "support/mutations.hpp"

#include <algorithm>
#include <stdexcept>

namespace pterm::testing {

// Example 3: eta(l0) = (1, x+7, y+7), eta(l1) = (1, x+8, y+7),
// eta(lout) = (0, x+7, y+7); I(l1) = x >= -7.
// Example 4: eta(l0) = (1, 2y+2, x+1), eta(l1) = (1, 2y+1, x+1),
// eta(lout) = (0, 2y+2, x+1); I(l1) = y >= 0.
const std::vector<Mutation>& curated_mutations() {
  static const std::vector<Mutation> list = {
      // x+8 -> x+6 at l1: t3 lands on x+7 at l0, no decrease.
      {"ex3_l1_c2_const_minus2", "fig1b", "example3.cert.json", "l1", 2, "const", Rational(-2), false, "t3", "P-RANK", 2},
      // l0 constant 1 -> 2 in the first component: t3 climbs from 1 to 2.
      {"ex3_l0_c1_const_plus1", "fig1b", "example3.cert.json", "l0", 1, "const", Rational(1), false, "t3", "P-RANK", 1},
      // lout 0 -> 1: the exit t2 no longer drops by one.
      {"ex3_lout_c1_const_plus1", "fig1b", "example3.cert.json", "lout", 1, "const", Rational(1), false, "t2", "P-RANK", 1},
      // 2y+7 still ranks t0: 2(y-3)+7 <= 2y+6 and stays >= 0 for y >= 0.
      {"ex3_l0_c3_y_plus1", "fig1b", "example3.cert.json", "l0", 3, "y", Rational(1), true, "", "", 0},
      // x+8 at l0: t3 goes from x+8 to x+8.
      {"ex3_l0_c2_const_plus1", "fig1b", "example3.cert.json", "l0", 2, "const", Rational(1), false, "t3", "P-RANK", 2},
      // x+6 at l0: t3 from x = -7 reaches -1 at l0.
      {"ex3_l0_c2_const_minus1", "fig1b", "example3.cert.json", "l0", 2, "const", Rational(-1), false, "t3", "W-EXP-NNEG", 2},
      // l1 constant 1 -> 0: t3 climbs from 0 to 1.
      {"ex3_l1_c1_const_minus1", "fig1b", "example3.cert.json", "l1", 1, "const", Rational(-1), false, "t3", "P-RANK", 1},
      // 2x+8 is -6 at x = -7.
      {"ex3_l1_c2_x_plus1", "fig1b", "example3.cert.json", "l1", 2, "x", Rational(1), false, "t3", "P-NNEG", 2},
      // lout components beyond the first are never constrained.
      {"ex3_lout_c2_x_plus1", "fig1b", "example3.cert.json", "lout", 2, "x", Rational(1), true, "", "", 0},
      {"ex3_lout_c3_const_plus93", "fig1b", "example3.cert.json", "lout", 3, "const", Rational(93), true, "", "", 0},
      // y+6: t0 gives y+3 >= 0 and y+3 <= y+5.
      {"ex3_l0_c3_const_minus1", "fig1b", "example3.cert.json", "l0", 3, "const", Rational(-1), true, "", "", 0},
      // y+2: t0 gives y-1, negative at y = 0.
      {"ex3_l0_c3_const_minus5", "fig1b", "example3.cert.json", "l0", 3, "const", Rational(-5), false, "t0", "W-EXP-NNEG", 3},
      // x in the second component at l1 breaks the zero-coefficient rule for t2.
      {"ex4_l1_c2_x_plus1", "fig1a", "example4.cert.json", "l1", 2, "x", Rational(1), false, "t2", "UNBOUND", 2},
      // Components above level 2 at l0 are never constrained.
      {"ex4_l0_c3_const_minus1", "fig1a", "example4.cert.json", "l0", 3, "const", Rational(-1), true, "", "", 0},
      // 2x+1: t2 has min-pre 2x-1, negative at x = 0.
      {"ex4_l1_c3_x_plus1", "fig1a", "example4.cert.json", "l1", 3, "x", Rational(1), false, "t2", "W-EXP-NNEG", 3},
      // 2y at l1: t3 goes to 2(y-1)+2 = 2y at l0, no decrease.
      {"ex4_l1_c2_const_minus1", "fig1a", "example4.cert.json", "l1", 2, "const", Rational(-1), false, "t3", "P-RANK", 2},
      // lout 0 -> 1: the exit t1 no longer drops.
      {"ex4_lout_c1_const_plus1", "fig1a", "example4.cert.json", "lout", 1, "const", Rational(1), false, "t1", "P-RANK", 1},
  };
  return list;
}

void apply(const Mutation& m, const PCFG& p, Certificate& c) {
  const auto loc = std::find(p.locations.begin(), p.locations.end(), m.location);
  if (loc == p.locations.end()) throw std::invalid_argument("unknown location " + m.location);
  LinExpr& e = c.lem.components[static_cast<std::size_t>(loc - p.locations.begin())][static_cast<std::size_t>(m.component - 1)];
  if (m.term == "const") {
    e.set_constant(e.constant() + m.delta);
    return;
  }
  const auto var = std::find(p.variables.begin(), p.variables.end(), m.term);
  if (var == p.variables.end()) throw std::invalid_argument("unknown variable " + m.term);
  const VarId v = static_cast<VarId>(var - p.variables.begin());
  e.set_coeff(v, e.coeff(v) + m.delta);
}

}  // namespace pterm::testing
