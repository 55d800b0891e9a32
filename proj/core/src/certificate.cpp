#include "pterm/certificate.hpp"

namespace pterm {

const Polyhedron& Invariant::operator[](LocId l) const {
  static const Polyhedron kTrue{};
  if (l < 0 || static_cast<std::size_t>(l) >= at.size()) return kTrue;
  return at[static_cast<std::size_t>(l)];
}

Rational LEM::max_coeff() const {
  Rational best(0);
  for (const auto& loc : components)
    for (const auto& e : loc)
      for (const auto& [v, c] : e.coeffs()) best = max(best, c.abs());
  return best;
}

void LEM::shift(const Rational& k) {
  for (auto& loc : components)
    for (auto& e : loc) e.set_constant(e.constant() + k);
}

const char* mode_name(CertificateMode m) {
  return m == CertificateMode::BSPComplete ? "bsp-complete" : "general-sound";
}

}  // namespace pterm
