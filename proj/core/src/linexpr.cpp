#include "pterm/linexpr.hpp"

#include <sstream>

namespace pterm {

TemplateExpr lift(const LinExpr& e) {
  TemplateExpr out{LinExpr(e.constant())};
  for (const auto& [v, c] : e.coeffs()) out.set_coeff(v, LinExpr(c));
  return out;
}

LinExpr instantiate(const TemplateExpr& e, std::span<const Rational> unknowns) {
  LinExpr out(e.constant().eval(unknowns));
  for (const auto& [v, c] : e.coeffs()) out.set_coeff(v, c.eval(unknowns));
  return out;
}

double eval_double(const LinExpr& e, std::span<const double> point) {
  double acc = e.constant().to_double();
  for (const auto& [v, c] : e.coeffs())
    if (static_cast<std::size_t>(v) < point.size()) acc += c.to_double() * point[static_cast<std::size_t>(v)];
  return acc;
}

std::string to_string(const LinExpr& e, std::span<const std::string> names) {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rational& c, const std::string& var) {
    Rational mag = c.abs();
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (var.empty()) {
      os << mag;
    } else {
      if (mag != Rational(1)) os << mag << "*";
      os << var;
    }
  };
  for (const auto& [v, c] : e.coeffs()) {
    std::string name = (v >= 0 && static_cast<std::size_t>(v) < names.size()) ? names[static_cast<std::size_t>(v)]
                                                                            : "v" + std::to_string(v);
    emit(c, name);
  }
  if (!e.constant().is_zero() || first) {
    if (first && e.constant().is_zero())
      os << "0";
    else
      emit(e.constant(), "");
  }
  return os.str();
}

}  // namespace pterm
