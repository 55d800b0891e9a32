#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pterm/rational.hpp"

namespace pterm {

/// Index of a variable inside an expression. Program variables occupy
/// 0..n-1; encodings append auxiliary variables after them.
using VarId = int;

/// Affine expression `constant + sum_v coeff[v] * v` whose coefficients
/// live in a module over the rationals. Zero coefficients are never stored.
///
/// Two instantiations are used: `LinExpr` (rational coefficients) and
/// `TemplateExpr` (coefficients that are themselves affine in LP unknowns).
template <class Coeff>
class BasicLinExpr {
 public:
  using CoeffMap = std::map<VarId, Coeff>;

  BasicLinExpr() = default;
  explicit BasicLinExpr(Coeff constant) : constant_(std::move(constant)) {}

  static BasicLinExpr variable(VarId v, Coeff coeff) {
    BasicLinExpr e;
    e.add_term(v, coeff);
    return e;
  }

  const CoeffMap& coeffs() const { return coeffs_; }
  const Coeff& constant() const { return constant_; }

  Coeff coeff(VarId v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? Coeff{} : it->second;
  }

  bool is_constant() const { return coeffs_.empty(); }
  bool is_zero() const { return coeffs_.empty() && constant_.is_zero(); }

  /// Largest variable index with a nonzero coefficient, or -1.
  VarId max_var() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

  void set_constant(Coeff c) { constant_ = std::move(c); }

  void set_coeff(VarId v, Coeff c) {
    if (c.is_zero())
      coeffs_.erase(v);
    else
      coeffs_[v] = std::move(c);
  }

  void add_term(VarId v, const Coeff& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace(v, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  BasicLinExpr& operator+=(const BasicLinExpr& o) {
    for (const auto& [v, c] : o.coeffs_) add_term(v, c);
    constant_ += o.constant_;
    return *this;
  }

  BasicLinExpr& operator-=(const BasicLinExpr& o) {
    for (const auto& [v, c] : o.coeffs_) add_term(v, -c);
    constant_ -= o.constant_;
    return *this;
  }

  BasicLinExpr& operator*=(const Rational& k) {
    if (k.is_zero()) {
      coeffs_.clear();
      constant_ = Coeff{};
      return *this;
    }
    for (auto& [v, c] : coeffs_) c *= k;
    constant_ *= k;
    return *this;
  }

  friend BasicLinExpr operator+(BasicLinExpr a, const BasicLinExpr& b) { return a += b; }
  friend BasicLinExpr operator-(BasicLinExpr a, const BasicLinExpr& b) { return a -= b; }
  friend BasicLinExpr operator*(BasicLinExpr a, const Rational& k) { return a *= k; }
  friend BasicLinExpr operator*(const Rational& k, BasicLinExpr a) { return a *= k; }
  BasicLinExpr operator-() const { return *this * Rational(-1); }

  friend bool operator==(const BasicLinExpr& a, const BasicLinExpr& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }

  /// Replaces variable `v` by the rational affine expression `replacement`.
  template <class Replacement>
  BasicLinExpr substitute(VarId v, const BasicLinExpr<Replacement>& replacement) const {
    auto it = coeffs_.find(v);
    if (it == coeffs_.end()) return *this;
    BasicLinExpr out = *this;
    const Coeff c = it->second;
    out.coeffs_.erase(v);
    for (const auto& [w, r] : replacement.coeffs()) out.add_term(w, c * r);
    out.constant_ += c * replacement.constant();
    return out;
  }

  /// Renames variable `from` to `to` (adding onto any existing `to` term).
  BasicLinExpr rename(VarId from, VarId to) const {
    auto it = coeffs_.find(from);
    if (it == coeffs_.end() || from == to) return *this;
    BasicLinExpr out = *this;
    const Coeff c = it->second;
    out.coeffs_.erase(from);
    out.add_term(to, c);
    return out;
  }

  /// Value at a rational point; variables beyond `point` read as zero.
  Coeff eval(std::span<const Rational> point) const {
    Coeff acc = constant_;
    for (const auto& [v, c] : coeffs_)
      if (v >= 0 && static_cast<std::size_t>(v) < point.size()) acc += c * point[static_cast<std::size_t>(v)];
    return acc;
  }

 private:
  CoeffMap coeffs_;
  Coeff constant_{};
};

using LinExpr = BasicLinExpr<Rational>;

/// Expression over program variables whose coefficients are affine in LP
/// unknowns. Used to state template constraints before Farkas encoding.
using TemplateExpr = BasicLinExpr<LinExpr>;

/// Lifts a rational expression into template form (constant coefficients).
TemplateExpr lift(const LinExpr& e);

/// Fixes the LP unknowns of a template expression to concrete values.
LinExpr instantiate(const TemplateExpr& e, std::span<const Rational> unknowns);

double eval_double(const LinExpr& e, std::span<const double> point);

/// Human-readable form, e.g. "2*x - y + 3". Variables without a name print
/// as "v<index>".
std::string to_string(const LinExpr& e, std::span<const std::string> names);

}  // namespace pterm
