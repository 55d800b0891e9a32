#include "pterm/distribution.hpp"

#include <algorithm>

namespace pterm {

DistributionSpec DistributionSpec::normal(Rational mean, Rational stddev) {
  return {NormalParams{mean, stddev}, mean, std::nullopt, std::nullopt};
}

DistributionSpec DistributionSpec::uniform(Rational lo, Rational hi) {
  return {UniformParams{lo, hi}, (lo + hi) / Rational(2), lo, hi};
}

DistributionSpec DistributionSpec::discrete(std::vector<std::pair<Rational, Rational>> outcomes) {
  Rational mean(0);
  std::optional<Rational> lo, hi;
  for (const auto& [v, p] : outcomes) {
    mean += v * p;
    lo = lo ? min(*lo, v) : v;
    hi = hi ? max(*hi, v) : v;
  }
  return {DiscreteParams{std::move(outcomes)}, mean, lo, hi};
}

DistributionSpec DistributionSpec::bernoulli(Rational p) { return {BernoulliParams{p}, p, Rational(0), Rational(1)}; }

DistributionSpec DistributionSpec::custom(std::string sampler_id, Rational mean, std::optional<Rational> lo,
                                          std::optional<Rational> hi) {
  return {CustomParams{std::move(sampler_id)}, mean, lo, hi};
}

std::vector<std::string> DistributionSpec::problems() const {
  std::vector<std::string> out;
  if (support_lo && support_hi && *support_hi < *support_lo) out.emplace_back("support interval is empty");
  if ((support_lo && mean < *support_lo) || (support_hi && mean > *support_hi))
    out.emplace_back("mean " + mean.to_string() + " lies outside the support");

  auto expect = [&](const Rational& analytic) {
    if (analytic != mean)
      out.push_back("declared mean " + mean.to_string() + " differs from analytic mean " + analytic.to_string());
  };
  auto expect_support = [&](const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
    if (lo != support_lo || hi != support_hi) out.emplace_back("declared support differs from the analytic support");
  };

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NormalParams>) {
          if (p.stddev.sign() <= 0) out.emplace_back("normal stddev must be positive");
          expect(p.mean);
          expect_support(std::nullopt, std::nullopt);
        } else if constexpr (std::is_same_v<T, UniformParams>) {
          if (!(p.lo < p.hi)) out.emplace_back("uniform requires lo < hi");
          expect((p.lo + p.hi) / Rational(2));
          expect_support(p.lo, p.hi);
        } else if constexpr (std::is_same_v<T, DiscreteParams>) {
          if (p.outcomes.empty()) {
            out.emplace_back("discrete distribution has no outcomes");
            return;
          }
          Rational total(0), m(0);
          Rational lo = p.outcomes.front().first, hi = lo;
          for (const auto& [v, q] : p.outcomes) {
            if (q.sign() < 0) out.emplace_back("negative outcome probability");
            total += q;
            m += v * q;
            lo = min(lo, v);
            hi = max(hi, v);
          }
          if (total != Rational(1)) out.push_back("outcome probabilities sum to " + total.to_string());
          expect(m);
          expect_support(lo, hi);
        } else if constexpr (std::is_same_v<T, BernoulliParams>) {
          if (p.p.sign() < 0 || p.p > Rational(1)) out.emplace_back("bernoulli p outside [0,1]");
          expect(p.p);
          expect_support(Rational(0), Rational(1));
        } else {
          if (p.sampler_id.empty()) out.emplace_back("custom distribution needs a sampler id");
        }
      },
      params);
  return out;
}

const char* kind_name(DistKind k) {
  switch (k) {
    case DistKind::Normal: return "normal";
    case DistKind::Uniform: return "uniform";
    case DistKind::DiscreteFinite: return "discrete";
    case DistKind::Bernoulli: return "bernoulli";
    case DistKind::Custom: return "custom";
  }
  return "?";
}

}  // namespace pterm
