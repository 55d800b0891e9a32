#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pterm/rational.hpp"

namespace pterm {

struct NormalParams {
  Rational mean;
  Rational stddev;
  friend bool operator==(const NormalParams&, const NormalParams&) = default;
};

struct UniformParams {
  Rational lo;
  Rational hi;
  friend bool operator==(const UniformParams&, const UniformParams&) = default;
};

struct DiscreteParams {
  std::vector<std::pair<Rational, Rational>> outcomes;  // (value, probability)
  friend bool operator==(const DiscreteParams&, const DiscreteParams&) = default;
};

struct BernoulliParams {
  Rational p;
  friend bool operator==(const BernoulliParams&, const BernoulliParams&) = default;
};

/// Distribution known to the analysis only through its mean and support;
/// the simulator looks `sampler_id` up in its sampler registry.
struct CustomParams {
  std::string sampler_id;
  friend bool operator==(const CustomParams&, const CustomParams&) = default;
};

enum class DistKind { Normal, Uniform, DiscreteFinite, Bernoulli, Custom };

/// Integrable distribution as seen by synthesis: an exact mean and a
/// (possibly unbounded) support interval. Unset bounds mean -inf / +inf.
struct DistributionSpec {
  std::variant<NormalParams, UniformParams, DiscreteParams, BernoulliParams, CustomParams> params;
  Rational mean;
  std::optional<Rational> support_lo;
  std::optional<Rational> support_hi;

  static DistributionSpec normal(Rational mean, Rational stddev);
  static DistributionSpec uniform(Rational lo, Rational hi);
  static DistributionSpec discrete(std::vector<std::pair<Rational, Rational>> outcomes);
  static DistributionSpec bernoulli(Rational p);
  static DistributionSpec custom(std::string sampler_id, Rational mean, std::optional<Rational> lo,
                                 std::optional<Rational> hi);

  DistKind kind() const { return static_cast<DistKind>(params.index()); }
  bool bounded() const { return support_lo.has_value() && support_hi.has_value(); }

  /// Human-readable problems with the declared fields; empty when valid.
  std::vector<std::string> problems() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

const char* kind_name(DistKind k);

}  // namespace pterm
