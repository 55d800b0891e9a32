#pragma once

#include <functional>
#include <map>
#include <string>

#include "pterm/distribution.hpp"
#include "pterm/rng.hpp"

namespace pterm::sim {

using CustomSampler = std::function<double(Rng&)>;

/// Samplers for Custom distributions, looked up by id.
class SamplerRegistry {
 public:
  /// Registry with the built-in samplers:
  ///   exp          Exp(1), mean 1, support [0, inf)
  ///   exp_shifted  Exp(1) - 2, mean -1, support [-2, inf)
  ///   laplace      Laplace(0, 1), mean 0, unbounded
  static const SamplerRegistry& builtins();

  void add(std::string id, CustomSampler sampler) { samplers_[std::move(id)] = std::move(sampler); }
  const CustomSampler* find(const std::string& id) const;

 private:
  std::map<std::string, CustomSampler> samplers_;
};

/// Draws one value. Throws std::invalid_argument for an unknown custom id.
double sample(const DistributionSpec& d, Rng& rng, const SamplerRegistry& registry = SamplerRegistry::builtins());

}  // namespace pterm::sim
