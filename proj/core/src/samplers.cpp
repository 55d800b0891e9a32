#include "pterm/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace pterm::sim {

const SamplerRegistry& SamplerRegistry::builtins() {
  static const SamplerRegistry registry = [] {
    SamplerRegistry r;
    r.add("exp", [](Rng& g) { return g.exponential(); });
    r.add("exp_shifted", [](Rng& g) { return g.exponential() - 2; });
    r.add("laplace", [](Rng& g) {
      const double e = g.exponential();
      return g.uniform() < 0.5 ? -e : e;
    });
    return r;
  }();
  return registry;
}

const CustomSampler* SamplerRegistry::find(const std::string& id) const {
  auto it = samplers_.find(id);
  return it == samplers_.end() ? nullptr : &it->second;
}

double sample(const DistributionSpec& d, Rng& rng, const SamplerRegistry& registry) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NormalParams>) {
          return p.mean.to_double() + p.stddev.to_double() * rng.normal();
        } else if constexpr (std::is_same_v<T, UniformParams>) {
          return rng.uniform(p.lo.to_double(), p.hi.to_double());
        } else if constexpr (std::is_same_v<T, DiscreteParams>) {
          const double u = rng.uniform();
          double acc = 0;
          for (const auto& [value, prob] : p.outcomes) {
            acc += prob.to_double();
            if (u < acc) return value.to_double();
          }
          return p.outcomes.back().first.to_double();
        } else if constexpr (std::is_same_v<T, BernoulliParams>) {
          return rng.uniform() < p.p.to_double() ? 1.0 : 0.0;
        } else {
          const CustomSampler* s = registry.find(p.sampler_id);
          if (!s) throw std::invalid_argument("no sampler registered for custom distribution '" + p.sampler_id + "'");
          return (*s)(rng);
        }
      },
      d.params);
}

}  // namespace pterm::sim
