#include "rigaa/init.hpp"

#include <cmath>
#include <stdexcept>

#include "rigaa/errors.hpp"
#include "rigaa/ppo.hpp"
#include "rigaa/rl_env.hpp"

namespace rigaa::init {

std::vector<Individual> build_initial_population(const Domain& domain,
                                                 const InitConfig& config,
                                                 Rng& rng) {
  if (config.rho < 0.0 || config.rho > 1.0)
    throw std::invalid_argument("rho must be in [0, 1]");

  int rl_count = 0;
  if (config.rho > 0.0) {
    if (config.bernoulli_split) {
      for (int i = 0; i < config.pop_size; ++i)
        if (rng.bernoulli(config.rho)) ++rl_count;
    } else {
      rl_count = static_cast<int>(
          std::lround(config.rho * static_cast<double>(config.pop_size)));
    }
  }

  std::vector<Individual> population;
  population.reserve(static_cast<std::size_t>(config.pop_size));

  if (rl_count > 0) {
    if (!config.policy_path)
      throw std::invalid_argument("rho > 0 requires a policy path");
    const ppo::Policy policy = ppo::load_policy(*config.policy_path);
    if (policy.schema_id() != domain.schema().id)
      throw CorruptPolicyFile("policy trained for " + policy.schema_id() +
                              ", domain is " + domain.schema().id);
    rl::GenerationEnv env = rl::make_env(domain);
    for (int i = 0; i < rl_count; ++i) {
      Individual ind;
      ind.chromosome = rl::rollout_scenario(policy, env, rng);
      ind.origin = Origin::rl;
      population.push_back(std::move(ind));
    }
  }
  for (int i = rl_count; i < config.pop_size; ++i) {
    Individual ind;
    ind.chromosome = random_valid_scenario(domain, rng);
    ind.origin = Origin::random;
    population.push_back(std::move(ind));
  }
  return population;
}

}  // namespace rigaa::init
