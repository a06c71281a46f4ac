// init.hpp — mixed initial-population construction: a fixed share of
// policy-generated individuals, the rest sampled randomly.
#ifndef RIGAA_INIT_HPP_
#define RIGAA_INIT_HPP_

#include <filesystem>
#include <optional>
#include <vector>

#include "rigaa/rng.hpp"
#include "rigaa/scenario.hpp"

namespace rigaa::init {

struct InitConfig {
  double rho = 0.0;  // fraction generated by the policy
  int pop_size = 150;
  std::optional<std::filesystem::path> policy_path;
  // Algorithm-1 fidelity mode: per-individual Bernoulli(rho) draws instead
  // of the deterministic round(rho * pop_size) split.
  bool bernoulli_split = false;
};

// Exactly round(rho * pop_size) individuals come from rollouts of the
// loaded policy (origin rl), the remainder from random_valid_scenario
// (origin random); rl block first. With rho = 0 the policy file is never
// touched and the stream matches a pure random initializer.
std::vector<Individual> build_initial_population(const Domain& domain,
                                                 const InitConfig& config,
                                                 Rng& rng);

}  // namespace rigaa::init

#endif  // RIGAA_INIT_HPP_
