#include "rigaa/rl_env.hpp"

#include <stdexcept>
#include <string>

#include "rigaa/errors.hpp"

namespace rigaa::rl {

int ActionSpec::decode(std::size_t dim, int bin,
                       const ScenarioSchema& schema) const {
  const ActionDim& d = dims[dim];
  const AttributeSpec& attr =
      schema.attributes[static_cast<std::size_t>(d.attribute)];
  if (bin < 0 || bin >= d.bins)
    throw std::out_of_range("action bin out of range");
  if (d.bins <= 1) return attr.lo;
  const int span = attr.hi - attr.lo;
  return attr.lo + (span * bin + d.bins - 2) / (d.bins - 1);
}

GenerationEnv::GenerationEnv(const Domain& domain, ActionSpec spec,
                             RewardConfig rewards,
                             Eigen::Index episode_elements)
    : domain_(domain),
      spec_(std::move(spec)),
      rewards_(rewards),
      episode_elements_(episode_elements),
      state_(Eigen::MatrixXi::Zero(episode_elements,
                                   domain.schema().attribute_count())) {}

Eigen::VectorXd GenerationEnv::observation() const {
  const ScenarioSchema& schema = domain_.schema();
  Eigen::VectorXd obs(state_.size());
  Eigen::Index k = 0;
  for (Eigen::Index e = 0; e < state_.rows(); ++e)
    for (Eigen::Index a = 0; a < state_.cols(); ++a)
      obs[k++] = static_cast<double>(state_(e, a)) /
                 static_cast<double>(
                     schema.attributes[static_cast<std::size_t>(a)].hi);
  return obs;
}

Eigen::VectorXd GenerationEnv::reset(Rng& rng) {
  const ScenarioSchema& schema = domain_.schema();
  state_.setZero();
  seen_a1_.clear();
  seen_a2_.clear();
  done_ = false;
  failed_ = false;

  // First element sampled within the attribute ranges; a lone element is
  // valid in both problems, the loop only guards pathological domains.
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (Eigen::Index a = 0; a < state_.cols(); ++a) {
      const AttributeSpec& attr = schema.attributes[static_cast<std::size_t>(a)];
      state_(0, a) = rng.uniform_int(attr.lo, attr.hi);
    }
    const auto fitness = domain_.prefix_fitness(state_, 1);
    if (fitness) {
      last_rs_ = *fitness;
      break;
    }
  }
  cursor_ = 1;
  seen_a1_.insert(state_(0, 1));
  seen_a2_.insert(state_(0, 2));
  return observation();
}

StepOutcome GenerationEnv::step(const std::vector<int>& action) {
  if (done_) throw EpisodeFinished("step() after episode end");
  const ScenarioSchema& schema = domain_.schema();

  for (std::size_t d = 0; d < spec_.dims.size(); ++d)
    state_(cursor_, spec_.dims[d].attribute) =
        spec_.decode(d, action[d], schema);

  StepOutcome out;
  const auto fitness = domain_.prefix_fitness(state_, cursor_ + 1);
  if (!fitness) {
    failed_ = true;
    done_ = true;
    out.reward = rewards_.invalid_penalty;
    out.info.valid = false;
  } else {
    const double rs = *fitness;
    out.info.valid = true;
    out.info.rs = rs;
    out.info.r1 = rs - last_rs_;
    out.info.r2 = rs > rewards_.threshold ? rs : 0.0;
    const int a1 = state_(cursor_, 1);
    const int a2 = state_(cursor_, 2);
    if (!seen_a1_.count(a1) || !seen_a2_.count(a2))
      out.info.r3 = rewards_.exploration_bonus;
    seen_a1_.insert(a1);
    seen_a2_.insert(a2);
    out.reward = rs + out.info.r1 + out.info.r2 + out.info.r3;
    last_rs_ = rs;
    ++cursor_;
    if (cursor_ == episode_elements_) done_ = true;
  }
  out.done = done_;
  out.observation = observation();

  if (trace_ != nullptr) {
    *trace_ << "{\"action\":[";
    for (std::size_t d = 0; d < action.size(); ++d)
      *trace_ << (d ? "," : "") << action[d];
    *trace_ << "],\"reward\":" << out.reward << ",\"rs\":" << out.info.rs
            << ",\"r1\":" << out.info.r1 << ",\"r2\":" << out.info.r2
            << ",\"r3\":" << out.info.r3
            << ",\"valid\":" << (out.info.valid ? "true" : "false")
            << ",\"done\":" << (out.done ? "true" : "false") << "}\n";
  }
  return out;
}

std::vector<int> default_action_dims(const std::string& schema_id) {
  if (schema_id == "maze-v1") return {2, 7, 37};
  if (schema_id == "road-v1") return {3, 25, 35};
  throw std::invalid_argument("no action space for schema " + schema_id);
}

GenerationEnv make_env(const Domain& domain) {
  const std::string& id = domain.schema().id;
  if (id == "maze-v1") {
    // 37 bins cover the position range [2, 38] exactly; 7 bins sample size.
    return GenerationEnv(domain, ActionSpec{{{0, 2}, {2, 7}, {1, 37}}},
                         RewardConfig{110.0, 10.0, -100.0}, 40);
  }
  if (id == "road-v1") {
    return GenerationEnv(domain, ActionSpec{{{0, 3}, {1, 25}, {2, 35}}},
                         RewardConfig{5.0, 1.0, -50.0}, 30);
  }
  throw std::invalid_argument("no environment for schema " + id);
}

Chromosome rollout_scenario(const ScenarioPolicy& policy, GenerationEnv& env,
                            Rng& rng, bool greedy, int max_episodes) {
  for (int episode = 0; episode < max_episodes; ++episode) {
    Eigen::VectorXd obs = env.reset(rng);
    while (!env.done()) {
      StepOutcome out = env.step(policy.act(obs, rng, greedy));
      obs = std::move(out.observation);
    }
    if (env.completed_valid()) return env.chromosome();
  }
  throw GenerationExhausted("no valid rollout in " +
                            std::to_string(max_episodes) + " episodes");
}

}  // namespace rigaa::rl
