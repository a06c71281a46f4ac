// rl_env.hpp — the scenario-construction MDP. An episode builds one
// scenario element per step; the shaped reward combines the surrogate
// fitness of the prefix, its improvement, a high-fitness bonus and an
// exploration bonus, with a fixed penalty for violating the constraints.
#ifndef RIGAA_RL_ENV_HPP_
#define RIGAA_RL_ENV_HPP_

#include <Eigen/Core>

#include <ostream>
#include <set>
#include <vector>

#include "rigaa/rng.hpp"
#include "rigaa/scenario.hpp"

namespace rigaa::rl {

// One action dimension: `bins` indices affinely mapped onto the range of
// schema attribute `attribute`.
struct ActionDim {
  Eigen::Index attribute;
  int bins;
};

struct ActionSpec {
  std::vector<ActionDim> dims;

  std::vector<int> sizes() const {
    std::vector<int> out;
    out.reserve(dims.size());
    for (const ActionDim& d : dims) out.push_back(d.bins);
    return out;
  }
  // bin index -> attribute value: lo + ceil(span * bin / (bins - 1)).
  int decode(std::size_t dim, int bin, const ScenarioSchema& schema) const;
};

struct RewardConfig {
  double threshold;          // R_2 = R_s when R_s > threshold, else 0
  double exploration_bonus;  // R_3
  double invalid_penalty;    // R_4
};

struct StepInfo {
  bool valid = true;
  double rs = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
};

struct StepOutcome {
  Eigen::VectorXd observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

class GenerationEnv {
 public:
  GenerationEnv(const Domain& domain, ActionSpec spec, RewardConfig rewards,
                Eigen::Index episode_elements);

  // Clears the state, samples element 0 uniformly within the attribute
  // ranges, and returns the normalized observation.
  Eigen::VectorXd reset(Rng& rng);

  // Writes the decoded action into the next element and rewards the prefix.
  // Throws EpisodeFinished when called after done.
  StepOutcome step(const std::vector<int>& action);

  bool done() const { return done_; }
  // True when the episode filled every element with a valid scenario.
  bool completed_valid() const { return done_ && !failed_; }
  Chromosome chromosome() const { return state_.topRows(cursor_); }
  const Eigen::MatrixXi& state() const { return state_; }
  Eigen::Index cursor() const { return cursor_; }
  Eigen::Index obs_len() const { return state_.size(); }
  Eigen::Index episode_elements() const { return episode_elements_; }
  std::vector<int> action_sizes() const { return spec_.sizes(); }
  const Domain& domain() const { return domain_; }
  const RewardConfig& rewards() const { return rewards_; }

  // Optional JSONL episode trace: one record per step with the action
  // indices, reward components, and validity.
  void set_trace(std::ostream* sink) { trace_ = sink; }

 private:
  Eigen::VectorXd observation() const;

  const Domain& domain_;
  ActionSpec spec_;
  RewardConfig rewards_;
  Eigen::Index episode_elements_;
  Eigen::MatrixXi state_;
  Eigen::Index cursor_ = 0;
  double last_rs_ = 0.0;
  bool done_ = true;
  bool failed_ = false;
  std::set<int> seen_a1_;
  std::set<int> seen_a2_;
  std::ostream* trace_ = nullptr;
};

// Default MDP wiring per problem, keyed by schema id:
//   maze-v1: action space 2x7x37 (type, size in 7 bins, position in 37),
//            th=110, R3=10, R4=-100, 40 elements;
//   road-v1: action space 3x25x35 (type, length, angle), th=5, R3=1,
//            R4=-50, 30 elements.
GenerationEnv make_env(const Domain& domain);
std::vector<int> default_action_dims(const std::string& schema_id);

// Anything able to pick an action from an observation (trained policies).
class ScenarioPolicy {
 public:
  virtual ~ScenarioPolicy() = default;
  virtual std::vector<int> act(const Eigen::VectorXd& observation, Rng& rng,
                               bool greedy) const = 0;
};

// Runs sampled (or greedy) episodes until one completes validly; throws
// GenerationExhausted after max_episodes invalid terminations.
Chromosome rollout_scenario(const ScenarioPolicy& policy, GenerationEnv& env,
                            Rng& rng, bool greedy = false,
                            int max_episodes = 20);

}  // namespace rigaa::rl

#endif  // RIGAA_RL_ENV_HPP_
