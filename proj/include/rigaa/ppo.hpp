// ppo.hpp — from-scratch actor-critic PPO (clipped surrogate objective)
// over multidiscrete action spaces, with portable policy files.
#ifndef RIGAA_PPO_HPP_
#define RIGAA_PPO_HPP_

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <vector>

#include "rigaa/mlp.hpp"
#include "rigaa/rl_env.hpp"
#include "rigaa/rng.hpp"

namespace rigaa::ppo {

struct PpoConfig {
  double learning_rate = 3e-4;
  int n_steps = 2048;
  int batch_size = 64;
  int epochs = 10;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_range = 0.2;
  double ent_coef = 0.005;
  double vf_coef = 0.5;
  double max_grad_norm = 0.5;
  long total_steps = 100000;
};

// Separate actor and critic MLPs, two hidden layers of 64 tanh units. The
// actor emits one categorical head per action dimension (logits stacked).
class Policy final : public rl::ScenarioPolicy {
 public:
  Policy() = default;
  Policy(std::string schema_id, Eigen::Index obs_len,
         std::vector<int> action_dims, Rng& rng,
         std::vector<Eigen::Index> hidden = {64, 64});

  std::vector<int> act(const Eigen::VectorXd& observation, Rng& rng,
                       bool greedy) const override;

  struct ActResult {
    std::vector<int> action;
    double logp = 0.0;
    double value = 0.0;
  };
  ActResult act_with_value(const Eigen::VectorXd& observation, Rng& rng) const;

  // (sum of action_dims) x batch — probe surface for round-trip checks.
  Eigen::MatrixXd action_logits(const Eigen::MatrixXd& observations) const;
  Eigen::VectorXd values(const Eigen::MatrixXd& observations) const;

  const std::string& schema_id() const { return schema_id_; }
  Eigen::Index obs_len() const { return obs_len_; }
  const std::vector<int>& action_dims() const { return action_dims_; }
  nn::Mlp& actor() { return actor_; }
  nn::Mlp& critic() { return critic_; }
  const nn::Mlp& actor() const { return actor_; }
  const nn::Mlp& critic() const { return critic_; }
  const std::vector<Eigen::Index>& hidden() const { return hidden_; }

 private:
  std::string schema_id_;
  Eigen::Index obs_len_ = 0;
  std::vector<int> action_dims_;
  std::vector<Eigen::Index> hidden_;
  nn::Mlp actor_;
  nn::Mlp critic_;
};

struct RolloutBuffer {
  Eigen::MatrixXd observations;  // obs_len x n_steps
  Eigen::MatrixXi actions;       // action dims x n_steps
  Eigen::VectorXd log_probs;
  Eigen::VectorXd rewards;
  Eigen::VectorXd values;
  Eigen::VectorXd dones;  // 1 when the episode ended at this step
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;

  explicit RolloutBuffer(Eigen::Index obs_len, Eigen::Index action_dims,
                         Eigen::Index n_steps);
  Eigen::Index size() const { return rewards.size(); }
};

// advantage_t = sum_k (gamma*lambda)^k delta_{t+k}, episodes cut at dones;
// returns = advantages + values.
void compute_gae(RolloutBuffer& buffer, double gamma, double lambda,
                 double bootstrap_value);

// A frozen minibatch, as consumed by the loss.
struct Batch {
  Eigen::MatrixXd observations;
  Eigen::MatrixXi actions;
  Eigen::VectorXd log_probs_old;
  Eigen::VectorXd advantages;  // already normalized
  Eigen::VectorXd returns;
};

struct LossTerms {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double total = 0.0;  // policy + vf_coef*value - ent_coef*entropy
};

// Loss only (finite-difference oracle surface) and loss+gradients.
LossTerms ppo_loss(const Policy& policy, const Batch& batch,
                   const PpoConfig& config);
LossTerms ppo_loss_and_gradients(const Policy& policy, const Batch& batch,
                                 const PpoConfig& config,
                                 nn::Gradients& actor_grads,
                                 nn::Gradients& critic_grads);

struct LossStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

// One PPO update: epochs x shuffled minibatches over the buffer, advantages
// normalized once per update, global gradient-norm clipping, Adam steps.
// Throws NonFiniteLoss on a non-finite loss.
LossStats ppo_update(Policy& policy, RolloutBuffer& buffer,
                     const PpoConfig& config, nn::Adam& actor_opt,
                     nn::Adam& critic_opt, Rng& rng);

struct TrainLogRow {
  long step = 0;
  double mean_episode_reward = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct TrainResult {
  Policy policy;
  std::vector<TrainLogRow> log;
};

// Alternates n_steps of rollout collection with ppo_update until
// total_steps env steps have been taken.
TrainResult train(rl::GenerationEnv& env, const PpoConfig& config, Rng& rng);

// Policy file: LE binary, JSON header {format_version, schema_id, obs_len,
// action_dims, hidden}, then named f64 tensors. Load verifies every shape
// and throws CorruptPolicyFile on any mismatch.
void save_policy(const Policy& policy, const std::filesystem::path& path);
Policy load_policy(const std::filesystem::path& path);

}  // namespace rigaa::ppo

#endif  // RIGAA_PPO_HPP_
