#include "rigaa/ppo.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>

#include "rigaa/errors.hpp"

namespace rigaa::ppo {
namespace {

struct HeadView {
  Eigen::Index offset;
  Eigen::Index size;
};

std::vector<HeadView> head_views(const std::vector<int>& dims) {
  std::vector<HeadView> views;
  Eigen::Index offset = 0;
  for (const int d : dims) {
    views.push_back({offset, d});
    offset += d;
  }
  return views;
}

// Per-head log-softmax statistics of one logits column.
struct HeadStats {
  Eigen::VectorXd probs;
  Eigen::VectorXd logp;
  double entropy = 0.0;
};

HeadStats head_stats(const Eigen::Ref<const Eigen::VectorXd>& logits) {
  HeadStats s;
  const double max_logit = logits.maxCoeff();
  const Eigen::VectorXd shifted = logits.array() - max_logit;
  const double lse = std::log(shifted.array().exp().sum());
  s.logp = shifted.array() - lse;
  s.probs = s.logp.array().exp();
  s.entropy = -(s.probs.array() * s.logp.array()).sum();
  return s;
}

LossTerms loss_impl(const Policy& policy, const Batch& batch,
                    const PpoConfig& config, nn::Gradients* actor_grads,
                    nn::Gradients* critic_grads) {
  const auto views = head_views(policy.action_dims());
  const Eigen::Index batch_size = batch.observations.cols();
  const double inv_b = 1.0 / static_cast<double>(batch_size);

  nn::Mlp::Cache actor_cache;
  nn::Mlp::Cache critic_cache;
  const Eigen::MatrixXd logits = policy.actor().forward(
      batch.observations, actor_grads ? &actor_cache : nullptr);
  const Eigen::MatrixXd value_out = policy.critic().forward(
      batch.observations, critic_grads ? &critic_cache : nullptr);

  Eigen::MatrixXd dlogits;
  if (actor_grads != nullptr) dlogits.setZero(logits.rows(), logits.cols());

  LossTerms terms;
  for (Eigen::Index s = 0; s < batch_size; ++s) {
    double logp_new = 0.0;
    double entropy = 0.0;
    std::vector<HeadStats> stats;
    stats.reserve(views.size());
    for (std::size_t h = 0; h < views.size(); ++h) {
      stats.push_back(
          head_stats(logits.col(s).segment(views[h].offset, views[h].size)));
      logp_new += stats[h].logp[batch.actions(static_cast<Eigen::Index>(h), s)];
      entropy += stats[h].entropy;
    }

    const double ratio = std::exp(logp_new - batch.log_probs_old[s]);
    const double advantage = batch.advantages[s];
    const double unclipped = ratio * advantage;
    const double clipped =
        std::clamp(ratio, 1.0 - config.clip_range, 1.0 + config.clip_range) *
        advantage;
    terms.policy_loss += -std::min(unclipped, clipped) * inv_b;
    terms.entropy += entropy * inv_b;

    const double value = value_out(0, s);
    const double vdiff = value - batch.returns[s];
    terms.value_loss += vdiff * vdiff * inv_b;

    if (actor_grads != nullptr) {
      // d(-min(u, c))/dlogp: the clipped branch has zero gradient when it
      // is the active minimum.
      const double coef =
          (unclipped <= clipped) ? -advantage * ratio * inv_b : 0.0;
      for (std::size_t h = 0; h < views.size(); ++h) {
        const HeadStats& hs = stats[h];
        auto seg = dlogits.col(s).segment(views[h].offset, views[h].size);
        seg = -coef * hs.probs;
        seg[batch.actions(static_cast<Eigen::Index>(h), s)] += coef;
        // -ent_coef * entropy term: dH/dz_j = -p_j (logp_j + H)
        seg.array() += config.ent_coef * inv_b * hs.probs.array() *
                       (hs.logp.array() + hs.entropy);
      }
    }
  }
  terms.total = terms.policy_loss + config.vf_coef * terms.value_loss -
                config.ent_coef * terms.entropy;

  if (actor_grads != nullptr) {
    policy.actor().backward(actor_cache, dlogits, *actor_grads);
    Eigen::MatrixXd dvalue =
        2.0 * config.vf_coef * inv_b *
        (value_out.row(0) - batch.returns.transpose());
    policy.critic().backward(critic_cache, dvalue, *critic_grads);
  }
  return terms;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

void write_f64(std::ostream& out, double v) {
  write_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) throw CorruptPolicyFile("truncated policy file");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw CorruptPolicyFile("truncated policy file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

double read_f64(std::istream& in) {
  return std::bit_cast<double>(read_u64(in));
}

constexpr char kMagic[4] = {'R', 'G', 'P', 'F'};
constexpr std::uint32_t kFormatVersion = 1;

void write_tensor(std::ostream& out, const std::string& name,
                  const Eigen::MatrixXd& tensor) {
  write_u32(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  write_u64(out, static_cast<std::uint64_t>(tensor.rows()));
  write_u64(out, static_cast<std::uint64_t>(tensor.cols()));
  for (Eigen::Index r = 0; r < tensor.rows(); ++r)
    for (Eigen::Index c = 0; c < tensor.cols(); ++c)
      write_f64(out, tensor(r, c));
}

Eigen::MatrixXd read_tensor(std::istream& in, const std::string& expect_name,
                            Eigen::Index rows, Eigen::Index cols) {
  const std::uint32_t name_len = read_u32(in);
  std::string name(name_len, '\0');
  in.read(name.data(), name_len);
  if (!in || name != expect_name)
    throw CorruptPolicyFile("unexpected tensor " + name + ", wanted " +
                            expect_name);
  const auto r = static_cast<Eigen::Index>(read_u64(in));
  const auto c = static_cast<Eigen::Index>(read_u64(in));
  if (r != rows || c != cols)
    throw CorruptPolicyFile("tensor " + name + " has shape " +
                            std::to_string(r) + "x" + std::to_string(c) +
                            ", wanted " + std::to_string(rows) + "x" +
                            std::to_string(cols));
  Eigen::MatrixXd tensor(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) tensor(i, j) = read_f64(in);
  return tensor;
}

}  // namespace

Policy::Policy(std::string schema_id, Eigen::Index obs_len,
               std::vector<int> action_dims, Rng& rng,
               std::vector<Eigen::Index> hidden)
    : schema_id_(std::move(schema_id)),
      obs_len_(obs_len),
      action_dims_(std::move(action_dims)),
      hidden_(std::move(hidden)) {
  const Eigen::Index logit_count =
      std::accumulate(action_dims_.begin(), action_dims_.end(), 0);
  std::vector<Eigen::Index> actor_sizes{obs_len_};
  actor_sizes.insert(actor_sizes.end(), hidden_.begin(), hidden_.end());
  std::vector<Eigen::Index> critic_sizes = actor_sizes;
  actor_sizes.push_back(logit_count);
  critic_sizes.push_back(1);
  const double sqrt2 = std::sqrt(2.0);
  actor_ = nn::Mlp(actor_sizes, rng, sqrt2, 0.01);
  critic_ = nn::Mlp(critic_sizes, rng, sqrt2, 1.0);
}

std::vector<int> Policy::act(const Eigen::VectorXd& observation, Rng& rng,
                             bool greedy) const {
  const Eigen::VectorXd logits = actor_.forward(observation);
  std::vector<int> action;
  action.reserve(action_dims_.size());
  for (const HeadView& view : head_views(action_dims_)) {
    const HeadStats stats = head_stats(logits.segment(view.offset, view.size));
    if (greedy) {
      Eigen::Index best = 0;
      stats.probs.maxCoeff(&best);
      action.push_back(static_cast<int>(best));
    } else {
      const double u = rng.uniform();
      double cumulative = 0.0;
      int picked = static_cast<int>(view.size) - 1;
      for (Eigen::Index k = 0; k < view.size; ++k) {
        cumulative += stats.probs[k];
        if (u < cumulative) {
          picked = static_cast<int>(k);
          break;
        }
      }
      action.push_back(picked);
    }
  }
  return action;
}

Policy::ActResult Policy::act_with_value(const Eigen::VectorXd& observation,
                                         Rng& rng) const {
  ActResult result;
  const Eigen::VectorXd logits = actor_.forward(observation);
  for (const HeadView& view : head_views(action_dims_)) {
    const HeadStats stats = head_stats(logits.segment(view.offset, view.size));
    const double u = rng.uniform();
    double cumulative = 0.0;
    int picked = static_cast<int>(view.size) - 1;
    for (Eigen::Index k = 0; k < view.size; ++k) {
      cumulative += stats.probs[k];
      if (u < cumulative) {
        picked = static_cast<int>(k);
        break;
      }
    }
    result.action.push_back(picked);
    result.logp += stats.logp[picked];
  }
  result.value = critic_.forward(observation)(0, 0);
  return result;
}

Eigen::MatrixXd Policy::action_logits(
    const Eigen::MatrixXd& observations) const {
  return actor_.forward(observations);
}

Eigen::VectorXd Policy::values(const Eigen::MatrixXd& observations) const {
  return critic_.forward(observations).row(0);
}

RolloutBuffer::RolloutBuffer(Eigen::Index obs_len, Eigen::Index action_dims,
                             Eigen::Index n_steps)
    : observations(Eigen::MatrixXd::Zero(obs_len, n_steps)),
      actions(Eigen::MatrixXi::Zero(action_dims, n_steps)),
      log_probs(Eigen::VectorXd::Zero(n_steps)),
      rewards(Eigen::VectorXd::Zero(n_steps)),
      values(Eigen::VectorXd::Zero(n_steps)),
      dones(Eigen::VectorXd::Zero(n_steps)),
      advantages(Eigen::VectorXd::Zero(n_steps)),
      returns(Eigen::VectorXd::Zero(n_steps)) {}

void compute_gae(RolloutBuffer& buffer, double gamma, double lambda,
                 double bootstrap_value) {
  const Eigen::Index n = buffer.size();
  double last = 0.0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const double nonterminal = 1.0 - buffer.dones[t];
    const double next_value =
        (t + 1 < n) ? buffer.values[t + 1] : bootstrap_value;
    const double delta = buffer.rewards[t] +
                         gamma * next_value * nonterminal - buffer.values[t];
    last = delta + gamma * lambda * nonterminal * last;
    buffer.advantages[t] = last;
  }
  buffer.returns = buffer.advantages + buffer.values;
}

LossTerms ppo_loss(const Policy& policy, const Batch& batch,
                   const PpoConfig& config) {
  return loss_impl(policy, batch, config, nullptr, nullptr);
}

LossTerms ppo_loss_and_gradients(const Policy& policy, const Batch& batch,
                                 const PpoConfig& config,
                                 nn::Gradients& actor_grads,
                                 nn::Gradients& critic_grads) {
  return loss_impl(policy, batch, config, &actor_grads, &critic_grads);
}

LossStats ppo_update(Policy& policy, RolloutBuffer& buffer,
                     const PpoConfig& config, nn::Adam& actor_opt,
                     nn::Adam& critic_opt, Rng& rng) {
  const Eigen::Index n = buffer.size();

  // Advantages normalized once per update.
  Eigen::VectorXd normalized = buffer.advantages;
  const double mean = normalized.mean();
  normalized.array() -= mean;
  const double std =
      std::sqrt(normalized.squaredNorm() / static_cast<double>(n));
  normalized /= (std + 1e-8);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  nn::Gradients actor_grads = policy.actor().zero_gradients();
  nn::Gradients critic_grads = policy.critic().zero_gradients();

  LossStats stats;
  long minibatches = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the run's stream.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = rng.uniform_index(i);
      std::swap(order[i - 1], order[j]);
    }
    for (Eigen::Index start = 0; start < n; start += config.batch_size) {
      const Eigen::Index count = std::min<Eigen::Index>(config.batch_size,
                                                        n - start);
      Batch batch;
      batch.observations.resize(buffer.observations.rows(), count);
      batch.actions.resize(buffer.actions.rows(), count);
      batch.log_probs_old.resize(count);
      batch.advantages.resize(count);
      batch.returns.resize(count);
      for (Eigen::Index k = 0; k < count; ++k) {
        const Eigen::Index idx = order[static_cast<std::size_t>(start + k)];
        batch.observations.col(k) = buffer.observations.col(idx);
        batch.actions.col(k) = buffer.actions.col(idx);
        batch.log_probs_old[k] = buffer.log_probs[idx];
        batch.advantages[k] = normalized[idx];
        batch.returns[k] = buffer.returns[idx];
      }

      actor_grads.set_zero();
      critic_grads.set_zero();
      const LossTerms terms = ppo_loss_and_gradients(policy, batch, config,
                                                     actor_grads,
                                                     critic_grads);
      if (!std::isfinite(terms.total))
        throw NonFiniteLoss("non-finite PPO loss (policy " +
                            std::to_string(terms.policy_loss) + ", value " +
                            std::to_string(terms.value_loss) + ")");
      nn::clip_global_norm({&actor_grads, &critic_grads},
                           config.max_grad_norm);
      actor_opt.step(policy.actor(), actor_grads);
      critic_opt.step(policy.critic(), critic_grads);

      stats.policy_loss += terms.policy_loss;
      stats.value_loss += terms.value_loss;
      stats.entropy += terms.entropy;
      ++minibatches;
    }
  }
  stats.policy_loss /= static_cast<double>(minibatches);
  stats.value_loss /= static_cast<double>(minibatches);
  stats.entropy /= static_cast<double>(minibatches);
  return stats;
}

TrainResult train(rl::GenerationEnv& env, const PpoConfig& config, Rng& rng) {
  TrainResult result;
  result.policy = Policy(env.domain().schema().id, env.obs_len(),
                         env.action_sizes(), rng);
  nn::Adam actor_opt(result.policy.actor(), config.learning_rate);
  nn::Adam critic_opt(result.policy.critic(), config.learning_rate);

  RolloutBuffer buffer(env.obs_len(),
                       static_cast<Eigen::Index>(env.action_sizes().size()),
                       config.n_steps);

  Eigen::VectorXd obs = env.reset(rng);
  double episode_return = 0.0;
  std::vector<double> window;
  double last_mean_reward = 0.0;

  long steps_done = 0;
  while (steps_done < config.total_steps) {
    for (Eigen::Index t = 0; t < config.n_steps; ++t) {
      const Policy::ActResult act = result.policy.act_with_value(obs, rng);
      const rl::StepOutcome out = env.step(act.action);

      buffer.observations.col(t) = obs;
      for (std::size_t d = 0; d < act.action.size(); ++d)
        buffer.actions(static_cast<Eigen::Index>(d), t) = act.action[d];
      buffer.log_probs[t] = act.logp;
      buffer.rewards[t] = out.reward;
      buffer.values[t] = act.value;
      buffer.dones[t] = out.done ? 1.0 : 0.0;

      episode_return += out.reward;
      if (out.done) {
        window.push_back(episode_return);
        episode_return = 0.0;
        obs = env.reset(rng);
      } else {
        obs = out.observation;
      }
    }

    const double bootstrap = result.policy.values(obs)(0);
    compute_gae(buffer, config.gamma, config.gae_lambda, bootstrap);
    const LossStats stats =
        ppo_update(result.policy, buffer, config, actor_opt, critic_opt, rng);
    steps_done += config.n_steps;

    if (!window.empty()) {
      last_mean_reward = std::accumulate(window.begin(), window.end(), 0.0) /
                         static_cast<double>(window.size());
      window.clear();
    }
    result.log.push_back({steps_done, last_mean_reward, stats.policy_loss,
                          stats.value_loss, stats.entropy});
  }
  return result;
}

void save_policy(const Policy& policy, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kMagic, 4);
  write_u32(out, kFormatVersion);

  nlohmann::json header;
  header["format_version"] = kFormatVersion;
  header["schema_id"] = policy.schema_id();
  header["obs_len"] = policy.obs_len();
  header["action_dims"] = policy.action_dims();
  header["hidden"] = policy.hidden();
  const std::string header_text = header.dump();
  write_u32(out, static_cast<std::uint32_t>(header_text.size()));
  out.write(header_text.data(),
            static_cast<std::streamsize>(header_text.size()));

  const auto dump_net = [&](const nn::Mlp& net, const std::string& prefix) {
    for (std::size_t k = 0; k < net.weights().size(); ++k) {
      write_tensor(out, prefix + ".W" + std::to_string(k), net.weights()[k]);
      write_tensor(out, prefix + ".b" + std::to_string(k), net.biases()[k]);
    }
  };
  dump_net(policy.actor(), "actor");
  dump_net(policy.critic(), "critic");
}

Policy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptPolicyFile("cannot read " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != std::string(kMagic, 4))
    throw CorruptPolicyFile("bad magic in " + path.string());
  if (read_u32(in) != kFormatVersion)
    throw CorruptPolicyFile("unsupported policy format version");

  const std::uint32_t header_len = read_u32(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), header_len);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception&) {
    throw CorruptPolicyFile("unparseable policy header");
  }
  if (!header.contains("schema_id") || !header.contains("obs_len") ||
      !header.contains("action_dims") || !header.contains("hidden"))
    throw CorruptPolicyFile("incomplete policy header");
  const auto hidden = header["hidden"].get<std::vector<Eigen::Index>>();
  if (hidden.empty()) throw CorruptPolicyFile("empty hidden layout");

  Rng scratch(0);
  Policy policy(header["schema_id"].get<std::string>(),
                header["obs_len"].get<Eigen::Index>(),
                header["action_dims"].get<std::vector<int>>(), scratch,
                hidden);

  const auto load_net = [&](nn::Mlp& net, const std::string& prefix) {
    for (std::size_t k = 0; k < net.weights().size(); ++k) {
      net.weights()[k] =
          read_tensor(in, prefix + ".W" + std::to_string(k),
                      net.weights()[k].rows(), net.weights()[k].cols());
      net.biases()[k] = read_tensor(in, prefix + ".b" + std::to_string(k),
                                    net.biases()[k].size(), 1);
    }
  };
  load_net(policy.actor(), "actor");
  load_net(policy.critic(), "critic");
  return policy;
}

}  // namespace rigaa::ppo
