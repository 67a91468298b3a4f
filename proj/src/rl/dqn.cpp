#include "dlalloc/rl/dqn.hpp"

#include <algorithm>
#include <utility>

#include "dlalloc/errors.hpp"
#include "dlalloc/nn/checkpoint.hpp"
#include "dlalloc/rl/targets.hpp"

namespace dlalloc::rl {

using nlohmann::json;

QLoss dqn_loss(const TransitionBatch& batch, const QNetwork& online,
               const QNetwork& target, double gamma) {
  const auto n = static_cast<Eigen::Index>(batch.actions.size());
  if (n == 0) throw InvalidParameter("dqn_loss: empty batch");

  const nn::Matrix next_q = target.q_values(batch.next_states);
  nn::ForwardCache cache;
  const nn::Matrix q = online.q_values(batch.states, &cache);

  nn::Matrix q_grad = nn::Matrix::Zero(q.rows(), q.cols());
  double loss = 0.0;
  for (Eigen::Index b = 0; b < n; ++b) {
    const auto k = static_cast<std::size_t>(b);
    const double y = batch.dones[k] ? batch.rewards[k]
                                    : batch.rewards[k] + gamma * next_q.col(b).maxCoeff();
    const auto a = static_cast<Eigen::Index>(batch.actions[k]);
    const double err = q(a, b) - y;
    loss += err * err;
    q_grad(a, b) = 2.0 * err / static_cast<double>(n);
  }
  return {loss / static_cast<double>(n), online.backward(cache, q_grad)};
}

std::optional<double> dqn_update(const ReplayBuffer& buffer, QNetwork& online,
                                 nn::Adam& optimizer, const QNetwork& target,
                                 const AgentConfig& cfg, Rng& rng) {
  const auto batch_size = static_cast<std::size_t>(cfg.batch_size);
  if (buffer.size() < batch_size) return std::nullopt;
  const TransitionBatch batch = buffer.sample(batch_size, rng);
  QLoss result = dqn_loss(batch, online, target, cfg.gamma);
  result.grads.clip_global_norm(cfg.grad_clip_norm);
  optimizer.step(online.net(), result.grads);
  return result.loss;
}

void warmup(ReplayBuffer& buffer, env::Environment& environment, int steps, Rng& rng,
            double reward_scale) {
  const std::uint64_t num_actions = environment.config().num_actions();
  environment.reset();
  std::vector<double> state = environment.observation();
  for (int k = 0; k < steps; ++k) {
    const std::uint64_t a = rng.below(num_actions);
    const auto outcome = environment.step(a);
    std::vector<double> next = environment.observation();
    buffer.push(state, a, outcome.reward * reward_scale, next, outcome.done);
    if (outcome.done) {
      environment.reset();
      state = environment.observation();
    } else {
      state = std::move(next);
    }
  }
}

DqnLearner::DqnLearner(AgentConfig cfg, env::EpisodeConfig env_cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)),
      env_cfg_(std::move(env_cfg)),
      rng_(seed ^ cfg_.init_seed_salt),
      env_(env_cfg_, rng_.split().below(UINT64_MAX)),
      buffer_(static_cast<std::size_t>(cfg_.replay_capacity), env_cfg_.state_size()) {
  if (cfg_.algorithm != Algorithm::kDqn && cfg_.algorithm != Algorithm::kDdqn) {
    throw InvalidParameter("DqnLearner: algorithm must be dqn or ddqn");
  }
  cfg_.validate();
  Rng init = rng_.split();
  online_ = QNetwork::create(static_cast<int>(env_cfg_.state_size()), cfg_.hidden,
                             static_cast<int>(env_cfg_.num_actions()),
                             cfg_.algorithm == Algorithm::kDdqn, init);
  target_ = online_;
  optimizer_ = nn::Adam(online_.net(), nn::AdamOptions{.lr = cfg_.lr});
  scratch_.resize(env_cfg_.state_size());
}

double DqnLearner::epsilon(std::int64_t episode, std::int64_t budget) const {
  const double horizon = cfg_.epsilon_decay_fraction * static_cast<double>(budget);
  if (horizon <= 0.0) return cfg_.epsilon_end;
  const double frac = std::min(1.0, static_cast<double>(episode) / horizon);
  return cfg_.epsilon_start + frac * (cfg_.epsilon_end - cfg_.epsilon_start);
}

void DqnLearner::train(int episodes, const EpisodeSink& sink) {
  if (!warmed_up_) {
    warmup(buffer_, env_, cfg_.warmup_steps, rng_, cfg_.reward_scale);
    warmed_up_ = true;
  }
  if (budget_ == 0) budget_ = episodes_ + episodes;
  std::vector<double> state(env_cfg_.state_size());
  std::vector<double> next(env_cfg_.state_size());
  for (int e = 0; e < episodes; ++e) {
    const double eps = epsilon(episodes_, budget_);
    env_.reset();
    env_.observation_into(state);
    EpisodeTally tally;
    while (!env_.done()) {
      const auto q = online_.q_values(state);
      const std::uint64_t a = epsilon_greedy(q, eps, rng_);
      const auto outcome = env_.step(a);
      env_.observation_into(next);
      buffer_.push(state, a, outcome.reward * cfg_.reward_scale, next, outcome.done);
      tally.add(outcome);
      ++env_steps_;
      if (env_steps_ % cfg_.train_every == 0) {
        for (int u = 0; u < cfg_.updates_per_round; ++u) {
          if (!dqn_update(buffer_, online_, optimizer_, target_, cfg_, rng_)) break;
          ++updates_;
          if (updates_ % cfg_.target_sync_period == 0) target_ = online_;
        }
      }
      std::swap(state, next);
    }
    ++episodes_;
    if (sink) sink(tally.summary());
  }
}

std::uint64_t DqnLearner::act_greedy(const env::WorldState& state) {
  env::encode_state_into(state, env_cfg_, scratch_);
  return argmax(online_.q_values(scratch_));
}

json DqnLearner::save() const {
  nn::ApproximatorParams online{online_.net(), optimizer_};
  return json{{"format", "dlalloc.agent"},
              {"version", 1},
              {"algorithm", std::string(to_string(cfg_.algorithm))},
              {"agent_config", to_json(cfg_)},
              {"online", nn::to_json(online)},
              {"target", nn::to_json(target_.net())},
              {"updates", updates_},
              {"env_steps", env_steps_},
              {"episodes", episodes_},
              {"episode_budget", budget_},
              {"rng", rng_.serialize()},
              {"env_rng", env_.rng().serialize()}};
}

void DqnLearner::load(const json& doc) {
  if (doc.value("format", "") != "dlalloc.agent" ||
      doc.value("algorithm", "") != to_string(cfg_.algorithm)) {
    throw InvalidParameter("checkpoint is not a " + std::string(to_string(cfg_.algorithm)) +
                           " agent");
  }
  const auto sizes = online_.net().layer_sizes();
  auto online = nn::params_from_json(doc.at("online"), sizes);
  auto target = nn::mlp_from_json(doc.at("target"), sizes);
  const bool dueling = online_.dueling();
  const int actions = online_.num_actions();
  online_ = QNetwork(std::move(online.net), dueling, actions);
  target_ = QNetwork(std::move(target), dueling, actions);
  optimizer_ = std::move(online.optimizer);
  optimizer_.set_lr(cfg_.lr);
  updates_ = doc.value("updates", std::int64_t{0});
  env_steps_ = doc.value("env_steps", std::int64_t{0});
  episodes_ = doc.value("episodes", std::int64_t{0});
  budget_ = doc.value("episode_budget", std::int64_t{0});
  if (doc.contains("rng")) rng_.deserialize(doc.at("rng").get<std::string>());
  if (doc.contains("env_rng")) env_.rng().deserialize(doc.at("env_rng").get<std::string>());
  // The replay buffer is not checkpointed; the next train() call refills it.
  warmed_up_ = false;
}

}  // namespace dlalloc::rl
