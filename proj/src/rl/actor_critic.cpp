#include "dlalloc/rl/actor_critic.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>
#include <utility>

#include "dlalloc/errors.hpp"
#include "dlalloc/nn/checkpoint.hpp"
#include "dlalloc/nn/distributions.hpp"
#include "dlalloc/rl/targets.hpp"

namespace dlalloc::rl {

using nlohmann::json;

namespace {

nn::Matrix stack_states(const std::vector<std::vector<double>>& states,
                        std::span<const std::size_t> rows) {
  const auto d = static_cast<Eigen::Index>(states.at(rows.front()).size());
  nn::Matrix m(d, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    m.col(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const nn::Vector>(states[rows[k]].data(), d);
  }
  return m;
}

std::span<const double> column(const nn::Matrix& m, Eigen::Index c) {
  return {m.col(c).data(), static_cast<std::size_t>(m.rows())};
}

template <typename Fn>
void run_workers(std::size_t count, bool parallel, Fn&& fn) {
  if (!parallel || count <= 1) {
    for (std::size_t w = 0; w < count; ++w) fn(w);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> threads;
  threads.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    threads.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void clip_and_step(ActorCritic& model, PolicyGradients& g, double clip_norm) {
  g.actor.clip_global_norm(clip_norm);
  g.critic.clip_global_norm(clip_norm);
  model.actor_optimizer.step(model.actor, g.actor);
  model.critic_optimizer.step(model.critic, g.critic);
}

}  // namespace

ActorCritic ActorCritic::create(int state_size, const std::vector<int>& hidden,
                                int num_actions, double lr, Rng& rng) {
  return create(state_size, hidden, PolicyHead::joint(num_actions), lr, rng);
}

ActorCritic ActorCritic::create(int state_size, const std::vector<int>& hidden,
                                PolicyHead head, double lr, Rng& rng) {
  std::vector<int> actor_sizes{state_size};
  actor_sizes.insert(actor_sizes.end(), hidden.begin(), hidden.end());
  std::vector<int> critic_sizes = actor_sizes;
  actor_sizes.push_back(head.num_logits());
  critic_sizes.push_back(1);
  ActorCritic ac;
  ac.head = head;
  ac.actor = nn::Mlp(actor_sizes, rng);
  ac.critic = nn::Mlp(critic_sizes, rng);
  ac.actor_optimizer = nn::Adam(ac.actor, {.lr = lr});
  ac.critic_optimizer = nn::Adam(ac.critic, {.lr = lr});
  return ac;
}

void normalize_advantages(std::span<double> advantages) {
  const std::size_t n = advantages.size();
  if (n < 2) return;
  const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) / n;
  double var = 0.0;
  for (double a : advantages) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / n);
  for (double& a : advantages) a = (a - mean) / (sd + 1e-8);
}

PolicyGradients a2c_gradients(const Trajectory& segment, const ActorCritic& model,
                              const AgentConfig& cfg) {
  if (!segment.consistent() || segment.size() == 0) {
    throw InvalidParameter("a2c_gradients: empty or inconsistent trajectory");
  }
  const std::vector<double> adv = gae(segment, cfg.gamma, cfg.gae_lambda);
  return a2c_gradients(segment, adv, model, cfg);
}

PolicyGradients a2c_gradients(const Trajectory& segment,
                              std::span<const double> policy_advantages,
                              const ActorCritic& model, const AgentConfig& cfg) {
  if (!segment.consistent() || segment.size() == 0 ||
      policy_advantages.size() != segment.size()) {
    throw InvalidParameter("a2c_gradients: empty or inconsistent trajectory");
  }
  const auto n = segment.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::vector<double> returns_adv = gae(segment, cfg.gamma, cfg.gae_lambda);
  const std::span<const double> adv = policy_advantages;

  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const nn::Matrix states = stack_states(segment.states, rows);

  nn::ForwardCache actor_cache;
  nn::ForwardCache critic_cache;
  const nn::Matrix logits = model.actor.forward(states, &actor_cache);
  const nn::Matrix values = model.critic.forward(states, &critic_cache);

  PolicyGradients out;
  nn::Matrix logit_grad = nn::Matrix::Zero(logits.rows(), logits.cols());
  nn::Matrix value_grad(1, values.cols());
  for (std::size_t t = 0; t < n; ++t) {
    const auto c = static_cast<Eigen::Index>(t);
    const auto dist = model.head.evaluate(column(logits, c));
    const auto a = segment.actions[t];
    out.policy_loss -= adv[t] * model.head.log_prob(dist, a) * inv_n;
    out.entropy += dist.entropy * inv_n;
    model.head.add_log_prob_grad(dist, a, -adv[t] * inv_n, logit_grad.col(c));
    model.head.add_entropy_grad(dist, -cfg.entropy_coefficient * inv_n, logit_grad.col(c));

    const double target = returns_adv[t] + segment.values[t];
    const double err = values(0, c) - target;
    out.value_loss += err * err * inv_n;
    value_grad(0, c) = 2.0 * err * inv_n;
  }
  out.policy_loss -= cfg.entropy_coefficient * out.entropy;
  out.actor = model.actor.backward(actor_cache, logit_grad);
  out.critic = model.critic.backward(critic_cache, value_grad);
  return out;
}

PolicyGradients a2c_average_gradients(std::span<const Trajectory> segments,
                                      const ActorCritic& model, const AgentConfig& cfg,
                                      bool parallel) {
  if (segments.empty()) throw InvalidParameter("a2c: no worker segments");
  std::vector<std::vector<double>> advantages;
  std::vector<double> pooled;
  for (const auto& seg : segments) {
    if (!seg.consistent()) throw InvalidParameter("a2c: inconsistent trajectory");
    advantages.push_back(gae(seg, cfg.gamma, cfg.gae_lambda));
    pooled.insert(pooled.end(), advantages.back().begin(), advantages.back().end());
  }
  if (cfg.normalize_advantages) {
    normalize_advantages(pooled);
    std::size_t offset = 0;
    for (auto& adv : advantages) {
      std::copy_n(pooled.begin() + static_cast<std::ptrdiff_t>(offset), adv.size(), adv.begin());
      offset += adv.size();
    }
  }
  std::vector<PolicyGradients> per_worker(segments.size());
  run_workers(segments.size(), parallel, [&](std::size_t w) {
    per_worker[w] = a2c_gradients(segments[w], advantages[w], model, cfg);
  });
  PolicyGradients total = std::move(per_worker.front());
  for (std::size_t w = 1; w < per_worker.size(); ++w) {
    total.actor += per_worker[w].actor;
    total.critic += per_worker[w].critic;
    total.policy_loss += per_worker[w].policy_loss;
    total.value_loss += per_worker[w].value_loss;
    total.entropy += per_worker[w].entropy;
  }
  const double inv_k = 1.0 / static_cast<double>(segments.size());
  total.actor *= inv_k;
  total.critic *= inv_k;
  total.policy_loss *= inv_k;
  total.value_loss *= inv_k;
  total.entropy *= inv_k;
  return total;
}

PolicyLosses a2c_update(std::span<const Trajectory> segments, ActorCritic& model,
                        const AgentConfig& cfg) {
  PolicyGradients g = a2c_average_gradients(segments, model, cfg, cfg.parallel_workers);
  clip_and_step(model, g, cfg.grad_clip_norm);
  return {g.policy_loss, g.value_loss, g.entropy, 0.0, 0.0};
}

PolicyLosses ppo_update(std::span<const Trajectory> segments, ActorCritic& model,
                        const AgentConfig& cfg, Rng& rng) {
  // Flatten every worker's samples into one pool.
  std::vector<std::vector<double>> states;
  std::vector<std::uint64_t> actions;
  std::vector<double> old_log_probs;
  std::vector<double> advantages;
  std::vector<double> returns;
  std::vector<std::vector<double>> behaviour;
  const bool use_kl = cfg.ppo_kl_coef > 0.0;
  for (const auto& seg : segments) {
    if (!seg.consistent()) throw InvalidParameter("ppo_update: inconsistent trajectory");
    if (use_kl && seg.behaviour_log_probs.size() != seg.size()) {
      throw InvalidParameter("ppo_update: KL penalty needs behaviour log-probabilities");
    }
    const auto adv = gae(seg, cfg.gamma, cfg.gae_lambda);
    for (std::size_t t = 0; t < seg.size(); ++t) {
      states.push_back(seg.states[t]);
      actions.push_back(seg.actions[t]);
      old_log_probs.push_back(seg.log_probs[t]);
      advantages.push_back(adv[t]);
      returns.push_back(adv[t] + seg.values[t]);
      if (use_kl) behaviour.push_back(seg.behaviour_log_probs[t]);
    }
  }
  const std::size_t n = actions.size();
  if (n == 0) throw InvalidParameter("ppo_update: no samples");

  if (cfg.normalize_advantages) normalize_advantages(advantages);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto mb_size = static_cast<std::size_t>(cfg.batch_size);

  PolicyLosses totals;
  int minibatches = 0;
  for (int epoch = 0; epoch < cfg.ppo_epochs; ++epoch) {
    for (std::size_t k = n; k > 1; --k) {
      std::swap(order[k - 1], order[static_cast<std::size_t>(rng.below(k))]);
    }
    for (std::size_t start = 0; start < n; start += mb_size) {
      const std::size_t end = std::min(n, start + mb_size);
      const std::span<const std::size_t> rows(order.data() + start, end - start);
      const double inv_b = 1.0 / static_cast<double>(rows.size());
      const nn::Matrix mb_states = stack_states(states, rows);

      nn::ForwardCache actor_cache;
      nn::ForwardCache critic_cache;
      const nn::Matrix logits = model.actor.forward(mb_states, &actor_cache);
      const nn::Matrix values = model.critic.forward(mb_states, &critic_cache);
      nn::Matrix logit_grad = nn::Matrix::Zero(logits.rows(), logits.cols());
      nn::Matrix value_grad(1, values.cols());

      PolicyLosses mb;
      for (std::size_t j = 0; j < rows.size(); ++j) {
        const std::size_t i = rows[j];
        const auto c = static_cast<Eigen::Index>(j);
        const auto dist = model.head.evaluate(column(logits, c));
        const auto a = actions[i];
        const double log_ratio = model.head.log_prob(dist, a) - old_log_probs[i];
        const double ratio = std::exp(log_ratio);
        const auto surrogate = clipped_surrogate(ratio, advantages[i], cfg.ppo_clip);
        mb.policy_loss -= surrogate.value * inv_b;
        mb.entropy += dist.entropy * inv_b;
        mb.approx_kl += (ratio - 1.0 - log_ratio) * inv_b;
        if (surrogate.clipped) mb.clip_fraction += inv_b;
        if (!surrogate.clipped) {
          // d(-rho * adv)/dz = -adv * rho * d log pi(a)/dz
          model.head.add_log_prob_grad(dist, a, -advantages[i] * ratio * inv_b,
                                       logit_grad.col(c));
        }
        model.head.add_entropy_grad(dist, -cfg.entropy_coefficient * inv_b, logit_grad.col(c));
        if (use_kl) {
          const auto& old = behaviour[i];
          // Summing over the concatenated heads gives the sum of per-head KLs.
          mb.policy_loss += cfg.ppo_kl_coef * nn::kl_divergence(old, dist.log_probs) * inv_b;
          // d KL(old || new)/dz_k = p_new_k - p_old_k, within each head
          for (std::size_t k = 0; k < dist.probs.size(); ++k) {
            logit_grad(static_cast<Eigen::Index>(k), c) +=
                cfg.ppo_kl_coef * (dist.probs[k] - std::exp(old[k])) * inv_b;
          }
        }
        const double err = values(0, c) - returns[i];
        mb.value_loss += err * err * inv_b;
        value_grad(0, c) = 2.0 * err * inv_b;
      }
      mb.policy_loss -= cfg.entropy_coefficient * mb.entropy;

      PolicyGradients g;
      g.actor = model.actor.backward(actor_cache, logit_grad);
      g.critic = model.critic.backward(critic_cache, value_grad);
      clip_and_step(model, g, cfg.grad_clip_norm);

      totals.policy_loss += mb.policy_loss;
      totals.value_loss += mb.value_loss;
      totals.entropy += mb.entropy;
      totals.approx_kl += mb.approx_kl;
      totals.clip_fraction += mb.clip_fraction;
      ++minibatches;
    }
  }
  const double inv = 1.0 / minibatches;
  totals.policy_loss *= inv;
  totals.value_loss *= inv;
  totals.entropy *= inv;
  totals.approx_kl *= inv;
  totals.clip_fraction *= inv;
  return totals;
}

Trajectory collect_segment(RolloutWorker& worker, const ActorCritic& model, int length,
                           bool keep_behaviour_log_probs,
                           std::vector<EpisodeSummary>& finished, double reward_scale) {
  Trajectory seg;
  const auto state_size = worker.environment.config().state_size();
  worker.observation.resize(state_size);
  for (int t = 0; t < length; ++t) {
    if (worker.needs_reset) {
      worker.environment.reset();
      worker.environment.observation_into(worker.observation);
      worker.tally.clear();
      worker.needs_reset = false;
    }
    const nn::Vector logits = model.actor.forward(worker.observation);
    const auto dist = model.head.evaluate({logits.data(), static_cast<std::size_t>(logits.size())});
    const std::uint64_t a = model.head.sample(dist, worker.rng);
    const double value = model.critic.forward(worker.observation)(0);

    seg.states.push_back(worker.observation);
    seg.actions.push_back(a);
    seg.values.push_back(value);
    seg.log_probs.push_back(model.head.log_prob(dist, a));
    if (keep_behaviour_log_probs) seg.behaviour_log_probs.push_back(dist.log_probs);

    const auto outcome = worker.environment.step(a);
    worker.tally.add(outcome);
    seg.rewards.push_back(outcome.reward * reward_scale);
    seg.dones.push_back(outcome.done);
    if (outcome.done) {
      finished.push_back(worker.tally.summary());
      worker.needs_reset = true;
    } else {
      worker.environment.observation_into(worker.observation);
    }
  }
  seg.bootstrap_value =
      worker.needs_reset ? 0.0 : model.critic.forward(worker.observation)(0);
  return seg;
}

ActorCriticLearner::ActorCriticLearner(AgentConfig cfg, env::EpisodeConfig env_cfg,
                                       std::uint64_t seed)
    : cfg_(std::move(cfg)), env_cfg_(std::move(env_cfg)), rng_(seed ^ cfg_.init_seed_salt) {
  if (cfg_.algorithm != Algorithm::kA2c && cfg_.algorithm != Algorithm::kPpo) {
    throw InvalidParameter("ActorCriticLearner: algorithm must be a2c or ppo");
  }
  cfg_.validate();
  env_cfg_.validate();
  Rng init = rng_.split();
  model_ = ActorCritic::create(
      static_cast<int>(env_cfg_.state_size()), cfg_.hidden,
      PolicyHead(env_cfg_.num_ues, env_cfg_.num_stations, cfg_.factored_policy), cfg_.lr, init);
  for (int w = 0; w < cfg_.num_workers; ++w) {
    Rng worker_rng = rng_.split();
    const std::uint64_t env_seed = worker_rng.below(UINT64_MAX);
    workers_.push_back(RolloutWorker{env::Environment(env_cfg_, env_seed),
                                     std::move(worker_rng), {}, {}, true});
  }
  scratch_.resize(env_cfg_.state_size());
}

void ActorCriticLearner::train(int episodes, const EpisodeSink& sink) {
  const bool keep_behaviour = cfg_.algorithm == Algorithm::kPpo && cfg_.ppo_kl_coef > 0.0;
  int reported = 0;
  auto report = [&](const EpisodeSummary& summary) {
    if (reported >= episodes) {
      pending_.push_back(summary);
      return;
    }
    ++reported;
    ++episodes_;
    if (sink) sink(summary);
  };
  std::vector<EpisodeSummary> carried;
  carried.swap(pending_);
  for (const auto& summary : carried) report(summary);

  std::vector<Trajectory> segments(workers_.size());
  std::vector<std::vector<EpisodeSummary>> finished(workers_.size());
  while (reported < episodes) {
    for (auto& f : finished) f.clear();
    run_workers(workers_.size(), cfg_.parallel_workers, [&](std::size_t w) {
      segments[w] = collect_segment(workers_[w], model_, cfg_.rollout_length,
                                    keep_behaviour, finished[w], cfg_.reward_scale);
    });
    for (const auto& list : finished) {
      for (const auto& summary : list) report(summary);
    }
    if (cfg_.algorithm == Algorithm::kA2c) {
      last_losses_ = a2c_update(segments, model_, cfg_);
    } else {
      last_losses_ = ppo_update(segments, model_, cfg_, rng_);
    }
    ++updates_;
  }
}

std::uint64_t ActorCriticLearner::act_greedy(const env::WorldState& state) {
  env::encode_state_into(state, env_cfg_, scratch_);
  const nn::Vector logits = model_.actor.forward(scratch_);
  return model_.head.mode({logits.data(), static_cast<std::size_t>(logits.size())});
}

json ActorCriticLearner::save() const {
  json worker_rngs = json::array();
  for (const auto& w : workers_) {
    worker_rngs.push_back({{"rng", w.rng.serialize()}, {"env_rng", w.environment.rng().serialize()}});
  }
  json pending = json::array();
  for (const auto& p : pending_) {
    pending.push_back({p.total_reward, p.steps_taken, p.waste_count, p.completed});
  }
  return json{{"format", "dlalloc.agent"},
              {"version", 1},
              {"algorithm", std::string(to_string(cfg_.algorithm))},
              {"agent_config", to_json(cfg_)},
              {"actor", nn::to_json(nn::ApproximatorParams{model_.actor, model_.actor_optimizer})},
              {"critic", nn::to_json(nn::ApproximatorParams{model_.critic, model_.critic_optimizer})},
              {"updates", updates_},
              {"episodes", episodes_},
              {"rng", rng_.serialize()},
              {"workers", worker_rngs},
              {"pending", pending}};
}

void ActorCriticLearner::load(const json& doc) {
  if (doc.value("format", "") != "dlalloc.agent" ||
      doc.value("algorithm", "") != to_string(cfg_.algorithm)) {
    throw InvalidParameter("checkpoint is not a " + std::string(to_string(cfg_.algorithm)) +
                           " agent");
  }
  auto actor = nn::params_from_json(doc.at("actor"), model_.actor.layer_sizes());
  auto critic = nn::params_from_json(doc.at("critic"), model_.critic.layer_sizes());
  model_.actor = std::move(actor.net);
  model_.actor_optimizer = std::move(actor.optimizer);
  model_.actor_optimizer.set_lr(cfg_.lr);
  model_.critic = std::move(critic.net);
  model_.critic_optimizer = std::move(critic.optimizer);
  model_.critic_optimizer.set_lr(cfg_.lr);
  updates_ = doc.value("updates", std::int64_t{0});
  episodes_ = doc.value("episodes", std::int64_t{0});
  if (doc.contains("rng")) rng_.deserialize(doc.at("rng").get<std::string>());
  pending_.clear();
  for (const auto& p : doc.value("pending", json::array())) {
    pending_.push_back(EpisodeSummary{p.at(0).get<double>(), p.at(1).get<int>(),
                                      p.at(2).get<int>(), p.at(3).get<bool>()});
  }
  if (doc.contains("workers") && doc.at("workers").size() == workers_.size()) {
    for (std::size_t w = 0; w < workers_.size(); ++w) {
      workers_[w].rng.deserialize(doc.at("workers")[w].at("rng").get<std::string>());
      workers_[w].environment.rng().deserialize(
          doc.at("workers")[w].at("env_rng").get<std::string>());
      workers_[w].needs_reset = true;
    }
  }
}

}  // namespace dlalloc::rl
