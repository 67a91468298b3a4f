#include "dlalloc/harness/learners.hpp"

#include "dlalloc/baselines/policies.hpp"
#include "dlalloc/errors.hpp"
#include "dlalloc/rl/actor_critic.hpp"
#include "dlalloc/rl/dqn.hpp"

namespace dlalloc::harness {

using nlohmann::json;

BaselineLearner::BaselineLearner(rl::AgentConfig cfg, env::EpisodeConfig env_cfg,
                                 std::uint64_t seed)
    : cfg_(std::move(cfg)),
      env_cfg_(std::move(env_cfg)),
      rng_(seed),
      env_(env_cfg_, rng_.split().below(UINT64_MAX)) {
  if (rl::is_learning(cfg_.algorithm)) {
    throw InvalidParameter("BaselineLearner: algorithm must be random, greedy or myopic");
  }
}

std::uint64_t BaselineLearner::act_greedy(const env::WorldState& state) {
  switch (cfg_.algorithm) {
    case rl::Algorithm::kRandom:
      return baselines::random_policy(env_cfg_, rng_);
    case rl::Algorithm::kGreedy:
      return env::encode_action(baselines::greedy_gain_policy(state), state.num_stations());
    default:
      return env::encode_action(
          baselines::myopic_bruteforce_policy(state, env_cfg_, cfg_.myopic_cap),
          state.num_stations());
  }
}

void BaselineLearner::train(int episodes, const rl::EpisodeSink& sink) {
  for (int e = 0; e < episodes; ++e) {
    env_.reset();
    rl::EpisodeTally tally;
    while (!env_.done()) tally.add(env_.step(act_greedy(env_.state())));
    ++episodes_;
    if (sink) sink(tally.summary());
  }
}

json BaselineLearner::save() const {
  return json{{"format", "dlalloc.agent"},
              {"version", 1},
              {"algorithm", std::string(rl::to_string(cfg_.algorithm))},
              {"agent_config", rl::to_json(cfg_)},
              {"state_size", env_cfg_.state_size()},
              {"num_actions", env_cfg_.num_actions()},
              {"episodes", episodes_},
              {"rng", rng_.serialize()},
              {"env_rng", env_.rng().serialize()}};
}

void BaselineLearner::load(const json& doc) {
  if (doc.value("format", "") != "dlalloc.agent" ||
      doc.value("algorithm", "") != rl::to_string(cfg_.algorithm)) {
    throw InvalidParameter("checkpoint is not a " + std::string(rl::to_string(cfg_.algorithm)) +
                           " agent");
  }
  const auto state_size = doc.value("state_size", std::size_t{0});
  const auto actions = doc.value("num_actions", std::uint64_t{0});
  if (state_size != env_cfg_.state_size() || actions != env_cfg_.num_actions()) {
    throw InvalidParameter("checkpoint dimensions " + std::to_string(state_size) + " -> " +
                           std::to_string(actions) + " do not match the scenario's " +
                           std::to_string(env_cfg_.state_size()) + " -> " +
                           std::to_string(env_cfg_.num_actions()));
  }
  episodes_ = doc.value("episodes", std::int64_t{0});
  rng_.deserialize(doc.at("rng").get<std::string>());
  env_.rng().deserialize(doc.at("env_rng").get<std::string>());
}

std::unique_ptr<rl::Learner> make_learner(const rl::AgentConfig& cfg,
                                          const env::EpisodeConfig& env_cfg,
                                          std::uint64_t seed) {
  switch (cfg.algorithm) {
    case rl::Algorithm::kDqn:
    case rl::Algorithm::kDdqn:
      return std::make_unique<rl::DqnLearner>(cfg, env_cfg, seed);
    case rl::Algorithm::kA2c:
    case rl::Algorithm::kPpo:
      return std::make_unique<rl::ActorCriticLearner>(cfg, env_cfg, seed);
    default:
      return std::make_unique<BaselineLearner>(cfg, env_cfg, seed);
  }
}

}  // namespace dlalloc::harness
