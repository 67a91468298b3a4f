#ifndef DLALLOC_HARNESS_LEARNERS_HPP_
#define DLALLOC_HARNESS_LEARNERS_HPP_

#include <cstdint>
#include <memory>

#include "dlalloc/env/environment.hpp"
#include "dlalloc/rl/learner.hpp"

namespace dlalloc::harness {

// Wraps a fixed policy (random, greedy or myopic) in the Learner interface
// so the harness drives baselines and agents the same way. Training just
// plays episodes.
class BaselineLearner : public rl::Learner {
 public:
  BaselineLearner(rl::AgentConfig cfg, env::EpisodeConfig env_cfg, std::uint64_t seed);

  rl::Algorithm algorithm() const override { return cfg_.algorithm; }
  void train(int episodes, const rl::EpisodeSink& sink) override;
  std::uint64_t act_greedy(const env::WorldState& state) override;
  nlohmann::json save() const override;
  void load(const nlohmann::json& doc) override;
  std::int64_t episodes_trained() const override { return episodes_; }

 private:
  rl::AgentConfig cfg_;
  env::EpisodeConfig env_cfg_;
  Rng rng_;
  env::Environment env_;
  std::int64_t episodes_ = 0;
};

std::unique_ptr<rl::Learner> make_learner(const rl::AgentConfig& cfg,
                                          const env::EpisodeConfig& env_cfg,
                                          std::uint64_t seed);

}  // namespace dlalloc::harness

#endif  // DLALLOC_HARNESS_LEARNERS_HPP_
