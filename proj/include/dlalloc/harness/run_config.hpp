#ifndef DLALLOC_HARNESS_RUN_CONFIG_HPP_
#define DLALLOC_HARNESS_RUN_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlalloc/env/config.hpp"
#include "dlalloc/rl/agent_config.hpp"

namespace dlalloc::harness {

// Everything a train, eval, compare or oracle command needs. Built from a
// config file and CLI flags by resolve(); the resolved form is what gets
// echoed into the output directory.
struct RunConfig {
  std::string scenario = "4x3";  // 4x3, 6x3, 7x3, 7x4, toy or NxM
  bool paper_literal = false;
  env::EpisodeConfig env = env::EpisodeConfig::calibrated(4, 3);
  std::vector<rl::Algorithm> algorithms{rl::Algorithm::kA2c};
  rl::AgentConfig agent;  // for algorithms.front(); compare re-resolves per algorithm
  int episodes = 5000;
  int record_every = 100;
  int eval_every = 0;  // 0 disables periodic greedy evaluation
  int eval_episodes = 100;
  int checkpoint_every = 1000;
  std::vector<std::uint64_t> seeds{0};
  std::uint64_t eval_seed = 1000003;
  std::string out_dir = "runs/default";
  bool record_wall_time = false;  // wall_time_s is 0 unless set
  double reward_floor = 1e-9;
  int oracle_instances = 100;
  int oracle_horizon = env::kToyOracleHorizon;
  std::uint64_t oracle_seed = 0;

  // Overrides applied on top of the scenario preset and Table II rows.
  nlohmann::json env_overrides = nlohmann::json::object();
  nlohmann::json agent_overrides = nlohmann::json::object();
  // Verbatim text of the config file, if any; echoed into the output.
  std::string source_text;

  // Throws InvalidParameter naming the offending field.
  void validate() const;

  // Rebuilds `env` from scenario, profile and env_overrides, and `agent`
  // from the Table II row for `algorithm` plus agent_overrides.
  void resolve();
  rl::AgentConfig agent_for(rl::Algorithm algorithm) const;
};

// Accepted keys mirror the RunConfig fields (`env` and `agent` hold the
// override objects, `algorithm` may replace `algorithms`, `profile` is
// calibrated or paper_literal). Unknown keys are errors.
RunConfig run_config_from_json(const nlohmann::json& doc, RunConfig base = {});
nlohmann::json to_json(const RunConfig& cfg);

nlohmann::json to_json(const env::EpisodeConfig& cfg);
env::EpisodeConfig episode_config_from_json(const nlohmann::json& doc,
                                            env::EpisodeConfig base);

// Scenario preset: 4x3, 6x3, 7x3, 7x4, toy, or any NxM with positive N, M.
env::EpisodeConfig scenario_config(const std::string& scenario, bool paper_literal);

}  // namespace dlalloc::harness

#endif  // DLALLOC_HARNESS_RUN_CONFIG_HPP_
