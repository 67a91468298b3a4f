#include "dlalloc/harness/run_config.hpp"

#include <charconv>

#include "dlalloc/errors.hpp"

namespace dlalloc::harness {

using nlohmann::json;

namespace {

bool parse_dims(const std::string& s, int& n, int& m) {
  const auto x = s.find('x');
  if (x == std::string::npos) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto r1 = std::from_chars(begin, begin + x, n);
  auto r2 = std::from_chars(begin + x + 1, end, m);
  return r1.ec == std::errc{} && r1.ptr == begin + x && r2.ec == std::errc{} &&
         r2.ptr == end && n > 0 && m > 0;
}

}  // namespace

env::EpisodeConfig scenario_config(const std::string& scenario, bool paper_literal) {
  if (scenario == "toy") {
    if (paper_literal) {
      throw InvalidParameter("scenario: the toy family has no paper-literal profile");
    }
    return env::EpisodeConfig::frozen_toy();
  }
  int n = 0;
  int m = 0;
  if (!parse_dims(scenario, n, m)) {
    throw InvalidParameter("scenario: expected 4x3, 6x3, 7x4, toy or NxM, got '" + scenario +
                           "'");
  }
  return paper_literal ? env::EpisodeConfig::paper_literal(n, m)
                       : env::EpisodeConfig::calibrated(n, m);
}

void RunConfig::validate() const {
  if (episodes < 1) throw InvalidParameter("episodes must be >= 1");
  if (seeds.empty()) throw InvalidParameter("seeds must be non-empty");
  if (algorithms.empty()) throw InvalidParameter("algorithms must be non-empty");
  if (record_every < 1) throw InvalidParameter("record_every must be >= 1");
  if (eval_every < 0) throw InvalidParameter("eval_every must be >= 0");
  if (eval_episodes < 1) throw InvalidParameter("eval_episodes must be >= 1");
  if (checkpoint_every < 0) throw InvalidParameter("checkpoint_every must be >= 0");
  if (!(reward_floor > 0.0)) throw InvalidParameter("reward_floor must be > 0");
  if (oracle_instances < 1) throw InvalidParameter("oracle_instances must be >= 1");
  if (oracle_horizon < 1) throw InvalidParameter("oracle_horizon must be >= 1");
  if (out_dir.empty()) throw InvalidParameter("out must be non-empty");
  env.validate();
  agent.validate();
}

rl::AgentConfig RunConfig::agent_for(rl::Algorithm algorithm) const {
  rl::AgentConfig base;
  base.algorithm = algorithm;
  if (rl::is_learning(algorithm)) {
    // Scenarios without a published row (the toy family, custom sizes)
    // start from the scenario (i) row.
    try {
      base = rl::AgentConfig::table_ii(algorithm, env.num_ues, env.num_stations);
    } catch (const InvalidParameter&) {
      base = rl::AgentConfig::table_ii(algorithm, 4, 3);
    }
  }
  return rl::agent_config_from_json(agent_overrides, base);
}

void RunConfig::resolve() {
  env = episode_config_from_json(env_overrides, scenario_config(scenario, paper_literal));
  if (algorithms.empty()) throw InvalidParameter("algorithms must be non-empty");
  agent = agent_for(algorithms.front());
  validate();
}

json to_json(const env::EpisodeConfig& c) {
  return json{{"num_ues", c.num_ues},
              {"num_stations", c.num_stations},
              {"bandwidth_hz", c.bandwidth_hz},
              {"noise_psd_w_per_hz", c.noise_psd_w_per_hz},
              {"step_seconds", c.step_seconds},
              {"wavelength_m", c.wavelength_m},
              {"area_m", c.area_m},
              {"max_move_m", c.max_move_m},
              {"power_range_w", {c.power_range_w.min, c.power_range_w.max}},
              {"data_range_bits", {c.data_range_bits.min, c.data_range_bits.max}},
              {"max_steps", c.max_steps},
              {"min_distance_m", c.min_distance_m},
              {"reward_time_penalty", c.reward_time_penalty},
              {"reward_waste_penalty", c.reward_waste_penalty},
              {"reward_fail_penalty", c.reward_fail_penalty}};
}

env::EpisodeConfig episode_config_from_json(const json& doc, env::EpisodeConfig c) {
  if (!doc.is_object()) throw InvalidParameter("env config must be an object");
  auto range = [](const json& v) {
    const auto pair = v.get<std::vector<double>>();
    if (pair.size() != 2) throw InvalidParameter("expected [min, max]");
    return env::Range{pair[0], pair[1]};
  };
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "num_ues") c.num_ues = value.get<int>();
      else if (key == "num_stations") c.num_stations = value.get<int>();
      else if (key == "bandwidth_hz") c.bandwidth_hz = value.get<double>();
      else if (key == "noise_psd_w_per_hz") c.noise_psd_w_per_hz = value.get<double>();
      else if (key == "step_seconds") c.step_seconds = value.get<double>();
      else if (key == "wavelength_m") c.wavelength_m = value.get<double>();
      else if (key == "area_m") c.area_m = value.get<double>();
      else if (key == "max_move_m") c.max_move_m = value.get<double>();
      else if (key == "power_range_w") c.power_range_w = range(value);
      else if (key == "data_range_bits") c.data_range_bits = range(value);
      else if (key == "max_steps") c.max_steps = value.get<int>();
      else if (key == "min_distance_m") c.min_distance_m = value.get<double>();
      else if (key == "reward_time_penalty") c.reward_time_penalty = value.get<double>();
      else if (key == "reward_waste_penalty") c.reward_waste_penalty = value.get<double>();
      else if (key == "reward_fail_penalty") c.reward_fail_penalty = value.get<double>();
      else throw InvalidParameter("unknown env config key '" + key + "'");
    } catch (const json::exception& e) {
      throw InvalidParameter("env config key '" + key + "': " + e.what());
    } catch (const InvalidParameter& e) {
      if (std::string_view(e.what()).starts_with("unknown")) throw;
      throw InvalidParameter("env config key '" + key + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

RunConfig run_config_from_json(const json& doc, RunConfig c) {
  if (!doc.is_object()) throw InvalidParameter("run config must be an object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "scenario") c.scenario = value.get<std::string>();
      else if (key == "profile") {
        const auto p = value.get<std::string>();
        if (p != "calibrated" && p != "paper_literal") {
          throw InvalidParameter("profile must be calibrated or paper_literal, got '" + p + "'");
        }
        c.paper_literal = p == "paper_literal";
      } else if (key == "algorithm") {
        c.algorithms = {rl::algorithm_from_string(value.get<std::string>())};
      } else if (key == "algorithms") {
        c.algorithms.clear();
        for (const auto& a : value) c.algorithms.push_back(rl::algorithm_from_string(a.get<std::string>()));
      } else if (key == "env") {
        if (!value.is_object()) throw InvalidParameter("must be an object");
        c.env_overrides = value;
      } else if (key == "agent") {
        if (!value.is_object()) throw InvalidParameter("must be an object");
        c.agent_overrides = value;
      } else if (key == "episodes") c.episodes = value.get<int>();
      else if (key == "record_every") c.record_every = value.get<int>();
      else if (key == "eval_every") c.eval_every = value.get<int>();
      else if (key == "eval_episodes") c.eval_episodes = value.get<int>();
      else if (key == "checkpoint_every") c.checkpoint_every = value.get<int>();
      else if (key == "seeds") c.seeds = value.get<std::vector<std::uint64_t>>();
      else if (key == "eval_seed") c.eval_seed = value.get<std::uint64_t>();
      else if (key == "out") c.out_dir = value.get<std::string>();
      else if (key == "record_wall_time") c.record_wall_time = value.get<bool>();
      else if (key == "reward_floor") c.reward_floor = value.get<double>();
      else if (key == "oracle_instances") c.oracle_instances = value.get<int>();
      else if (key == "oracle_horizon") c.oracle_horizon = value.get<int>();
      else if (key == "oracle_seed") c.oracle_seed = value.get<std::uint64_t>();
      else throw InvalidParameter("unknown run config key '" + key + "'");
    } catch (const json::exception& e) {
      throw InvalidParameter("run config key '" + key + "': " + e.what());
    } catch (const InvalidParameter& e) {
      if (std::string_view(e.what()).starts_with("unknown")) throw;
      throw InvalidParameter("run config key '" + key + "': " + e.what());
    }
  }
  return c;
}

json to_json(const RunConfig& c) {
  json algorithms = json::array();
  for (auto a : c.algorithms) algorithms.push_back(std::string(rl::to_string(a)));
  return json{{"scenario", c.scenario},
              {"profile", c.paper_literal ? "paper_literal" : "calibrated"},
              {"algorithms", algorithms},
              {"env", c.env_overrides},
              {"agent", c.agent_overrides},
              {"episodes", c.episodes},
              {"record_every", c.record_every},
              {"eval_every", c.eval_every},
              {"eval_episodes", c.eval_episodes},
              {"checkpoint_every", c.checkpoint_every},
              {"seeds", c.seeds},
              {"eval_seed", c.eval_seed},
              {"out", c.out_dir},
              {"record_wall_time", c.record_wall_time},
              {"reward_floor", c.reward_floor},
              {"oracle_instances", c.oracle_instances},
              {"oracle_horizon", c.oracle_horizon},
              {"oracle_seed", c.oracle_seed}};
}

}  // namespace dlalloc::harness
