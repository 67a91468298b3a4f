#include "dlalloc/rl/agent_config.hpp"

#include <array>
#include <utility>

#include "dlalloc/errors.hpp"

namespace dlalloc::rl {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 7> kNames{{
    {Algorithm::kDqn, "dqn"},
    {Algorithm::kDdqn, "ddqn"},
    {Algorithm::kA2c, "a2c"},
    {Algorithm::kPpo, "ppo"},
    {Algorithm::kRandom, "random"},
    {Algorithm::kGreedy, "greedy"},
    {Algorithm::kMyopic, "myopic"},
}};

void require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw InvalidParameter("AgentConfig." + field + ": " + rule);
}

struct TableRow {
  double lr;
  std::vector<int> hidden;
  double entropy;
  double gae;
  double gamma;
};

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  for (const auto& [a, name] : kNames) {
    if (a == algorithm) return name;
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
  for (const auto& [a, n] : kNames) {
    if (n == name) return a;
  }
  throw InvalidParameter("unknown algorithm '" + std::string(name) + "'");
}

bool is_learning(Algorithm algorithm) {
  return algorithm == Algorithm::kDqn || algorithm == Algorithm::kDdqn ||
         algorithm == Algorithm::kA2c || algorithm == Algorithm::kPpo;
}

void AgentConfig::validate() const {
  require(lr >= 0, "lr", "must be >= 0");
  require(!hidden.empty(), "hidden", "needs at least one hidden layer");
  for (int h : hidden) require(h >= 1, "hidden", "widths must be >= 1");
  require(batch_size >= 1, "batch_size", "must be >= 1");
  require(entropy_coefficient >= 0, "entropy_coefficient", "must be >= 0");
  require(gae_lambda >= 0 && gae_lambda <= 1, "gae_lambda", "must be in [0, 1]");
  require(gamma > 0 && gamma <= 1, "gamma", "must be in (0, 1]");
  require(target_sync_period >= 1, "target_sync_period", "must be >= 1");
  require(replay_capacity >= 1, "replay_capacity", "must be >= 1");
  require(warmup_steps >= 0, "warmup_steps", "must be >= 0");
  require(train_every >= 1, "train_every", "must be >= 1");
  require(updates_per_round >= 1, "updates_per_round", "must be >= 1");
  require(epsilon_start >= 0 && epsilon_start <= 1, "epsilon_start", "must be in [0, 1]");
  require(epsilon_end >= 0 && epsilon_end <= 1, "epsilon_end", "must be in [0, 1]");
  require(epsilon_decay_fraction >= 0 && epsilon_decay_fraction <= 1,
          "epsilon_decay_fraction", "must be in [0, 1]");
  require(num_workers >= 1, "num_workers", "must be >= 1");
  require(rollout_length >= 1, "rollout_length", "must be >= 1");
  require(ppo_clip > 0 && ppo_clip < 1, "ppo_clip", "must be in (0, 1)");
  require(ppo_kl_coef >= 0, "ppo_kl_coef", "must be >= 0");
  require(ppo_epochs >= 1, "ppo_epochs", "must be >= 1");
  require(grad_clip_norm >= 0, "grad_clip_norm", "must be >= 0");
  require(reward_scale > 0, "reward_scale", "must be > 0");
  require(myopic_cap >= 1, "myopic_cap", "must be >= 1");
}

AgentConfig AgentConfig::table_ii(Algorithm algorithm, int num_ues, int num_stations) {
  AgentConfig cfg;
  cfg.algorithm = algorithm;
  if (!is_learning(algorithm)) return cfg;

  const auto scenario = std::pair{num_ues, num_stations};
  auto pick = [&](const TableRow& r43, const TableRow& r63,
                  const TableRow& r74) -> const TableRow& {
    if (scenario == std::pair{4, 3}) return r43;
    if (scenario == std::pair{6, 3} || scenario == std::pair{7, 3}) return r63;
    if (scenario == std::pair{7, 4}) return r74;
    throw InvalidParameter("no hyperparameter row for scenario " +
                           std::to_string(num_ues) + "x" + std::to_string(num_stations));
  };

  TableRow row;
  switch (algorithm) {
    case Algorithm::kDqn:
      row = pick({1e-3, {128}, 0, 0, 0.99}, {5e-4, {128}, 0, 0, 0.99},
                 {5e-4, {256}, 0, 0, 0.99});
      break;
    case Algorithm::kDdqn:
      row = pick({1e-3, {128, 64}, 0, 0, 0.99}, {5e-4, {256, 64}, 0, 0, 0.99},
                 {1e-4, {256, 64}, 0, 0, 0.99});
      break;
    case Algorithm::kA2c:
      row = pick({5e-4, {256}, 1e-3, 0.95, 0.99}, {5e-5, {512}, 1e-3, 0.95, 0.97},
                 {1e-5, {512}, 1e-3, 0.95, 0.97});
      break;
    case Algorithm::kPpo:
      row = pick({5e-4, {128}, 1e-4, 0.95, 0.99}, {1e-4, {256}, 1e-4, 0.95, 0.99},
                 {5e-5, {512}, 1e-4, 0.93, 0.95});
      break;
    default:
      break;
  }
  cfg.lr = row.lr;
  cfg.hidden = row.hidden;
  cfg.batch_size = 64;
  cfg.entropy_coefficient = row.entropy;
  cfg.gae_lambda = row.gae > 0 ? row.gae : cfg.gae_lambda;
  cfg.gamma = row.gamma;

  if (algorithm == Algorithm::kA2c) {
    cfg.rollout_length = cfg.batch_size / cfg.num_workers;
  } else if (algorithm == Algorithm::kPpo) {
    cfg.rollout_length = 128;
    cfg.normalize_advantages = true;
  }
  return cfg;
}

json to_json(const AgentConfig& c) {
  return json{{"algorithm", std::string(to_string(c.algorithm))},
              {"lr", c.lr},
              {"hidden", c.hidden},
              {"batch_size", c.batch_size},
              {"entropy_coefficient", c.entropy_coefficient},
              {"gae_lambda", c.gae_lambda},
              {"gamma", c.gamma},
              {"target_sync_period", c.target_sync_period},
              {"replay_capacity", c.replay_capacity},
              {"warmup_steps", c.warmup_steps},
              {"train_every", c.train_every},
              {"updates_per_round", c.updates_per_round},
              {"epsilon_start", c.epsilon_start},
              {"epsilon_end", c.epsilon_end},
              {"epsilon_decay_fraction", c.epsilon_decay_fraction},
              {"num_workers", c.num_workers},
              {"rollout_length", c.rollout_length},
              {"ppo_clip", c.ppo_clip},
              {"ppo_kl_coef", c.ppo_kl_coef},
              {"ppo_epochs", c.ppo_epochs},
              {"normalize_advantages", c.normalize_advantages},
              {"factored_policy", c.factored_policy},
              {"parallel_workers", c.parallel_workers},
              {"grad_clip_norm", c.grad_clip_norm},
              {"reward_scale", c.reward_scale},
              {"init_seed_salt", c.init_seed_salt},
              {"myopic_cap", c.myopic_cap}};
}

AgentConfig agent_config_from_json(const json& doc, AgentConfig c) {
  if (!doc.is_object()) throw InvalidParameter("agent config must be an object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "algorithm") c.algorithm = algorithm_from_string(value.get<std::string>());
      else if (key == "lr") c.lr = value.get<double>();
      else if (key == "hidden") c.hidden = value.get<std::vector<int>>();
      else if (key == "batch_size") c.batch_size = value.get<int>();
      else if (key == "entropy_coefficient") c.entropy_coefficient = value.get<double>();
      else if (key == "gae_lambda") c.gae_lambda = value.get<double>();
      else if (key == "gamma") c.gamma = value.get<double>();
      else if (key == "target_sync_period") c.target_sync_period = value.get<int>();
      else if (key == "replay_capacity") c.replay_capacity = value.get<int>();
      else if (key == "warmup_steps") c.warmup_steps = value.get<int>();
      else if (key == "train_every") c.train_every = value.get<int>();
      else if (key == "updates_per_round") c.updates_per_round = value.get<int>();
      else if (key == "epsilon_start") c.epsilon_start = value.get<double>();
      else if (key == "epsilon_end") c.epsilon_end = value.get<double>();
      else if (key == "epsilon_decay_fraction") c.epsilon_decay_fraction = value.get<double>();
      else if (key == "num_workers") c.num_workers = value.get<int>();
      else if (key == "rollout_length") c.rollout_length = value.get<int>();
      else if (key == "ppo_clip") c.ppo_clip = value.get<double>();
      else if (key == "ppo_kl_coef") c.ppo_kl_coef = value.get<double>();
      else if (key == "ppo_epochs") c.ppo_epochs = value.get<int>();
      else if (key == "normalize_advantages") c.normalize_advantages = value.get<bool>();
      else if (key == "factored_policy") c.factored_policy = value.get<bool>();
      else if (key == "parallel_workers") c.parallel_workers = value.get<bool>();
      else if (key == "grad_clip_norm") c.grad_clip_norm = value.get<double>();
      else if (key == "reward_scale") c.reward_scale = value.get<double>();
      else if (key == "init_seed_salt") c.init_seed_salt = value.get<std::uint64_t>();
      else if (key == "myopic_cap") c.myopic_cap = value.get<std::uint64_t>();
      else throw InvalidParameter("unknown agent config key '" + key + "'");
    } catch (const json::exception& e) {
      throw InvalidParameter("agent config key '" + key + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

}  // namespace dlalloc::rl
