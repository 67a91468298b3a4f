// Command-line front end: train, eval, compare and oracle subcommands.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dlalloc/errors.hpp"
#include "dlalloc/harness/runs.hpp"

namespace {

using dlalloc::harness::RunConfig;

struct Flags {
  std::string config_path;
  std::vector<std::string> algorithms;
  std::string scenario;
  int episodes = 0;
  std::vector<std::uint64_t> seeds;
  std::string out;
  bool paper_literal = false;
  std::string checkpoint;
  bool resume = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON run config")->check(CLI::ExistingFile);
  cmd->add_option("--algo", f.algorithms,
                  "dqn, ddqn, a2c, ppo, random, greedy or myopic (repeat for compare)");
  cmd->add_option("--scenario", f.scenario, "4x3, 6x3, 7x4, toy or NxM");
  cmd->add_option("--episodes", f.episodes, "training episodes")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seeds, "seed (repeatable)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--paper-literal", f.paper_literal, "use the printed physical constants");
}

RunConfig build_config(const Flags& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    std::ostringstream text;
    text << in.rdbuf();
    cfg = dlalloc::harness::run_config_from_json(nlohmann::json::parse(text.str()));
    cfg.source_text = text.str();
  }
  if (!f.algorithms.empty()) {
    cfg.algorithms.clear();
    for (const auto& a : f.algorithms) cfg.algorithms.push_back(dlalloc::rl::algorithm_from_string(a));
  }
  if (!f.scenario.empty()) cfg.scenario = f.scenario;
  if (f.episodes > 0) cfg.episodes = f.episodes;
  if (!f.seeds.empty()) cfg.seeds = f.seeds;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.paper_literal) cfg.paper_literal = true;
  cfg.resolve();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Downlink allocation: train, evaluate and compare agents"};
  app.require_subcommand(1);
  Flags f;
  auto* train = app.add_subcommand("train", "train one algorithm over the seed list");
  add_common(train, f);
  train->add_flag("--resume", f.resume, "continue seeds from their checkpoints");
  auto* eval = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
  add_common(eval, f);
  eval->add_option("--checkpoint", f.checkpoint, "checkpoint file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* compare = app.add_subcommand("compare", "train several algorithms and chart them");
  add_common(compare, f);
  auto* oracle = app.add_subcommand("oracle", "exhaustive search against the baselines");
  add_common(oracle, f);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*train && f.algorithms.size() > 1) {
      throw dlalloc::InvalidParameter("train takes one --algo; use compare for several");
    }
    if (*oracle && f.scenario.empty() && f.config_path.empty()) f.scenario = "toy";
    const RunConfig cfg = build_config(f);
    if (*train) {
      const auto outcomes = dlalloc::harness::run_train(cfg, f.resume, &std::cerr);
      int failed = 0;
      for (const auto& o : outcomes) failed += o.failed ? 1 : 0;
      std::cout << "metrics: " << cfg.out_dir << "/metrics.csv (" << outcomes.size() - failed
                << " seeds ok, " << failed << " failed)\n";
      return failed == 0 ? 0 : 3;
    }
    if (*eval) {
      const auto s = dlalloc::harness::run_eval(f.checkpoint, cfg);
      std::cout << "episodes " << s.episodes << "  steps " << s.mean_steps << " +/- " << s.sd_steps
                << "  waste " << s.mean_waste << " +/- " << s.sd_waste << "  reward "
                << s.mean_reward << " +/- " << s.sd_reward << "  completion "
                << s.completion_rate << '\n';
      return 0;
    }
    if (*compare) {
      dlalloc::harness::run_compare(cfg, &std::cerr);
      std::cout << "comparison: " << cfg.out_dir << "/compare.csv\n";
      return 0;
    }
    dlalloc::harness::run_oracle(cfg, &std::cout);
    std::cout << "records: " << cfg.out_dir << "/oracle.csv\n";
    return 0;
  } catch (const dlalloc::CapExceeded& e) {
    std::cerr << "refusing: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
