#ifndef DLALLOC_HARNESS_RUNS_HPP_
#define DLALLOC_HARNESS_RUNS_HPP_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "dlalloc/baselines/oracle.hpp"
#include "dlalloc/harness/metrics.hpp"
#include "dlalloc/harness/run_config.hpp"

namespace dlalloc::harness {

struct EvalSummary {
  int episodes = 0;
  double mean_steps = 0.0;
  double sd_steps = 0.0;
  double mean_waste = 0.0;
  double sd_waste = 0.0;
  double mean_reward = 0.0;
  double sd_reward = 0.0;
  double completion_rate = 0.0;
};

// Greedy rollouts of `learner` over `episodes` fresh episodes drawn from an
// environment seeded with `seed`.
EvalSummary evaluate(rl::Learner& learner, const env::EpisodeConfig& env_cfg, int episodes,
                     std::uint64_t seed);

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::int64_t episodes = 0;  // trained episodes when the seed stopped
  bool failed = false;
  std::string error;
};

// Trains cfg.algorithms.front() once per seed. Writes into cfg.out_dir:
//   config.json          resolved config (plus config.source, the input file)
//   metrics.csv          one MetricRow per record_every episodes per seed
//   eval_progress.csv    greedy evaluations every eval_every episodes
//   checkpoints/<algo>_seed<k>.json, refreshed every checkpoint_every episodes
// With `resume`, a seed whose checkpoint exists continues from it.
std::vector<SeedOutcome> run_train(const RunConfig& cfg, bool resume = false,
                                   std::ostream* log = nullptr);

// Loads a checkpoint (its algorithm and network sizes come from the file),
// evaluates it on cfg.env and writes cfg.out_dir/eval.json.
EvalSummary run_eval(const std::string& checkpoint_path, const RunConfig& cfg,
                     std::ostream* log = nullptr);

// Across-seed statistics of one metric at one recorded episode.
struct BandPoint {
  std::string algorithm;
  std::int64_t episode = 0;
  std::string metric;
  int n = 0;
  double mean = 0.0;
  double lo = 0.0;  // mean - 1.96 stderr
  double hi = 0.0;  // mean + 1.96 stderr
  double min = 0.0;
  double max = 0.0;
};

// Groups rows by (algorithm, episode) and summarizes transformed_reward,
// steps_taken and waste_count_total across seeds.
std::vector<BandPoint> aggregate(const std::vector<MetricRow>& rows);

// SVG line chart of one metric, one line and shaded band per algorithm.
std::string render_svg(const std::vector<BandPoint>& points, const std::string& metric);

// Trains every algorithm in cfg.algorithms (at least two) into
// cfg.out_dir/<algo>/, then writes cfg.out_dir/compare.csv and one SVG per
// metric. Returns the rows of every algorithm keyed by name.
std::map<std::string, std::vector<MetricRow>> run_compare(const RunConfig& cfg,
                                                          std::ostream* log = nullptr);

struct OracleRecord {
  std::uint64_t instance_seed = 0;
  baselines::OracleResult oracle;
  int greedy_makespan = 0;
  int myopic_makespan = 0;
  int random_makespan = 0;
};

// Oracle and baseline makespans on cfg.oracle_instances frozen instances
// seeded oracle_seed, oracle_seed + 1, ...; writes cfg.out_dir/oracle.csv.
// Propagates CapExceeded when the search would exceed its cap.
std::vector<OracleRecord> run_oracle(const RunConfig& cfg, std::ostream* log = nullptr);

}  // namespace dlalloc::harness

#endif  // DLALLOC_HARNESS_RUNS_HPP_
