#include "dlalloc/harness/runs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlalloc/baselines/policies.hpp"
#include "dlalloc/errors.hpp"
#include "dlalloc/harness/learners.hpp"

namespace dlalloc::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd r;
  if (xs.empty()) return r;
  for (double x : xs) r.mean += x;
  r.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return r;
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return r;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidParameter("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void echo_config(const RunConfig& cfg, const fs::path& dir) {
  json doc{{"run", to_json(cfg)},
           {"resolved_env", to_json(cfg.env)},
           {"resolved_agent", rl::to_json(cfg.agent)}};
  write_text(dir / "config.json", doc.dump(2) + "\n");
  if (!cfg.source_text.empty()) write_text(dir / "config.source", cfg.source_text);
}

json summary_json(const EvalSummary& s) {
  return json{{"episodes", s.episodes},
              {"mean_steps", s.mean_steps},
              {"sd_steps", s.sd_steps},
              {"mean_waste", s.mean_waste},
              {"sd_waste", s.sd_waste},
              {"mean_reward", s.mean_reward},
              {"sd_reward", s.sd_reward},
              {"completion_rate", s.completion_rate}};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Last recorded episode per seed, so a resumed run does not repeat rows.
std::map<std::uint64_t, std::int64_t> recorded_episodes(const fs::path& metrics,
                                                        std::string_view algorithm) {
  std::map<std::uint64_t, std::int64_t> last;
  if (!fs::exists(metrics)) return last;
  for (const auto& row : read_metrics(metrics.string())) {
    if (row.algorithm != algorithm) continue;
    last[row.seed] = std::max(last[row.seed], row.episode);
  }
  return last;
}

}  // namespace

EvalSummary evaluate(rl::Learner& learner, const env::EpisodeConfig& env_cfg, int episodes,
                     std::uint64_t seed) {
  if (episodes < 1) throw InvalidParameter("eval episodes must be >= 1");
  env::Environment environment(env_cfg, seed);
  std::vector<double> steps;
  std::vector<double> waste;
  std::vector<double> reward;
  int completed = 0;
  for (int e = 0; e < episodes; ++e) {
    environment.reset();
    rl::EpisodeTally tally;
    while (!environment.done()) tally.add(environment.step(learner.act_greedy(environment.state())));
    const auto& s = tally.summary();
    steps.push_back(s.steps_taken);
    waste.push_back(s.waste_count);
    reward.push_back(s.total_reward);
    completed += s.completed ? 1 : 0;
  }
  EvalSummary r;
  r.episodes = episodes;
  const auto st = mean_sd(steps);
  const auto wa = mean_sd(waste);
  const auto re = mean_sd(reward);
  r.mean_steps = st.mean;
  r.sd_steps = st.sd;
  r.mean_waste = wa.mean;
  r.sd_waste = wa.sd;
  r.mean_reward = re.mean;
  r.sd_reward = re.sd;
  r.completion_rate = static_cast<double>(completed) / episodes;
  return r;
}

std::vector<SeedOutcome> run_train(const RunConfig& cfg, bool resume, std::ostream* log) {
  cfg.validate();
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir / "checkpoints");
  const fs::path metrics_path = dir / "metrics.csv";
  if (!resume && fs::exists(metrics_path)) {
    throw InvalidParameter("out: " + metrics_path.string() +
                           " already exists; pass --resume or choose a new directory");
  }
  echo_config(cfg, dir);
  const std::string algo(rl::to_string(cfg.agent.algorithm));
  const auto recorded = recorded_episodes(metrics_path, algo);
  MetricsWriter writer(metrics_path.string());
  const fs::path eval_path = dir / "eval_progress.csv";
  std::ofstream eval_out;
  if (cfg.eval_every > 0) {
    const bool fresh = !fs::exists(eval_path);
    eval_out.open(eval_path, std::ios::app);
    if (fresh) {
      eval_out << "seed,episode,algorithm,mean_steps,sd_steps,mean_waste,sd_waste,mean_reward,"
                  "sd_reward,completion_rate\n";
    }
  }

  std::vector<SeedOutcome> outcomes;
  for (const std::uint64_t seed : cfg.seeds) {
    SeedOutcome outcome;
    outcome.seed = seed;
    const fs::path ckpt = dir / "checkpoints" / (algo + "_seed" + std::to_string(seed) + ".json");
    auto learner = make_learner(cfg.agent, cfg.env, seed);
    learner->set_episode_budget(cfg.episodes);
    if (resume && fs::exists(ckpt)) learner->load(json::parse(read_text(ckpt)));
    const auto already = recorded.find(seed);
    const std::int64_t skip_through = already == recorded.end() ? 0 : already->second;

    WindowAccumulator window;
    std::int64_t episode = learner->episodes_trained();
    const auto start = std::chrono::steady_clock::now();
    auto sink = [&](const rl::EpisodeSummary& s) {
      window.add(s);
      ++episode;
      if (episode % cfg.record_every == 0 || episode == cfg.episodes) {
        const double wall =
            cfg.record_wall_time
                ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
                : 0.0;
        const auto row = window.flush(seed, episode, algo, cfg.reward_floor, wall);
        if (episode > skip_through) writer.write(row);
      }
    };
    try {
      while (episode < cfg.episodes) {
        std::int64_t next = cfg.episodes;
        if (cfg.checkpoint_every > 0) {
          next = std::min(next, (episode / cfg.checkpoint_every + 1) * cfg.checkpoint_every);
        }
        if (cfg.eval_every > 0) {
          next = std::min(next, (episode / cfg.eval_every + 1) * cfg.eval_every);
        }
        learner->train(static_cast<int>(next - episode), sink);
        if (cfg.eval_every > 0 && episode % cfg.eval_every == 0) {
          const auto s = evaluate(*learner, cfg.env, cfg.eval_episodes, cfg.eval_seed);
          eval_out << seed << ',' << episode << ',' << algo << ',' << fmt(s.mean_steps) << ','
                   << fmt(s.sd_steps) << ',' << fmt(s.mean_waste) << ',' << fmt(s.sd_waste)
                   << ',' << fmt(s.mean_reward) << ',' << fmt(s.sd_reward) << ','
                   << fmt(s.completion_rate) << '\n'
                   << std::flush;
        }
        if ((cfg.checkpoint_every > 0 && episode % cfg.checkpoint_every == 0) ||
            episode == cfg.episodes) {
          write_text(ckpt, learner->save().dump() + "\n");
        }
      }
    } catch (const NumericError& e) {
      outcome.failed = true;
      outcome.error = e.what();
      writer.mark_failed(seed, episode, e.what());
      if (log) *log << algo << " seed " << seed << " failed at episode " << episode << ": "
                    << e.what() << '\n';
    }
    outcome.episodes = episode;
    if (log && !outcome.failed) {
      *log << algo << " seed " << seed << " trained " << episode << " episodes\n";
    }
    outcomes.push_back(outcome);
  }
  return outcomes;
}

EvalSummary run_eval(const std::string& checkpoint_path, const RunConfig& cfg,
                     std::ostream* log) {
  cfg.validate();
  const json doc = json::parse(read_text(checkpoint_path));
  if (doc.value("format", "") != "dlalloc.agent") {
    throw InvalidParameter(checkpoint_path + " is not an agent checkpoint");
  }
  rl::AgentConfig agent = rl::agent_config_from_json(doc.at("agent_config"), rl::AgentConfig{});
  auto learner = make_learner(agent, cfg.env, 0);
  learner->load(doc);
  const auto summary = evaluate(*learner, cfg.env, cfg.eval_episodes, cfg.eval_seed);
  fs::create_directories(cfg.out_dir);
  json out = summary_json(summary);
  out["algorithm"] = std::string(rl::to_string(agent.algorithm));
  out["checkpoint"] = checkpoint_path;
  out["eval_seed"] = cfg.eval_seed;
  write_text(fs::path(cfg.out_dir) / "eval.json", out.dump(2) + "\n");
  if (log) *log << out.dump(2) << '\n';
  return summary;
}

std::vector<BandPoint> aggregate(const std::vector<MetricRow>& rows) {
  std::map<std::pair<std::string, std::int64_t>, std::vector<const MetricRow*>> groups;
  for (const auto& r : rows) groups[{r.algorithm, r.episode}].push_back(&r);
  std::vector<BandPoint> points;
  for (const char* metric : {"transformed_reward", "steps_taken", "waste_count_total"}) {
    for (const auto& [key, group] : groups) {
      std::vector<double> xs;
      for (const auto* r : group) {
        const std::string_view m(metric);
        xs.push_back(m == "transformed_reward" ? r->transformed_reward
                     : m == "steps_taken"      ? r->steps_taken
                                               : r->waste_count_total);
      }
      const auto ms = mean_sd(xs);
      const double half = 1.96 * ms.sd / std::sqrt(static_cast<double>(xs.size()));
      points.push_back(BandPoint{key.first, key.second, metric, static_cast<int>(xs.size()),
                                 ms.mean, ms.mean - half, ms.mean + half,
                                 *std::min_element(xs.begin(), xs.end()),
                                 *std::max_element(xs.begin(), xs.end())});
    }
  }
  return points;
}

std::string render_svg(const std::vector<BandPoint>& points, const std::string& metric) {
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#e377c2"};
  constexpr double kWidth = 720.0;
  constexpr double kHeight = 420.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 150.0;
  constexpr double kTop = 30.0;
  constexpr double kBottom = 50.0;

  std::map<std::string, std::vector<const BandPoint*>> series;
  double x_min = INFINITY, x_max = -INFINITY, y_min = INFINITY, y_max = -INFINITY;
  for (const auto& p : points) {
    if (p.metric != metric) continue;
    series[p.algorithm].push_back(&p);
    x_min = std::min(x_min, static_cast<double>(p.episode));
    x_max = std::max(x_max, static_cast<double>(p.episode));
    y_min = std::min(y_min, p.lo);
    y_max = std::max(y_max, p.hi);
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (series.empty()) {
    svg << "<text x=\"20\" y=\"30\">no data for " << metric << "</text>\n</svg>\n";
    return svg.str();
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) {
    y_max += 0.5;
    y_min -= 0.5;
  }
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * ph; };

  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\""
      << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = y_min + (y_max - y_min) * k / 4.0;
    const double x = x_min + (x_max - x_min) * k / 4.0;
    char label[32];
    std::snprintf(label, sizeof label, "%.3g", y);
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(y) + 4
        << "\" text-anchor=\"end\">" << label << "</text>\n";
    std::snprintf(label, sizeof label, "%.0f", x);
    svg << "<text x=\"" << sx(x) << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\">" << label << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">episode</text>\n"
      << "<text x=\"" << kLeft << "\" y=\"" << kTop - 10 << "\">" << metric
      << " (mean, 95% band across seeds)</text>\n";

  int color = 0;
  for (const auto& [algorithm, pts] : series) {
    const char* c = kColors[color % 7];
    std::ostringstream band;
    std::ostringstream line;
    for (const auto* p : pts) band << sx(p->episode) << ',' << sy(p->hi) << ' ';
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      band << sx((*it)->episode) << ',' << sy((*it)->lo) << ' ';
    }
    for (const auto* p : pts) line << sx(p->episode) << ',' << sy(p->mean) << ' ';
    svg << "<polygon points=\"" << band.str() << "\" fill=\"" << c
        << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n"
        << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << c
        << "\" stroke-width=\"1.5\"/>\n";
    const double ly = kTop + 16.0 * (color + 1);
    svg << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kWidth - kRight + 32 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << c
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kWidth - kRight + 38 << "\" y=\"" << ly << "\">" << algorithm
        << "</text>\n";
    ++color;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::map<std::string, std::vector<MetricRow>> run_compare(const RunConfig& cfg,
                                                          std::ostream* log) {
  cfg.validate();
  if (cfg.algorithms.size() < 2) throw InvalidParameter("compare needs at least two algorithms");
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  echo_config(cfg, dir);
  std::map<std::string, std::vector<MetricRow>> by_algorithm;
  std::vector<MetricRow> all;
  for (const auto algorithm : cfg.algorithms) {
    RunConfig sub = cfg;
    sub.algorithms = {algorithm};
    sub.agent = cfg.agent_for(algorithm);
    const std::string name(rl::to_string(algorithm));
    sub.out_dir = (dir / name).string();
    run_train(sub, false, log);
    auto rows = read_metrics((dir / name / "metrics.csv").string());
    all.insert(all.end(), rows.begin(), rows.end());
    by_algorithm[name] = std::move(rows);
  }
  const auto points = aggregate(all);
  std::ostringstream csv;
  csv << "algorithm,episode,metric,n,mean,lo,hi,min,max\n";
  for (const auto& p : points) {
    csv << p.algorithm << ',' << p.episode << ',' << p.metric << ',' << p.n << ','
        << fmt(p.mean) << ',' << fmt(p.lo) << ',' << fmt(p.hi) << ',' << fmt(p.min) << ','
        << fmt(p.max) << '\n';
  }
  write_text(dir / "compare.csv", csv.str());
  for (const char* metric : {"transformed_reward", "steps_taken", "waste_count_total"}) {
    write_text(dir / (std::string(metric) + ".svg"), render_svg(points, metric));
  }
  return by_algorithm;
}

std::vector<OracleRecord> run_oracle(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const auto& env_cfg = cfg.env;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  echo_config(cfg, dir);
  std::vector<OracleRecord> records;
  std::ostringstream csv;
  csv << "instance_seed,horizon,oracle_makespan,completed,nodes_expanded,greedy_makespan,"
         "myopic_makespan,random_makespan,oracle_actions\n";
  const baselines::Policy greedy = [](const env::WorldState& s) {
    return env::encode_action(baselines::greedy_gain_policy(s), s.num_stations());
  };
  const baselines::Policy myopic = [&](const env::WorldState& s) {
    return env::encode_action(baselines::myopic_bruteforce_policy(s, env_cfg),
                              s.num_stations());
  };
  for (int k = 0; k < cfg.oracle_instances; ++k) {
    OracleRecord rec;
    rec.instance_seed = cfg.oracle_seed + static_cast<std::uint64_t>(k);
    const auto inst = env::make_frozen_instance(env_cfg, rec.instance_seed);
    rec.oracle = baselines::exhaustive_horizon_search(inst, env_cfg, cfg.oracle_horizon);
    Rng rng(rec.instance_seed);
    rec.greedy_makespan = baselines::policy_makespan(inst, env_cfg, greedy);
    rec.myopic_makespan = baselines::policy_makespan(inst, env_cfg, myopic);
    rec.random_makespan = baselines::policy_makespan(
        inst, env_cfg, [&](const env::WorldState&) { return baselines::random_policy(env_cfg, rng); });
    std::string actions;
    for (const auto a : rec.oracle.best_action_sequence) {
      if (!actions.empty()) actions += ' ';
      actions += std::to_string(a);
    }
    csv << rec.instance_seed << ',' << cfg.oracle_horizon << ',' << rec.oracle.best_makespan
        << ',' << (rec.oracle.completed ? 1 : 0) << ',' << rec.oracle.nodes_expanded << ','
        << rec.greedy_makespan << ',' << rec.myopic_makespan << ',' << rec.random_makespan
        << ',' << actions << '\n';
    records.push_back(std::move(rec));
  }
  write_text(dir / "oracle.csv", csv.str());
  if (log) {
    double o = 0, g = 0, m = 0, r = 0;
    for (const auto& rec : records) {
      o += rec.oracle.best_makespan;
      g += rec.greedy_makespan;
      m += rec.myopic_makespan;
      r += rec.random_makespan;
    }
    const double n = static_cast<double>(records.size());
    *log << "mean makespan over " << records.size() << " instances: oracle " << o / n
         << ", greedy " << g / n << ", myopic " << m / n << ", random " << r / n << '\n';
  }
  return records;
}

}  // namespace dlalloc::harness
