#ifndef DLALLOC_ENV_WORLD_HPP_
#define DLALLOC_ENV_WORLD_HPP_

#include <span>
#include <vector>

#include "dlalloc/env/action_codec.hpp"
#include "dlalloc/env/config.hpp"
#include "dlalloc/rng.hpp"

namespace dlalloc::env {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

struct WorldState {
  int step_index = 1;  // 1-based step about to be played
  std::vector<Point> ue_positions;
  std::vector<Point> station_positions;
  std::vector<double> remaining_bits;
  std::vector<double> powers_w;
  std::vector<double> gains;       // N x M row-major, gains[i * M + v]
  std::vector<int> finish_step;    // first step at which D_i hit 0, else 0
  bool terminal = false;

  int num_ues() const { return static_cast<int>(ue_positions.size()); }
  int num_stations() const { return static_cast<int>(station_positions.size()); }
  double gain(int ue, int station) const {
    return gains[static_cast<std::size_t>(ue * num_stations() + station)];
  }
  bool all_delivered() const;

  bool operator==(const WorldState&) const = default;
};

struct StepOutcome {
  double reward = 0.0;
  std::vector<double> per_ue_rate_bps;
  int waste_count = 0;
  bool done = false;
  bool truncated = false;
  std::vector<int> per_ue_finish_step;
};

// Action-independent draws applied at the end of a step: the UE positions
// after mobility and the freshly sampled powers.
struct ExogenousDraw {
  std::vector<Point> ue_positions;
  std::vector<double> powers_w;
};

WorldState reset_episode(const EpisodeConfig& cfg, Rng& rng);

void recompute_gains(WorldState& state, const EpisodeConfig& cfg);

// Moves `p` by (dx, dy) and clamps each coordinate to [0, area_m].
Point displace(Point p, double dx, double dy, const EpisodeConfig& cfg);

// Independent uniform displacement in [-max_move, max_move] per axis,
// clamped to the map.
void mobility_update(std::span<Point> positions, const EpisodeConfig& cfg,
                     Rng& rng);

ExogenousDraw draw_exogenous(const WorldState& state, const EpisodeConfig& cfg,
                             Rng& rng);

// One step: drain data, score, then apply `next` and recompute gains.
// Reward = -time * [any data at step start]
//          -waste * #(assigned UEs with no data at step start)
//          -fail * [last allowed step ends with data remaining]
StepOutcome apply_step(WorldState& state, std::span<const int> assignment,
                       const EpisodeConfig& cfg, const ExogenousDraw& next);

StepOutcome apply_step(WorldState& state, std::span<const int> assignment,
                       const EpisodeConfig& cfg, Rng& rng);

// State vector of length N(M+2):
//   [0, N)           D_i / data_range.max
//   [N, N + N*M)     gains row-major (UE-major), (log10 g - lo) / (hi - lo)
//                    where hi/lo are the gains at min_distance and at the
//                    map diagonal, so in-map values fall in [0, 1]
//   [N + N*M, end)   (p_i - p_min) / (p_max - p_min), 0 if the range is empty
std::vector<double> encode_state(const WorldState& state,
                                 const EpisodeConfig& cfg);
void encode_state_into(const WorldState& state, const EpisodeConfig& cfg,
                       std::span<double> out);

}  // namespace dlalloc::env

#endif  // DLALLOC_ENV_WORLD_HPP_
