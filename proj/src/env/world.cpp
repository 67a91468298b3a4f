#include "dlalloc/env/world.hpp"

#include <algorithm>
#include <cmath>

#include "dlalloc/env/channel.hpp"
#include "dlalloc/errors.hpp"

namespace dlalloc::env {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool WorldState::all_delivered() const {
  return std::all_of(remaining_bits.begin(), remaining_bits.end(),
                     [](double d) { return d <= 0.0; });
}

void recompute_gains(WorldState& state, const EpisodeConfig& cfg) {
  const int n = state.num_ues();
  const int m = state.num_stations();
  state.gains.resize(static_cast<std::size_t>(n * m));
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < m; ++v) {
      state.gains[static_cast<std::size_t>(i * m + v)] = channel_gain(
          distance(state.ue_positions[static_cast<std::size_t>(i)],
                   state.station_positions[static_cast<std::size_t>(v)]),
          cfg);
    }
  }
}

WorldState reset_episode(const EpisodeConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.num_ues);
  const auto m = static_cast<std::size_t>(cfg.num_stations);
  WorldState s;
  s.step_index = 1;
  s.ue_positions.resize(n);
  s.station_positions.resize(m);
  for (auto& p : s.ue_positions) {
    p.x = rng.uniform(0.0, cfg.area_m);
    p.y = rng.uniform(0.0, cfg.area_m);
  }
  for (auto& p : s.station_positions) {
    p.x = rng.uniform(0.0, cfg.area_m);
    p.y = rng.uniform(0.0, cfg.area_m);
  }
  s.remaining_bits.resize(n);
  for (auto& d : s.remaining_bits) {
    d = rng.uniform(cfg.data_range_bits.min, cfg.data_range_bits.max);
  }
  s.powers_w.resize(n);
  for (auto& p : s.powers_w) {
    p = rng.uniform(cfg.power_range_w.min, cfg.power_range_w.max);
  }
  s.finish_step.assign(n, 0);
  recompute_gains(s, cfg);
  return s;
}

Point displace(Point p, double dx, double dy, const EpisodeConfig& cfg) {
  return {std::clamp(p.x + dx, 0.0, cfg.area_m), std::clamp(p.y + dy, 0.0, cfg.area_m)};
}

void mobility_update(std::span<Point> positions, const EpisodeConfig& cfg,
                     Rng& rng) {
  for (auto& p : positions) {
    const double dx = rng.uniform(-cfg.max_move_m, cfg.max_move_m);
    const double dy = rng.uniform(-cfg.max_move_m, cfg.max_move_m);
    p = displace(p, dx, dy, cfg);
  }
}

ExogenousDraw draw_exogenous(const WorldState& state, const EpisodeConfig& cfg,
                             Rng& rng) {
  ExogenousDraw next;
  next.ue_positions = state.ue_positions;
  mobility_update(next.ue_positions, cfg, rng);
  next.powers_w.resize(state.powers_w.size());
  for (auto& p : next.powers_w) {
    p = rng.uniform(cfg.power_range_w.min, cfg.power_range_w.max);
  }
  return next;
}

StepOutcome apply_step(WorldState& state, std::span<const int> assignment,
                       const EpisodeConfig& cfg, const ExogenousDraw& next) {
  if (state.terminal) throw InvalidState("apply_step: episode already finished");
  const int n = state.num_ues();
  validate_assignment(assignment, n, state.num_stations());

  StepOutcome out;
  out.per_ue_rate_bps = all_rates(assignment, state, cfg);

  bool data_at_start = false;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double before = state.remaining_bits[ui];
    if (before > 0.0) {
      data_at_start = true;
      if (assignment[ui] != 0) {
        const double after =
            std::max(0.0, before - out.per_ue_rate_bps[ui] * cfg.step_seconds);
        state.remaining_bits[ui] = after;
        if (after == 0.0) state.finish_step[ui] = state.step_index;
      }
    } else if (assignment[ui] != 0) {
      ++out.waste_count;
    }
  }

  const bool delivered = state.all_delivered();
  out.truncated = !delivered && state.step_index >= cfg.max_steps;
  out.done = delivered || out.truncated;
  out.reward = -cfg.reward_waste_penalty * out.waste_count;
  if (data_at_start) out.reward -= cfg.reward_time_penalty;
  if (out.truncated) out.reward -= cfg.reward_fail_penalty;
  out.per_ue_finish_step = state.finish_step;

  state.terminal = out.done;
  state.step_index += 1;
  state.ue_positions = next.ue_positions;
  state.powers_w = next.powers_w;
  recompute_gains(state, cfg);
  return out;
}

StepOutcome apply_step(WorldState& state, std::span<const int> assignment,
                       const EpisodeConfig& cfg, Rng& rng) {
  if (state.terminal) throw InvalidState("apply_step: episode already finished");
  validate_assignment(assignment, state.num_ues(), state.num_stations());
  return apply_step(state, assignment, cfg, draw_exogenous(state, cfg, rng));
}

void encode_state_into(const WorldState& state, const EpisodeConfig& cfg,
                       std::span<double> out) {
  const auto n = static_cast<std::size_t>(state.num_ues());
  const auto m = static_cast<std::size_t>(state.num_stations());
  if (out.size() != n * (m + 2)) {
    throw InvalidParameter("encode_state: output span has wrong length");
  }
  const double diagonal = std::max(cfg.area_m * std::sqrt(2.0), cfg.min_distance_m * 2.0);
  const double log_hi = std::log10(channel_gain(cfg.min_distance_m, cfg));
  const double log_lo = std::log10(channel_gain(diagonal, cfg));
  const double log_span = log_hi - log_lo;
  const double p_span = cfg.power_range_w.max - cfg.power_range_w.min;

  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out[k++] = state.remaining_bits[i] / cfg.data_range_bits.max;
  }
  for (std::size_t j = 0; j < n * m; ++j) {
    out[k++] = (std::log10(state.gains[j]) - log_lo) / log_span;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[k++] = p_span > 0 ? (state.powers_w[i] - cfg.power_range_w.min) / p_span : 0.0;
  }
}

std::vector<double> encode_state(const WorldState& state,
                                 const EpisodeConfig& cfg) {
  std::vector<double> out(static_cast<std::size_t>(state.num_ues()) *
                          static_cast<std::size_t>(state.num_stations() + 2));
  encode_state_into(state, cfg, out);
  return out;
}

}  // namespace dlalloc::env
