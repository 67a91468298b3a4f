#ifndef DLALLOC_ENV_CHANNEL_HPP_
#define DLALLOC_ENV_CHANNEL_HPP_

#include <span>
#include <vector>

#include "dlalloc/env/config.hpp"

namespace dlalloc::env {

struct WorldState;

// Free-space path loss (lambda / (4 pi d))^2.
double path_loss(double distance_m, double wavelength_m);

// Path loss with the distance floored at cfg.min_distance_m.
double channel_gain(double distance_m, const EpisodeConfig& cfg);

// SINR of UE `ue` under `assignment` (entry 0 = idle, v >= 1 = station v).
// Every assigned UE makes its serving station radiate that UE's power;
// idle UEs radiate nothing. Throws InvalidParameter for an idle UE.
double sinr(int ue, std::span<const int> assignment, const WorldState& state,
            const EpisodeConfig& cfg);

// Shannon rate w * log2(1 + sinr) in bits/s.
double data_rate(double sinr_value, double bandwidth_hz);
double data_rate(double sinr_value, const EpisodeConfig& cfg);

// Rates of all UEs at once (0 for idle UEs), using per-station power totals.
std::vector<double> all_rates(std::span<const int> assignment,
                              const WorldState& state,
                              const EpisodeConfig& cfg);

}  // namespace dlalloc::env

#endif  // DLALLOC_ENV_CHANNEL_HPP_
