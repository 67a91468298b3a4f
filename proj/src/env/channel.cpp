#include "dlalloc/env/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dlalloc/env/world.hpp"
#include "dlalloc/errors.hpp"

namespace dlalloc::env {

double path_loss(double distance_m, double wavelength_m) {
  if (!(wavelength_m > 0)) throw InvalidParameter("path_loss: wavelength must be > 0");
  if (!(distance_m > 0)) throw InvalidParameter("path_loss: distance must be > 0");
  const double ratio = wavelength_m / (4.0 * std::numbers::pi * distance_m);
  return ratio * ratio;
}

double channel_gain(double distance_m, const EpisodeConfig& cfg) {
  return path_loss(std::max(distance_m, cfg.min_distance_m), cfg.wavelength_m);
}

double sinr(int ue, std::span<const int> assignment, const WorldState& state,
            const EpisodeConfig& cfg) {
  const int n = state.num_ues();
  const int m = state.num_stations();
  validate_assignment(assignment, n, m);
  if (ue < 0 || ue >= n) throw InvalidParameter("sinr: UE index out of range");
  const int serving = assignment[static_cast<std::size_t>(ue)];
  if (serving == 0) {
    throw InvalidParameter("sinr: UE " + std::to_string(ue) + " is idle");
  }
  const int v = serving - 1;
  const double own_gain = state.gain(ue, v);

  double intra = 0.0;
  double inter = 0.0;
  for (int k = 0; k < n; ++k) {
    const int s = assignment[static_cast<std::size_t>(k)];
    if (s == 0) continue;
    const double p = state.powers_w[static_cast<std::size_t>(k)];
    if (s == serving) {
      if (k != ue) intra += p;
    } else {
      inter += state.gain(ue, s - 1) * p;
    }
  }
  const double signal = own_gain * state.powers_w[static_cast<std::size_t>(ue)];
  return signal / (own_gain * intra + inter + cfg.noise_power_w());
}

double data_rate(double sinr_value, double bandwidth_hz) {
  if (sinr_value < 0 || std::isnan(sinr_value)) {
    throw InvalidParameter("data_rate: SINR must be >= 0");
  }
  return bandwidth_hz * std::log2(1.0 + sinr_value);
}

double data_rate(double sinr_value, const EpisodeConfig& cfg) {
  return data_rate(sinr_value, cfg.bandwidth_hz);
}

std::vector<double> all_rates(std::span<const int> assignment,
                              const WorldState& state,
                              const EpisodeConfig& cfg) {
  const int n = state.num_ues();
  const int m = state.num_stations();
  validate_assignment(assignment, n, m);

  std::vector<double> station_power(static_cast<std::size_t>(m), 0.0);
  for (int k = 0; k < n; ++k) {
    const int s = assignment[static_cast<std::size_t>(k)];
    if (s > 0) station_power[static_cast<std::size_t>(s - 1)] += state.powers_w[static_cast<std::size_t>(k)];
  }

  const double noise = cfg.noise_power_w();
  std::vector<double> rates(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const int s = assignment[static_cast<std::size_t>(i)];
    if (s == 0) continue;
    const int v = s - 1;
    const double p = state.powers_w[static_cast<std::size_t>(i)];
    double inter = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j != v) inter += state.gain(i, j) * station_power[static_cast<std::size_t>(j)];
    }
    const double g = state.gain(i, v);
    const double gamma =
        g * p / (g * (station_power[static_cast<std::size_t>(v)] - p) + inter + noise);
    rates[static_cast<std::size_t>(i)] = cfg.bandwidth_hz * std::log2(1.0 + gamma);
  }
  return rates;
}

}  // namespace dlalloc::env
