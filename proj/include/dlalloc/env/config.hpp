#ifndef DLALLOC_ENV_CONFIG_HPP_
#define DLALLOC_ENV_CONFIG_HPP_

#include <cstddef>
#include <cstdint>

namespace dlalloc::env {

struct Range {
  double min = 0.0;
  double max = 0.0;
};

// Physical, geometric and reward constants of one scenario.
//
// Penalties are stored as non-negative magnitudes; the environment
// subtracts them from the step reward.
struct EpisodeConfig {
  int num_ues = 4;
  int num_stations = 3;
  double bandwidth_hz = 10e6;
  double noise_psd_w_per_hz = 1e-13;  // -100 dBm/Hz
  double step_seconds = 5.0;
  double wavelength_m = 3.0;
  double area_m = 1000.0;
  double max_move_m = 100.0;
  Range power_range_w{0.5, 2.0};
  Range data_range_bits{100e6, 300e6};
  int max_steps = 100;
  double min_distance_m = 1.0;
  double reward_time_penalty = 1.0;
  double reward_waste_penalty = 3.0;
  double reward_fail_penalty = 100.0;

  // Throws InvalidParameter naming the first violated field.
  void validate() const;

  // (M+1)^N: each UE is idle or served by one of M stations.
  std::uint64_t num_actions() const;

  // N(M+2): remaining data, gains, powers.
  std::size_t state_size() const;

  double noise_power_w() const { return bandwidth_hz * noise_psd_w_per_hz; }

  // Default profile. Same constants as the printed scenario except for a
  // wavelength chosen so that delivering 100-300 Mb within 100 steps is
  // feasible for an untrained policy.
  static EpisodeConfig calibrated(int num_ues, int num_stations);

  // The printed constants verbatim (0.3 mm wavelength). Every episode
  // truncates under this profile.
  static EpisodeConfig paper_literal(int num_ues, int num_stations);

  // Two UEs, two stations, no mobility, fixed unit power and 50-150 Mb.
  // Every instance can finish within kToyOracleHorizon steps, which keeps
  // exhaustive search cheap. The episode budget is longer than that horizon
  // because the state carries no step counter: a truncation penalty at step
  // six would hit otherwise identical states unpredictably. The 10 m
  // wavelength makes the links interference-limited, so serving every UE
  // on its strongest station is often not optimal.
  static EpisodeConfig frozen_toy();
};

inline constexpr int kToyOracleHorizon = 6;

inline constexpr double kCalibratedWavelengthM = 3.0;
inline constexpr double kPaperWavelengthM = 3e-4;

}  // namespace dlalloc::env

#endif  // DLALLOC_ENV_CONFIG_HPP_
