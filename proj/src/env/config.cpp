#include "dlalloc/env/config.hpp"

#include <cmath>
#include <string>

#include "dlalloc/errors.hpp"

namespace dlalloc::env {
namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) {
    throw InvalidParameter(std::string("EpisodeConfig.") + field + ": " + rule);
  }
}

}  // namespace

void EpisodeConfig::validate() const {
  require(num_ues >= 1, "num_ues", "must be >= 1");
  require(num_stations >= 1, "num_stations", "must be >= 1");
  require(bandwidth_hz > 0, "bandwidth_hz", "must be > 0");
  require(noise_psd_w_per_hz > 0, "noise_psd_w_per_hz", "must be > 0");
  require(step_seconds > 0, "step_seconds", "must be > 0");
  require(wavelength_m > 0, "wavelength_m", "must be > 0");
  require(area_m > 0, "area_m", "must be > 0");
  require(max_move_m >= 0, "max_move_m", "must be >= 0");
  require(power_range_w.min > 0, "power_range_w", "min must be > 0");
  require(power_range_w.max >= power_range_w.min, "power_range_w",
          "max must be >= min");
  require(data_range_bits.min > 0, "data_range_bits", "min must be > 0");
  require(data_range_bits.max >= data_range_bits.min, "data_range_bits",
          "max must be >= min");
  require(max_steps >= 1, "max_steps", "must be >= 1");
  require(min_distance_m > 0, "min_distance_m", "must be > 0");
  require(reward_time_penalty >= 0 && reward_waste_penalty >= 0 &&
              reward_fail_penalty >= 0,
          "reward_*_penalty", "penalty magnitudes must be >= 0");
  // The action index must fit in 64 bits.
  require(num_ues * std::log2(num_stations + 1.0) < 63.0, "num_ues",
          "(M+1)^N overflows the action index");
}

std::uint64_t EpisodeConfig::num_actions() const {
  std::uint64_t n = 1;
  for (int i = 0; i < num_ues; ++i) n *= static_cast<std::uint64_t>(num_stations + 1);
  return n;
}

std::size_t EpisodeConfig::state_size() const {
  return static_cast<std::size_t>(num_ues) *
         static_cast<std::size_t>(num_stations + 2);
}

EpisodeConfig EpisodeConfig::calibrated(int num_ues, int num_stations) {
  EpisodeConfig cfg;
  cfg.num_ues = num_ues;
  cfg.num_stations = num_stations;
  cfg.wavelength_m = kCalibratedWavelengthM;
  return cfg;
}

EpisodeConfig EpisodeConfig::paper_literal(int num_ues, int num_stations) {
  EpisodeConfig cfg = calibrated(num_ues, num_stations);
  cfg.wavelength_m = kPaperWavelengthM;
  return cfg;
}

EpisodeConfig EpisodeConfig::frozen_toy() {
  EpisodeConfig cfg = calibrated(2, 2);
  cfg.wavelength_m = 10.0;
  cfg.data_range_bits = {50e6, 150e6};
  cfg.max_move_m = 0.0;
  cfg.power_range_w = {1.0, 1.0};
  cfg.max_steps = 20;
  return cfg;
}

}  // namespace dlalloc::env
