#ifndef DLALLOC_TESTS_TEST_SUPPORT_HPP_
#define DLALLOC_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <vector>

#include "dlalloc/env/config.hpp"
#include "dlalloc/env/world.hpp"

namespace dlalloc::testing {

// A world with hand-set gains (row-major N x M), bypassing geometry.
inline env::WorldState make_state(int num_ues, int num_stations, std::vector<double> gains,
                                  std::vector<double> powers,
                                  std::vector<double> remaining) {
  env::WorldState s;
  s.ue_positions.assign(static_cast<std::size_t>(num_ues), {});
  s.station_positions.assign(static_cast<std::size_t>(num_stations), {});
  s.gains = std::move(gains);
  s.powers_w = std::move(powers);
  s.remaining_bits = std::move(remaining);
  s.finish_step.assign(static_cast<std::size_t>(num_ues), 0);
  return s;
}

// Exogenous draw that leaves the (hand-set) world where it is.
inline env::ExogenousDraw same_place(const env::WorldState& s) {
  return {s.ue_positions, s.powers_w};
}

inline bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace dlalloc::testing

#endif  // DLALLOC_TESTS_TEST_SUPPORT_HPP_
