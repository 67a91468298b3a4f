#ifndef DLALLOC_ENV_ACTION_CODEC_HPP_
#define DLALLOC_ENV_ACTION_CODEC_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace dlalloc::env {

// Per-UE station choice: 0 = idle, v in 1..M = station v.
using Assignment = std::vector<int>;

// Base-(M+1) positional code, UE 0 in the least-significant digit:
//   index = sum_i assignment[i] * (M+1)^i
std::uint64_t encode_action(std::span<const int> assignment, int num_stations);

Assignment decode_action(std::uint64_t index, int num_ues, int num_stations);

// Throws InvalidAction unless the vector has num_ues entries in [0, M].
void validate_assignment(std::span<const int> assignment, int num_ues,
                         int num_stations);

}  // namespace dlalloc::env

#endif  // DLALLOC_ENV_ACTION_CODEC_HPP_
