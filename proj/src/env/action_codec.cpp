#include "dlalloc/env/action_codec.hpp"

#include <string>

#include "dlalloc/errors.hpp"

namespace dlalloc::env {

void validate_assignment(std::span<const int> assignment, int num_ues,
                         int num_stations) {
  if (static_cast<int>(assignment.size()) != num_ues) {
    throw InvalidAction("assignment has " + std::to_string(assignment.size()) +
                        " entries, expected " + std::to_string(num_ues));
  }
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] < 0 || assignment[i] > num_stations) {
      throw InvalidAction("assignment entry " + std::to_string(i) + " = " +
                          std::to_string(assignment[i]) + " outside [0, " +
                          std::to_string(num_stations) + "]");
    }
  }
}

std::uint64_t encode_action(std::span<const int> assignment, int num_stations) {
  validate_assignment(assignment, static_cast<int>(assignment.size()), num_stations);
  const auto base = static_cast<std::uint64_t>(num_stations + 1);
  std::uint64_t index = 0;
  for (auto it = assignment.rbegin(); it != assignment.rend(); ++it) {
    index = index * base + static_cast<std::uint64_t>(*it);
  }
  return index;
}

Assignment decode_action(std::uint64_t index, int num_ues, int num_stations) {
  const auto base = static_cast<std::uint64_t>(num_stations + 1);
  Assignment out(static_cast<std::size_t>(num_ues));
  for (auto& digit : out) {
    digit = static_cast<int>(index % base);
    index /= base;
  }
  if (index != 0) throw InvalidAction("action index out of range");
  return out;
}

}  // namespace dlalloc::env
