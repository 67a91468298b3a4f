#ifndef DLALLOC_BASELINES_ORACLE_HPP_
#define DLALLOC_BASELINES_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "dlalloc/baselines/policies.hpp"

namespace dlalloc::baselines {

struct OracleResult {
  std::vector<std::uint64_t> best_action_sequence;  // action indices
  int best_makespan = 0;
  std::uint64_t nodes_expanded = 0;
  // False when no sequence within the horizon delivers everything; then the
  // sequence is empty and best_makespan is cfg.max_steps.
  bool completed = false;
};

// Exact minimum makespan over every action sequence of length <= horizon
// on a frozen instance, by depth-first enumeration with makespan pruning.
// Among optimal sequences the lexicographically smallest is returned.
// Throws CapExceeded when ((M+1)^N)^horizon > cap, InvalidParameter when
// horizon is outside [1, cfg.max_steps].
OracleResult exhaustive_horizon_search(const env::FrozenInstance& instance,
                                       const env::EpisodeConfig& cfg, int horizon,
                                       std::uint64_t cap = kDefaultEnumerationCap);

// Same search from an arbitrary mid-episode state of the instance.
OracleResult exhaustive_search_from(const env::FrozenInstance& instance,
                                    const env::EpisodeConfig& cfg,
                                    const env::WorldState& start, int horizon,
                                    std::uint64_t cap = kDefaultEnumerationCap);

// Best achievable makespan for every possible first action (index order).
std::vector<int> first_action_makespans(const env::FrozenInstance& instance,
                                        const env::EpisodeConfig& cfg, int horizon,
                                        std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace dlalloc::baselines

#endif  // DLALLOC_BASELINES_ORACLE_HPP_
