#ifndef DLALLOC_BASELINES_POLICIES_HPP_
#define DLALLOC_BASELINES_POLICIES_HPP_

#include <cstdint>
#include <functional>

#include "dlalloc/env/config.hpp"
#include "dlalloc/env/environment.hpp"
#include "dlalloc/env/world.hpp"
#include "dlalloc/rng.hpp"

namespace dlalloc::baselines {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

// Uniform over all (M+1)^N joint actions.
std::uint64_t random_policy(const env::EpisodeConfig& cfg, Rng& rng);

// Unfinished UEs go to their highest-gain station (lowest index on ties);
// finished UEs idle.
env::Assignment greedy_gain_policy(const env::WorldState& state);

// max_i over unfinished UEs of D_i' / (r_i * step) after one hypothetical
// step, where D_i' = max(0, D_i - r_i * step). +inf if an unfinished UE
// keeps data at rate 0.
double projected_completion(const env::WorldState& state, std::span<const int> assignment,
                            const env::EpisodeConfig& cfg);

// Enumerates every joint action and returns the one with the smallest
// projected_completion (lowest index on ties). Throws CapExceeded when
// (M+1)^N > cap.
env::Assignment myopic_bruteforce_policy(const env::WorldState& state,
                                         const env::EpisodeConfig& cfg,
                                         std::uint64_t cap = kDefaultEnumerationCap);

using Policy = std::function<std::uint64_t(const env::WorldState&)>;

// Steps until all data is delivered when `policy` drives `instance`;
// cfg.max_steps if it truncates.
int policy_makespan(const env::FrozenInstance& instance, const env::EpisodeConfig& cfg,
                    const Policy& policy);

}  // namespace dlalloc::baselines

#endif  // DLALLOC_BASELINES_POLICIES_HPP_
