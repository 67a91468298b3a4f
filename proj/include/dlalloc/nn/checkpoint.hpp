#ifndef DLALLOC_NN_CHECKPOINT_HPP_
#define DLALLOC_NN_CHECKPOINT_HPP_

#include <filesystem>

#include <json.hpp>

#include "dlalloc/nn/adam.hpp"

namespace dlalloc::nn {

inline constexpr int kCheckpointVersion = 1;

// JSON layout (version 1):
//   {
//     "format": "dlalloc.mlp",
//     "version": 1,
//     "layer_sizes": [in, h1, ..., out],
//     "parameters": [...]        // Mlp::flatten() order
//     "adam": {                  // optional
//       "lr": .., "beta1": .., "beta2": .., "eps": .., "steps": ..,
//       "moments": [...]         // m then v, Mlp::flatten() order each
//     }
//   }
nlohmann::json to_json(const Mlp& net);
nlohmann::json to_json(const ApproximatorParams& params);

// Throws InvalidParameter on format/version/shape errors. When
// expected_sizes is non-empty, a mismatch names both layer lists.
Mlp mlp_from_json(const nlohmann::json& doc,
                  const std::vector<int>& expected_sizes = {});
ApproximatorParams params_from_json(const nlohmann::json& doc,
                                    const std::vector<int>& expected_sizes = {});

std::string describe_sizes(const std::vector<int>& sizes);

}  // namespace dlalloc::nn

#endif  // DLALLOC_NN_CHECKPOINT_HPP_
