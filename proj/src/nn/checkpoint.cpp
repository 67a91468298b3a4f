#include "dlalloc/nn/checkpoint.hpp"

#include <string>

#include "dlalloc/errors.hpp"

namespace dlalloc::nn {

using nlohmann::json;

std::string describe_sizes(const std::vector<int>& sizes) {
  std::string s = "[";
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (k > 0) s += ", ";
    s += std::to_string(sizes[k]);
  }
  return s + "]";
}

json to_json(const Mlp& net) {
  return json{{"format", "dlalloc.mlp"},
              {"version", kCheckpointVersion},
              {"layer_sizes", net.layer_sizes()},
              {"parameters", net.flatten()}};
}

json to_json(const ApproximatorParams& params) {
  json doc = to_json(params.net);
  const auto& o = params.optimizer.options();
  doc["adam"] = json{{"lr", o.lr},
                     {"beta1", o.beta1},
                     {"beta2", o.beta2},
                     {"eps", o.eps},
                     {"steps", params.optimizer.step_count()},
                     {"moments", params.optimizer.flatten_moments()}};
  return doc;
}

Mlp mlp_from_json(const json& doc, const std::vector<int>& expected_sizes) {
  if (!doc.is_object() || doc.value("format", "") != "dlalloc.mlp") {
    throw InvalidParameter("checkpoint: not a dlalloc.mlp document");
  }
  if (doc.value("version", -1) != kCheckpointVersion) {
    throw InvalidParameter("checkpoint: unsupported version");
  }
  const auto sizes = doc.at("layer_sizes").get<std::vector<int>>();
  if (!expected_sizes.empty() && sizes != expected_sizes) {
    throw InvalidParameter("checkpoint: layer sizes mismatch, expected " +
                           describe_sizes(expected_sizes) + " but found " +
                           describe_sizes(sizes));
  }
  Mlp net = Mlp::zeros(sizes);
  net.assign(doc.at("parameters").get<std::vector<double>>());
  return net;
}

ApproximatorParams params_from_json(const json& doc,
                                    const std::vector<int>& expected_sizes) {
  ApproximatorParams p;
  p.net = mlp_from_json(doc, expected_sizes);
  AdamOptions options;
  if (doc.contains("adam")) {
    const auto& a = doc.at("adam");
    options.lr = a.at("lr").get<double>();
    options.beta1 = a.at("beta1").get<double>();
    options.beta2 = a.at("beta2").get<double>();
    options.eps = a.at("eps").get<double>();
    p.optimizer = Adam(p.net, options);
    p.optimizer.assign_moments(a.at("moments").get<std::vector<double>>(),
                               a.at("steps").get<std::int64_t>());
  } else {
    p.optimizer = Adam(p.net, options);
  }
  return p;
}

}  // namespace dlalloc::nn
