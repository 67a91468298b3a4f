#ifndef DLALLOC_HARNESS_METRICS_HPP_
#define DLALLOC_HARNESS_METRICS_HPP_

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "dlalloc/rl/learner.hpp"

namespace dlalloc::harness {

// One recorded point of a training curve. Reward, steps and waste are means
// over the episodes since the previous row; `episode` is the 1-based index
// of the last episode in that window.
struct MetricRow {
  std::uint64_t seed = 0;
  std::int64_t episode = 0;
  std::string algorithm;
  double total_reward = 0.0;
  double transformed_reward = 0.0;
  double steps_taken = 0.0;
  double waste_count_total = 0.0;
  double wall_time_s = 0.0;

  bool operator==(const MetricRow&) const = default;
};

inline constexpr std::string_view kMetricsSchema = "# dlalloc-metrics v1";
inline constexpr std::string_view kMetricsHeader =
    "seed,episode,algorithm,total_reward,transformed_reward,steps_taken,waste_count_total,"
    "wall_time_s";

// -log(max(|reward|, floor)).
double transform_reward(double total_reward, double floor = 1e-9);

// Round-trip-exact CSV encoding of one row.
std::string format_row(const MetricRow& row);
MetricRow parse_row(std::string_view line);

// Lines starting with '#' are skipped.
std::vector<MetricRow> read_metrics(const std::string& path);

// Append-only writer. A new file starts with the schema line and header;
// an existing one must carry the same header and is appended to. Every
// write is flushed.
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string& path);

  void write(const MetricRow& row);
  // A '#' line recording that a seed stopped early.
  void mark_failed(std::uint64_t seed, std::int64_t episode, std::string_view reason);

 private:
  std::ofstream out_;
};

// Folds episode summaries into window means.
class WindowAccumulator {
 public:
  void add(const rl::EpisodeSummary& summary);
  int count() const { return count_; }
  // Mean row for the current window; resets the window.
  MetricRow flush(std::uint64_t seed, std::int64_t episode, std::string_view algorithm,
                  double reward_floor, double wall_time_s);

 private:
  double reward_ = 0.0;
  double steps_ = 0.0;
  double waste_ = 0.0;
  int count_ = 0;
};

}  // namespace dlalloc::harness

#endif  // DLALLOC_HARNESS_METRICS_HPP_
