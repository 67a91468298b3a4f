#include "dlalloc/harness/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "dlalloc/errors.hpp"

namespace dlalloc::harness {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <typename T>
T parse_field(std::string_view field, std::string_view name) {
  T value{};
  const auto r = std::from_chars(field.data(), field.data() + field.size(), value);
  if (r.ec != std::errc{} || r.ptr != field.data() + field.size()) {
    throw InvalidParameter("metrics: cannot parse " + std::string(name) + " from '" +
                           std::string(field) + "'");
  }
  return value;
}

}  // namespace

double transform_reward(double total_reward, double floor) {
  return -std::log(std::max(std::abs(total_reward), floor));
}

std::string format_row(const MetricRow& r) {
  std::string line = std::to_string(r.seed) + ',' + std::to_string(r.episode) + ',' +
                     r.algorithm;
  for (double v : {r.total_reward, r.transformed_reward, r.steps_taken, r.waste_count_total,
                   r.wall_time_s}) {
    line += ',';
    line += format_double(v);
  }
  return line;
}

MetricRow parse_row(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() != 8) {
    throw InvalidParameter("metrics: expected 8 fields, got " + std::to_string(fields.size()));
  }
  MetricRow r;
  r.seed = parse_field<std::uint64_t>(fields[0], "seed");
  r.episode = parse_field<std::int64_t>(fields[1], "episode");
  r.algorithm = std::string(fields[2]);
  r.total_reward = parse_field<double>(fields[3], "total_reward");
  r.transformed_reward = parse_field<double>(fields[4], "transformed_reward");
  r.steps_taken = parse_field<double>(fields[5], "steps_taken");
  r.waste_count_total = parse_field<double>(fields[6], "waste_count_total");
  r.wall_time_s = parse_field<double>(fields[7], "wall_time_s");
  return r;
}

std::vector<MetricRow> read_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("metrics: cannot open " + path);
  std::vector<MetricRow> rows;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kMetricsHeader) throw InvalidParameter("metrics: unexpected header in " + path);
      header = true;
      continue;
    }
    rows.push_back(parse_row(line));
  }
  return rows;
}

MetricsWriter::MetricsWriter(const std::string& path) {
  bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  if (!fresh) {
    std::ifstream in(path);
    std::string schema;
    std::string header;
    std::getline(in, schema);
    std::getline(in, header);
    if (schema != kMetricsSchema || header != kMetricsHeader) {
      throw InvalidParameter("metrics: " + path + " has a different schema");
    }
  }
  out_.open(path, std::ios::app);
  if (!out_) throw InvalidParameter("metrics: cannot open " + path + " for writing");
  if (fresh) out_ << kMetricsSchema << '\n' << kMetricsHeader << '\n' << std::flush;
}

void MetricsWriter::write(const MetricRow& row) { out_ << format_row(row) << '\n' << std::flush; }

void MetricsWriter::mark_failed(std::uint64_t seed, std::int64_t episode,
                                std::string_view reason) {
  out_ << "# failed seed=" << seed << " episode=" << episode << " reason=" << reason << '\n'
       << std::flush;
}

void WindowAccumulator::add(const rl::EpisodeSummary& s) {
  reward_ += s.total_reward;
  steps_ += s.steps_taken;
  waste_ += s.waste_count;
  ++count_;
}

MetricRow WindowAccumulator::flush(std::uint64_t seed, std::int64_t episode,
                                   std::string_view algorithm, double reward_floor,
                                   double wall_time_s) {
  if (count_ == 0) throw InvalidState("metrics: flushing an empty window");
  MetricRow r;
  r.seed = seed;
  r.episode = episode;
  r.algorithm = std::string(algorithm);
  r.total_reward = reward_ / count_;
  r.transformed_reward = transform_reward(r.total_reward, reward_floor);
  r.steps_taken = steps_ / count_;
  r.waste_count_total = waste_ / count_;
  r.wall_time_s = wall_time_s;
  *this = {};
  return r;
}

}  // namespace dlalloc::harness
