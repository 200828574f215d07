#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace mcg {

struct MetricsRow {
  std::string run_id;
  std::uint64_t seed = 0;
  std::string env;
  std::string algo;
  std::uint64_t env_steps = 0;
  std::uint64_t episodes = 0;
  double loss = 0.0;
  double test_return_mean = 0.0;
  double test_return_std = 0.0;
  std::string task_metric_name;
  double task_metric_value = 0.0;
};

const std::string& metrics_header();
// Comma-separated row, floats with 6 significant digits, no newline.
std::string format_row(const MetricsRow& row);
// Writes the header when the file is new or empty, then appends the row with
// a single write call.
void append_row(const std::filesystem::path& path, const MetricsRow& row);

}  // namespace mcg
