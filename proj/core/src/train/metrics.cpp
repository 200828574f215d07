#include "mcg/train/metrics.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace mcg {

namespace {

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

const std::string& metrics_header() {
  static const std::string header =
      "run_id,seed,env,algo,env_steps,episodes,loss,test_return_mean,test_return_std,"
      "task_metric_name,task_metric_value";
  return header;
}

std::string format_row(const MetricsRow& row) {
  return row.run_id + "," + std::to_string(row.seed) + "," + row.env + "," + row.algo + "," +
         std::to_string(row.env_steps) + "," + std::to_string(row.episodes) + "," +
         g6(row.loss) + "," + g6(row.test_return_mean) + "," + g6(row.test_return_std) + "," +
         row.task_metric_name + "," + g6(row.task_metric_value);
}

void append_row(const std::filesystem::path& path, const MetricsRow& row) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::string payload;
  if (fresh) payload = metrics_header() + "\n";
  payload += format_row(row) + "\n";
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
  const auto written = ::write(fd, payload.data(), payload.size());
  ::close(fd);
  if (written != static_cast<ssize_t>(payload.size())) {
    throw std::runtime_error("short write to " + path.string());
  }
}

}  // namespace mcg
