#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>

#include "mcg/cli/config.hpp"
#include "mcg/train/metrics.hpp"

namespace mcg {

// Process exit codes shared by the driver and its tests.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitCheckpoint = 4,
};

// <out>/<run_id>/seed<k>
std::filesystem::path seed_directory(const RunConfig& cfg, std::uint64_t seed);

// Trains one seed, writing metrics.csv (replaced, not appended to an earlier
// run), config.toml (resolved, with seeds = [seed]) and checkpoint.bin
// (refreshed at every evaluation). `on_row` is invoked for each row after it
// is written. Throws DivergenceError on divergence.
void run_seed(const RunConfig& cfg, std::uint64_t seed,
              const std::function<void(const MetricsRow&)>& on_row = {});

// Greedy evaluation of a saved checkpoint under `cfg`; the row's env_steps
// and episodes are zero. Throws CheckpointError on a corrupt or mismatched
// file.
MetricsRow eval_checkpoint(const RunConfig& cfg, const std::filesystem::path& checkpoint,
                           std::size_t episodes, std::uint64_t seed);

}  // namespace mcg
