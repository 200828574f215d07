#include "mcg/cli/runner.hpp"

#include <fstream>

#include "mcg/errors.hpp"
#include "mcg/numerics/checkpoint.hpp"

namespace mcg {

std::filesystem::path seed_directory(const RunConfig& cfg, std::uint64_t seed) {
  return std::filesystem::path(cfg.out) / cfg.run_id / ("seed" + std::to_string(seed));
}

void run_seed(const RunConfig& cfg, std::uint64_t seed,
              const std::function<void(const MetricsRow&)>& on_row) {
  const auto dir = seed_directory(cfg, seed);
  std::filesystem::create_directories(dir);
  RunConfig resolved = cfg;
  resolved.seeds = {seed};
  {
    std::ofstream conf(dir / "config.toml", std::ios::trunc);
    conf << to_config_text(resolved);
    if (!conf) throw std::runtime_error("cannot write " + (dir / "config.toml").string());
  }
  const auto metrics = dir / "metrics.csv";
  std::filesystem::remove(metrics);

  TrainConfig train = cfg.train;
  train.seed = seed;
  Trainer trainer({cfg.run_id, cfg.env_name, cfg.env_options}, cfg.net, train);
  trainer.run([&](const MetricsRow& row, CoordinationNet& net) {
    append_row(metrics, row);
    save_checkpoint(dir / "checkpoint.bin", net.parameters());
    if (on_row) on_row(row);
  });
}

MetricsRow eval_checkpoint(const RunConfig& cfg, const std::filesystem::path& checkpoint,
                           std::size_t episodes, std::uint64_t seed) {
  const auto loaded = load_checkpoint(checkpoint);
  auto env = make_environment(cfg.env_name, cfg.env_options, seed);
  CoordinationNet net(net_config_for(*env, cfg.net), seed);
  try {
    restore_parameters(net.parameters(), loaded);
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(checkpoint.string() + ": " + e.what());
  }
  Rng eval_rng(seed);
  const EvalResult ev = evaluate(*env, net, episodes, eval_rng);
  MetricsRow row;
  row.run_id = cfg.run_id;
  row.seed = seed;
  row.env = cfg.env_name;
  row.algo = std::string(to_string(cfg.net.algo));
  row.test_return_mean = ev.return_mean;
  row.test_return_std = ev.return_std;
  row.task_metric_name = std::string(to_string(env->spec().metric));
  row.task_metric_value = ev.metric;
  return row;
}

}  // namespace mcg
