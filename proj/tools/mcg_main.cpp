// mcg: experiment driver for coordination-graph MARL.
//
//   mcg run    --config FILE [--override k=v]... [--seeds 0,1] [--out DIR]
//   mcg verify {grads|oracles|envs|reduction}
//   mcg eval   --checkpoint FILE --config FILE [--episodes N] [--seed S]

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "mcg/cli/config.hpp"
#include "mcg/cli/runner.hpp"
#include "mcg/errors.hpp"
#include "mcg/train/metrics.hpp"
#include "mcg/verify/suites.hpp"

namespace {

mcg::RunConfig load(const std::string& path, const std::vector<std::string>& overrides,
                    const std::string& seeds, const std::string& out) {
  mcg::KeyValues kv;
  if (!path.empty()) kv = mcg::read_config_file(path);
  for (const auto& o : overrides) {
    auto [key, value] = mcg::parse_override(o);
    std::erase_if(kv, [&](const auto& p) { return p.first == key; });
    kv.emplace_back(std::move(key), std::move(value));
  }
  mcg::RunConfig cfg = mcg::resolve_config(kv);
  if (const char* env = std::getenv("MCG_SEED"); env && *env) {
    cfg.seeds = mcg::parse_seed_list(env, "MCG_SEED");
  }
  if (!seeds.empty()) cfg.seeds = mcg::parse_seed_list(seeds, "--seeds");
  if (!out.empty()) cfg.out = out;
  return cfg;
}

int run(const mcg::RunConfig& cfg) {
  for (const auto seed : cfg.seeds) {
    std::cerr << "run " << cfg.run_id << " seed " << seed << " -> "
              << mcg::seed_directory(cfg, seed).string() << "\n";
    mcg::run_seed(cfg, seed, [](const mcg::MetricsRow& row) {
      std::cerr << "  steps " << row.env_steps << " episodes " << row.episodes << " "
                << row.task_metric_name << " " << row.task_metric_value << " return "
                << row.test_return_mean << "\n";
    });
  }
  return mcg::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta coordination graph MARL driver"};
  app.require_subcommand(1);

  std::string config, seeds, out, checkpoint, suite;
  std::vector<std::string> overrides;
  std::size_t episodes = 20;
  std::uint64_t eval_seed = 0;

  auto* run_cmd = app.add_subcommand("run", "train one run per seed");
  run_cmd->add_option("--config", config, "config file");
  run_cmd->add_option("--override", overrides, "key=value, repeatable")->take_all();
  run_cmd->add_option("--seeds", seeds, "comma-separated seed list");
  run_cmd->add_option("--out", out, "output directory");

  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("suite", suite, "grads|oracles|envs|reduction")->required();

  auto* eval_cmd = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
  eval_cmd->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  eval_cmd->add_option("--config", config, "config file")->required();
  eval_cmd->add_option("--override", overrides, "key=value, repeatable")->take_all();
  eval_cmd->add_option("--episodes", episodes, "evaluation episodes");
  eval_cmd->add_option("--seed", eval_seed, "evaluation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mcg::kExitConfig;
  }

  try {
    if (*run_cmd) return run(load(config, overrides, seeds, out));
    if (*verify_cmd) {
      const auto report = mcg::verify::run_named_suite(suite);
      mcg::verify::print_report(report, std::cout);
      return mcg::verify::all_passed(report) ? mcg::kExitOk : mcg::kExitFailure;
    }
    if (*eval_cmd) {
      const auto cfg = load(config, overrides, "", "");
      const auto row = mcg::eval_checkpoint(cfg, checkpoint, episodes, eval_seed);
      std::cout << mcg::metrics_header() << "\n" << mcg::format_row(row) << "\n";
      return mcg::kExitOk;
    }
  } catch (const mcg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return mcg::kExitConfig;
  } catch (const mcg::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return mcg::kExitCheckpoint;
  } catch (const mcg::NumericError& e) {
    std::cerr << "numeric divergence: " << e.what() << "\n";
    return mcg::kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mcg::kExitFailure;
  }
  return mcg::kExitFailure;
}
