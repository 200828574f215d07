#include <gtest/gtest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcg/cli/config.hpp"
#include "mcg/cli/runner.hpp"
#include "mcg/errors.hpp"
#include "mcg/train/metrics.hpp"

namespace mcg {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const KeyValues& kv) {
  try {
    resolve_config(kv);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigText, SectionsCommentsAndQuotes) {
  auto kv = parse_config_text(
      "# header\n"
      "run_id = \"demo\"\n"
      "seeds = [0, 1]\n"
      "\n"
      "[env]\n"
      "name = \"hallway\"  # trailing\n"
      "[env.hallway]\n"
      "length = 4\n");
  KeyValues expected{{"run_id", "demo"}, {"seeds", "[0, 1]"}, {"env.name", "hallway"}, {"env.hallway.length", "4"}};
  EXPECT_EQ(kv, expected);
}

TEST(ConfigText, MalformedInputThrows) {
  EXPECT_THROW(parse_config_text("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[train\n"), ConfigError);
  EXPECT_THROW(parse_config_text("just words\n"), ConfigError);
  EXPECT_THROW(parse_override("novalue"), ConfigError);
  EXPECT_THROW(parse_seed_list("[1, x]"), ConfigError);
  EXPECT_THROW(read_config_file("/nonexistent/mcg.toml"), ConfigError);
}

TEST(ConfigText, ListsAndSeeds) {
  std::vector<std::string> expected{"full", "cycle"};
  EXPECT_EQ(parse_list("[\"full\", \"cycle\"]"), expected);
  std::vector<std::uint64_t> seeds{0, 1, 2, 3};
  EXPECT_EQ(parse_seed_list("0,1,2,3"), seeds);
  EXPECT_EQ(parse_seed_list("[0, 1, 2, 3]"), seeds);
}

TEST(ResolveConfig, AppliesValues) {
  auto cfg = resolve_config({{"env.name", "gather"},
                             {"algo", "dcg"},
                             {"train.lr", "0.001"},
                             {"train.total_steps", "1000"},
                             {"mcg.topologies", "[\"full\", \"cycle\"]"},
                             {"env.gather.grid", "5"}});
  EXPECT_EQ(cfg.env_name, "gather");
  EXPECT_EQ(cfg.net.algo, Algo::kDcg);
  EXPECT_EQ(cfg.train.adam.lr, 0.001);
  EXPECT_EQ(cfg.train.total_env_steps, 1000u);
  ASSERT_EQ(cfg.net.topologies.size(), 2u);
  EXPECT_EQ(cfg.net.topologies[1], TopologyKind::kCycle);
  EXPECT_EQ(cfg.env_options.at("grid"), "5");
}

TEST(ResolveConfig, ErrorsNameTheKey) {
  EXPECT_NE(error_of({{"algo", "dmcg"}}).find("env.name"), std::string::npos);
  EXPECT_NE(error_of({{"env.name", "gather"}, {"train.lrate", "1"}}).find("train.lrate"), std::string::npos);
  EXPECT_NE(error_of({{"env.name", "gather"}, {"train.gamma", "1.5"}}).find("train.gamma"), std::string::npos);
  EXPECT_NE(error_of({{"env.name", "gather"}, {"algo", "qmix"}}).find("algo"), std::string::npos);
  EXPECT_NE(error_of({{"env.name", "gather"}, {"env.gather.length", "3"}}).find("env.gather.length"),
            std::string::npos);
  EXPECT_NE(error_of({{"env.name", "gather"}, {"net.hidden_dim", "-4"}}).find("net.hidden_dim"),
            std::string::npos);
}

TEST(ResolveConfig, TextRoundTrip) {
  auto cfg = resolve_config({{"env.name", "hallway"},
                             {"algo", "dmcg_vdn"},
                             {"train.lr", "0.000123456789"},
                             {"seeds", "[4, 5]"},
                             {"env.hallway.length", "4"},
                             {"mcg.bypass", "true"}});
  auto text = to_config_text(cfg);
  auto again = resolve_config(parse_config_text(text));
  EXPECT_EQ(to_config_text(again), text);
  EXPECT_EQ(again.train.adam.lr, cfg.train.adam.lr);
  EXPECT_EQ(again.seeds, cfg.seeds);
  EXPECT_TRUE(again.net.bypass);
}

class RunnerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mcg_runner_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig climb(std::uint64_t steps) {
    auto cfg = resolve_config({{"env.name", "climb"},
                               {"algo", "dmcg"},
                               {"net.embed_dim", "8"},
                               {"net.hidden_dim", "8"},
                               {"net.payoff_hidden", "8"},
                               {"train.batch", "8"},
                               {"train.total_steps", std::to_string(steps)},
                               {"train.eval_interval", "100"}});
    cfg.out = dir_.string();
    return cfg;
  }
  fs::path dir_;
};

TEST_F(RunnerTest, WritesMetricsConfigAndCheckpoint) {
  auto cfg = climb(300);
  run_seed(cfg, 2);
  auto seed_dir = seed_directory(cfg, 2);
  EXPECT_EQ(seed_dir, dir_ / "run" / "seed2");
  std::string csv = read_file(seed_dir / "metrics.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), metrics_header());
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_TRUE(fs::exists(seed_dir / "checkpoint.bin"));
  auto written = resolve_config(read_config_file(seed_dir / "config.toml"));
  EXPECT_EQ(written.seeds, std::vector<std::uint64_t>{2});
  EXPECT_EQ(written.train.total_env_steps, 300u);

  // A second run replaces the file instead of appending to it.
  run_seed(cfg, 2);
  EXPECT_EQ(read_file(seed_dir / "metrics.csv"), csv);
}

TEST_F(RunnerTest, CheckpointEvaluationRoundTrip) {
  auto cfg = climb(200);
  std::vector<MetricsRow> rows;
  run_seed(cfg, 0, [&](const MetricsRow& r) { rows.push_back(r); });
  auto ckpt = seed_directory(cfg, 0) / "checkpoint.bin";
  MetricsRow a = eval_checkpoint(cfg, ckpt, 20, 0);
  MetricsRow b = eval_checkpoint(cfg, ckpt, 20, 0);
  EXPECT_EQ(format_row(a), format_row(b));
  EXPECT_EQ(a.test_return_mean, rows.back().test_return_mean);
  EXPECT_EQ(a.test_return_std, 0.0);

  fs::resize_file(ckpt, fs::file_size(ckpt) / 2);
  EXPECT_THROW(eval_checkpoint(cfg, ckpt, 20, 0), CheckpointError);

  auto other = cfg;
  other.net.hidden_dim = 16;
  run_seed(cfg, 0);
  EXPECT_THROW(eval_checkpoint(other, ckpt, 20, 0), CheckpointError);
}

#ifdef MCG_CLI_PATH

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome run_cli(const std::string& args) {
  std::string cmd = std::string(MCG_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) o.output.append(buf, n);
  int status = ::pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

class CliTest : public RunnerTest {
 protected:
  fs::path write_config(const std::string& text) {
    auto p = dir_ / "cfg.toml";
    std::ofstream(p) << text;
    return p;
  }
};

TEST_F(CliTest, MissingEnvNameExitsTwo) {
  auto p = write_config("algo = \"dmcg\"\n");
  auto o = run_cli("run --config " + p.string() + " --out " + dir_.string());
  EXPECT_EQ(o.code, kExitConfig);
  EXPECT_NE(o.output.find("env.name"), std::string::npos) << o.output;
}

TEST_F(CliTest, UnknownOverrideExitsTwo) {
  auto p = write_config("[env]\nname = \"climb\"\n");
  auto o = run_cli("run --config " + p.string() + " --override train.nope=3");
  EXPECT_EQ(o.code, kExitConfig);
  EXPECT_NE(o.output.find("train.nope"), std::string::npos) << o.output;
}

TEST_F(CliTest, UnknownSuiteAndBadFlagsExitTwo) {
  EXPECT_EQ(run_cli("verify everything").code, kExitConfig);
  EXPECT_EQ(run_cli("run --bogus").code, kExitConfig);
  EXPECT_EQ(run_cli("").code, kExitConfig);
}

TEST_F(CliTest, SmokeRunWritesOneMetricsFilePerSeed) {
  auto p = write_config(
      "run_id = \"smoke\"\n"
      "algo = \"dmcg\"\n"
      "[env]\nname = \"gather\"\n"
      "[train]\neval_interval = 500\neval_episodes = 5\n");
  auto start = std::chrono::steady_clock::now();
  auto o = run_cli("run --config " + p.string() + " --override train.total_steps=1000 --seeds 0,1 --out " +
                   dir_.string());
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ASSERT_EQ(o.code, kExitOk) << o.output;
  EXPECT_LT(seconds, 60.0);
  for (int s : {0, 1}) {
    auto csv = dir_ / "smoke" / ("seed" + std::to_string(s)) / "metrics.csv";
    EXPECT_TRUE(fs::exists(csv)) << csv;
  }
}

TEST_F(CliTest, DivergenceExitsThree) {
  auto p = write_config(
      "algo = \"vdn\"\n"
      "[env]\nname = \"climb\"\n"
      "[train]\nlr = 1e6\nbatch = 2\ntotal_steps = 400\neval_interval = 400\n");
  auto o = run_cli("run --config " + p.string() + " --out " + dir_.string());
  EXPECT_EQ(o.code, kExitDivergence) << o.output;
}

TEST_F(CliTest, EvalTruncatedCheckpointExitsFour) {
  auto p = write_config(
      "algo = \"dcg\"\n"
      "[env]\nname = \"climb\"\n"
      "[train]\ntotal_steps = 100\neval_interval = 100\nbatch = 4\n");
  ASSERT_EQ(run_cli("run --config " + p.string() + " --out " + dir_.string()).code, kExitOk);
  auto ckpt = dir_ / "run" / "seed0" / "checkpoint.bin";
  auto ok = run_cli("eval --checkpoint " + ckpt.string() + " --config " + p.string());
  EXPECT_EQ(ok.code, kExitOk) << ok.output;
  EXPECT_NE(ok.output.find(metrics_header()), std::string::npos);
  fs::resize_file(ckpt, 12);
  EXPECT_EQ(run_cli("eval --checkpoint " + ckpt.string() + " --config " + p.string()).code, kExitCheckpoint);
}

#endif

}  // namespace
}  // namespace mcg
