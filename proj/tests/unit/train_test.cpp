#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcg/envs/gather.hpp"
#include "mcg/envs/hallway.hpp"
#include "mcg/errors.hpp"
#include "mcg/train/metrics.hpp"
#include "mcg/train/replay.hpp"
#include "mcg/train/trainer.hpp"

namespace mcg {
namespace {

Parameter& find_param(CoordinationNet& net, const std::string& name) {
  for (auto* p : net.parameters()) {
    if (p->name == name) return *p;
  }
  throw std::runtime_error("no parameter " + name);
}

NetConfig climb_config(Algo algo) {
  ClimbEnv env(0);
  NetConfig base;
  base.algo = algo;
  base.embed_dim = base.hidden_dim = base.payoff_hidden = 8;
  return net_config_for(env, base);
}

// VDN net whose joint value is the constant 2·b for every input.
void make_constant(CoordinationNet& net, double b) {
  find_param(net, "utility.weight").value.set_zero();
  find_param(net, "utility.bias").value.fill(b);
}

EpisodeRecord toy_episode(std::vector<double> rewards) {
  EpisodeRecord ep;
  for (std::size_t t = 0; t < rewards.size(); ++t) {
    ep.obs.push_back(Matrix(2, 1, 1.0));
    ep.actions.push_back({t % 3, (t + 1) % 3});
    ep.rewards.push_back(rewards[t]);
    ep.terminated.push_back(t + 1 == rewards.size());
  }
  return ep;
}

TEST(TdLoss, TerminalRewardMatchingValueGivesZero) {
  CoordinationNet online(climb_config(Algo::kVdn), 1);
  CoordinationNet target(climb_config(Algo::kVdn), 1);
  make_constant(online, 2.5);
  make_constant(target, 2.5);
  EpisodeRecord ep = toy_episode({5.0});
  const EpisodeRecord* batch[] = {&ep};
  EXPECT_EQ(td_loss_and_grad(batch, online, target, 0.99), 0.0);
}

TEST(TdLoss, TwoStepHandComputed) {
  CoordinationNet online(climb_config(Algo::kVdn), 1);
  CoordinationNet target(climb_config(Algo::kVdn), 1);
  make_constant(online, 1.5);
  make_constant(target, 1.5);
  EpisodeRecord ep = toy_episode({1.0, 2.0});
  const EpisodeRecord* batch[] = {&ep};
  // Q = 3 everywhere: δ0 = 3 − (1 + 0.9·3) = −0.7, δ1 = 3 − 2 = 1.
  const double expected = (0.49 + 1.0) / 2.0;
  EXPECT_NEAR(td_loss_and_grad(batch, online, target, 0.9), expected, 1e-10);
}

TEST(TdLoss, ZeroDiscountRegressesOntoRewards) {
  CoordinationNet online(climb_config(Algo::kVdn), 1);
  CoordinationNet target(climb_config(Algo::kVdn), 1);
  make_constant(online, 1.0);
  make_constant(target, 100.0);
  EpisodeRecord ep = toy_episode({0.5, -1.0, 4.0});
  const EpisodeRecord* batch[] = {&ep};
  const double expected = (1.5 * 1.5 + 3.0 * 3.0 + 2.0 * 2.0) / 3.0;
  EXPECT_NEAR(td_loss_and_grad(batch, online, target, 0.0), expected, 1e-12);
}

TEST(TdUpdate, DivergenceThrows) {
  CoordinationNet online(climb_config(Algo::kDcg), 1);
  CoordinationNet target(climb_config(Algo::kDcg), 1);
  Adam opt(online.parameters(), AdamConfig{});
  EpisodeRecord ep = toy_episode({1e5});
  const EpisodeRecord* batch[] = {&ep};
  TrainConfig cfg;
  EXPECT_THROW(td_update(batch, online, target, opt, cfg), DivergenceError);
}

TEST(TdUpdate, ReducesLossOnFixedBatch) {
  CoordinationNet online(climb_config(Algo::kDmcg), 2);
  CoordinationNet target(climb_config(Algo::kDmcg), 2);
  TrainConfig cfg;
  cfg.adam.lr = 1e-2;
  Adam opt(online.parameters(), cfg.adam);
  EpisodeRecord ep = toy_episode({3.0});
  const EpisodeRecord* batch[] = {&ep};
  const double first = td_update(batch, online, target, opt, cfg);
  double last = first;
  for (int i = 0; i < 50; ++i) last = td_update(batch, online, target, opt, cfg);
  EXPECT_LT(last, 0.1 * first);
}

TEST(Collect, FullExplorationNeverTouchesTheNetwork) {
  CoordinationNet net(climb_config(Algo::kDmcg), 1);
  for (auto* p : net.parameters()) p->value.fill(std::nan(""));
  ClimbEnv env(3);
  Rng rng(4);
  EpisodeRecord ep = collect_episode(env, net, 1.0, rng);
  EXPECT_EQ(ep.length(), 1u);
  EXPECT_NO_THROW(ep.validate());
}

TEST(Collect, GreedyRolloutsAreReproducible) {
  HallwayEnv env_a(HallwayEnv::Config{}, 5), env_b(HallwayEnv::Config{}, 5);
  NetConfig base;
  base.embed_dim = base.hidden_dim = base.payoff_hidden = 8;
  CoordinationNet net_a(net_config_for(env_a, base), 6), net_b(net_config_for(env_b, base), 6);
  Rng rng_a(7), rng_b(7);
  EpisodeRecord a = collect_episode(env_a, net_a, 0.0, rng_a);
  EpisodeRecord b = collect_episode(env_b, net_b, 0.0, rng_b);
  EXPECT_EQ(a.actions, b.actions);
  EXPECT_EQ(a.rewards, b.rewards);
  ASSERT_EQ(a.obs.size(), b.obs.size());
  for (std::size_t t = 0; t < a.obs.size(); ++t) EXPECT_EQ(a.obs[t], b.obs[t]);
}

TEST(Collect, RandomClimbPolicyMatchesTableMean) {
  CoordinationNet net(climb_config(Algo::kIql), 1);
  ClimbEnv env(3);
  Rng rng(8);
  const int episodes = 20000;
  double total = 0.0, total_sq = 0.0;
  for (int i = 0; i < episodes; ++i) {
    double r = collect_episode(env, net, 1.0, rng).total_reward();
    total += r;
    total_sq += r * r;
  }
  const double mean = total / episodes;
  const double sd = std::sqrt(total_sq / episodes - mean * mean);
  const double table_mean = (11.0 - 30.0 - 30.0 + 7.0 + 6.0 + 0.0 + 0.0 + 0.0 + 5.0) / 9.0;
  EXPECT_LT(std::abs(mean - table_mean), 3.0 * sd / std::sqrt(double(episodes)));
}

TEST(Evaluate, DeterministicPolicyHasZeroSpread) {
  CoordinationNet net(climb_config(Algo::kDcg), 1);
  ClimbEnv env(1);
  Rng eval_rng(2);
  EvalResult r = evaluate(env, net, 20, eval_rng);
  EXPECT_EQ(r.episodes, 20u);
  EXPECT_EQ(r.return_std, 0.0);
}

TEST(Evaluate, GatherWinFlag) {
  auto env = make_environment("gather", {{"grid", "3"}, {"view_radius", "2"}}, 0);
  EXPECT_EQ(env->spec().n_agents, 3u);
  auto& g = dynamic_cast<GatherEnv&>(*env);
  g.reset();
  g.set_state({GatherEnv::Cell{0, 1}, GatherEnv::Cell{0, 1}, GatherEnv::Cell{0, 1}}, 0);
  g.step({GatherEnv::kLeft, GatherEnv::kLeft, GatherEnv::kLeft});
  EXPECT_EQ(g.episode_metric(), 1.0);
}

TEST(Replay, EvictsOldestAndSamplesDeterministically) {
  ReplayBuffer buf(3);
  for (int i = 0; i < 5; ++i) buf.add(toy_episode({double(i)}));
  EXPECT_EQ(buf.size(), 3u);
  EXPECT_EQ(buf.total_added(), 5u);
  EXPECT_FALSE(buf.contains(1));
  EXPECT_TRUE(buf.contains(2));
  Rng a(1), b(1);
  auto sa = buf.sample(8, a);
  auto sb = buf.sample(8, b);
  EXPECT_EQ(sa, sb);
  for (const auto* ep : sa) EXPECT_GE(ep->id, 2u);
}

TEST(Replay, RejectsMalformedEpisodes) {
  ReplayBuffer buf(3);
  EpisodeRecord ep = toy_episode({1.0, 2.0});
  ep.terminated[0] = true;
  EXPECT_THROW(buf.add(ep), StateError);
  EXPECT_THROW(ReplayBuffer(0), ArgumentError);
}

TEST(TrainConfig, EpsilonScheduleAndValidation) {
  TrainConfig cfg;
  EXPECT_EQ(cfg.epsilon_at(0), 1.0);
  EXPECT_NEAR(cfg.epsilon_at(25000), 0.525, 1e-12);
  EXPECT_EQ(cfg.epsilon_at(50000), 0.05);
  EXPECT_EQ(cfg.epsilon_at(90000), 0.05);
  cfg.gamma = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Metrics, RowFormatAndAppend) {
  MetricsRow row{"r", 3, "climb", "dmcg", 100, 100, 0.25, 11.0, 0.0, "mean_return", 11.0};
  EXPECT_EQ(format_row(row), "r,3,climb,dmcg,100,100,0.25,11,0,mean_return,11");
  auto path = std::filesystem::temp_directory_path() / "mcg_metrics_test.csv";
  std::filesystem::remove(path);
  append_row(path, row);
  append_row(path, row);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), metrics_header() + "\n" + format_row(row) + "\n" + format_row(row) + "\n");
  std::filesystem::remove(path);
}

TEST(Trainer, ShortClimbRun) {
  NetConfig net;
  net.algo = Algo::kDcg;
  net.embed_dim = net.hidden_dim = net.payoff_hidden = 8;
  TrainConfig cfg;
  cfg.total_env_steps = 400;
  cfg.eval_interval = 100;
  cfg.batch_episodes = 8;
  cfg.target_sync_interval = 50;
  std::vector<MetricsRow> rows;
  Trainer trainer({"t", "climb", {}}, net, cfg);
  trainer.run([&](const MetricsRow& r, CoordinationNet&) { rows.push_back(r); });
  EXPECT_EQ(trainer.env_steps(), 400u);
  EXPECT_EQ(trainer.updates(), 400u - 7u);
  EXPECT_EQ(trainer.target_syncs(), (400u - 7u) / 50u);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows.front().env_steps, 0u);
  EXPECT_EQ(rows.back().env_steps, 400u);
  EXPECT_EQ(rows.back().task_metric_name, "mean_return");
}

TEST(Trainer, SameSeedSameRows) {
  auto run = [] {
    NetConfig net;
    net.algo = Algo::kDmcg;
    net.embed_dim = net.hidden_dim = net.payoff_hidden = 8;
    TrainConfig cfg;
    cfg.total_env_steps = 240;
    cfg.eval_interval = 120;
    cfg.batch_episodes = 4;
    cfg.eval_episodes = 4;
    cfg.seed = 9;
    std::string out;
    Trainer trainer({"t", "hallway", {{"length", "3"}}}, net, cfg);
    trainer.run([&](const MetricsRow& r, CoordinationNet&) { out += format_row(r) + "\n"; });
    return out;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace mcg
