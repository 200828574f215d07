#include <benchmark/benchmark.h>

#include "mcg/coord/factored_q.hpp"
#include "mcg/envs/environment.hpp"
#include "mcg/graph/topology.hpp"
#include "mcg/mcgnet/generator.hpp"
#include "mcg/numerics/matrix.hpp"
#include "mcg/train/replay.hpp"
#include "mcg/train/trainer.hpp"

namespace {

mcg::Matrix random_matrix(std::size_t r, std::size_t c, mcg::Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  mcg::Matrix m(r, c);
  for (auto& v : m.data()) v = u(rng);
  return m;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  mcg::Rng rng(1);
  auto a = random_matrix(n, n, rng);
  auto b = random_matrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mcg::matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void BM_MaxSum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  mcg::Rng rng(2);
  mcg::FactoredQ fq;
  fq.utilities.assign(n, std::vector<double>(6));
  for (auto& u : fq.utilities) {
    for (auto& v : u) v = std::uniform_real_distribution<double>(-1, 1)(rng);
  }
  fq.edges = mcg::all_pairs(n);
  for (std::size_t e = 0; e < fq.edges.size(); ++e) {
    fq.payoffs.push_back({random_matrix(6, 6, rng), random_matrix(6, 6, rng)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(mcg::max_sum(fq, 8));
}
BENCHMARK(BM_MaxSum)->Arg(4)->Arg(10);

void BM_Generate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  mcg::Rng rng(3);
  std::vector<mcg::TopologyKind> kinds{mcg::TopologyKind::kFull, mcg::TopologyKind::kCycle};
  auto a = mcg::AdjacencyTensor::from_topologies(kinds, n).append_identity();
  mcg::McgGenerator gen(mcg::MetaPathConfig{}, a.k(), 32, mcg::Activation::kRelu, false, rng);
  gen.set_recording(false);
  auto x = random_matrix(n, 32, rng);
  for (auto _ : state) benchmark::DoNotOptimize(gen.generate(a, x));
}
BENCHMARK(BM_Generate)->Arg(4)->Arg(10);

void BM_EnvStep(benchmark::State& state, const char* name) {
  auto env = mcg::make_environment(name, {}, 4);
  const auto spec = env->spec();
  mcg::Rng rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, spec.n_actions - 1);
  mcg::JointAction a(spec.n_agents);
  env->reset();
  for (auto _ : state) {
    if (env->terminated()) env->reset();
    for (auto& x : a) x = pick(rng);
    benchmark::DoNotOptimize(env->step(a));
  }
}
BENCHMARK_CAPTURE(BM_EnvStep, gather, "gather");
BENCHMARK_CAPTURE(BM_EnvStep, pursuit, "pursuit");
BENCHMARK_CAPTURE(BM_EnvStep, hallway, "hallway");
BENCHMARK_CAPTURE(BM_EnvStep, disperse, "disperse");

void BM_TdUpdate(benchmark::State& state, mcg::Algo algo) {
  auto env = mcg::make_environment("hallway", {}, 6);
  mcg::NetConfig base;
  base.algo = algo;
  base.embed_dim = base.hidden_dim = base.payoff_hidden = 16;
  auto cfg = mcg::net_config_for(*env, base);
  mcg::CoordinationNet online(cfg, 7), target(cfg, 7);
  mcg::TrainConfig train;
  mcg::Adam opt(online.parameters(), train.adam);
  mcg::ReplayBuffer buffer(64);
  mcg::Rng rng(8);
  for (int i = 0; i < 32; ++i) buffer.add(mcg::collect_episode(*env, online, 1.0, rng));
  for (auto _ : state) {
    auto batch = buffer.sample(train.batch_episodes, rng);
    benchmark::DoNotOptimize(mcg::td_update(batch, online, target, opt, train));
  }
}
BENCHMARK_CAPTURE(BM_TdUpdate, iql, mcg::Algo::kIql)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TdUpdate, dcg, mcg::Algo::kDcg)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TdUpdate, dmcg, mcg::Algo::kDmcg)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
