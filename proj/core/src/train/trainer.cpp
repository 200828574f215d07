#include "mcg/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcg/errors.hpp"

namespace mcg {

namespace {

Rng stream_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  return Rng(seq);
}

enum : std::uint32_t { kNetStream = 11, kEnvStream = 12, kEvalStream = 13, kActStream = 14 };

// Runs `net` over a batch of episodes in lockstep and returns fq[t][b]. Steps
// past an episode's end are fed zero observations.
std::vector<std::vector<FactoredQ>> unroll(std::span<const EpisodeRecord* const> batch,
                                           CoordinationNet& net, std::size_t horizon) {
  const auto& cfg = net.config();
  const std::size_t n = cfg.n_agents;
  const std::size_t bsz = batch.size();
  const bool dynamic = cfg.dynamic_layers > 0 && uses_generator(cfg.algo);
  net.begin_episode(bsz);
  std::vector<std::vector<FactoredQ>> out;
  out.reserve(horizon);
  Matrix obs(bsz * n, cfg.obs_dim);
  std::vector<std::size_t> prev(bsz * n, kNoAction);
  std::vector<AdjacencyTensor> graphs;
  for (std::size_t t = 0; t < horizon; ++t) {
    obs.set_zero();
    graphs.clear();
    for (std::size_t b = 0; b < bsz; ++b) {
      const EpisodeRecord& ep = *batch[b];
      const std::size_t tt = std::min(t, ep.length() - 1);
      if (t < ep.length()) add_row_block(obs, b * n, ep.obs[t]);
      for (std::size_t i = 0; i < n; ++i) {
        prev[b * n + i] = (t == 0 || t > ep.length()) ? kNoAction : ep.actions[t - 1][i];
      }
      if (dynamic) graphs.push_back(ep.graphs.at(tt));
    }
    out.push_back(net.step(obs, prev, graphs));
  }
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("train.gamma must lie in [0, 1)");
  if (!(adam.lr > 0.0)) throw ConfigError("train.lr must be positive");
  if (batch_episodes == 0) throw ConfigError("train.batch must be at least 1");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 &&
        epsilon_end <= 1.0)) {
    throw ConfigError("train.epsilon values must lie in [0, 1]");
  }
  if (target_sync_interval == 0) throw ConfigError("train.target_sync must be at least 1");
  if (eval_interval == 0) throw ConfigError("train.eval_interval must be at least 1");
  if (buffer_capacity == 0) throw ConfigError("train.buffer must be at least 1");
  if (!(grad_clip >= 0.0)) throw ConfigError("train.grad_clip must be non-negative");
}

double TrainConfig::epsilon_at(std::uint64_t env_steps) const {
  if (epsilon_anneal_steps == 0 || env_steps >= epsilon_anneal_steps) return epsilon_end;
  const double frac = static_cast<double>(env_steps) / static_cast<double>(epsilon_anneal_steps);
  return epsilon_start + frac * (epsilon_end - epsilon_start);
}

EpisodeRecord collect_episode(Environment& env, CoordinationNet& net, double epsilon, Rng& rng) {
  const EnvSpec spec = env.spec();
  const auto& cfg = net.config();
  const bool dynamic = cfg.dynamic_layers > 0 && uses_generator(cfg.algo);
  const bool use_net = epsilon < 1.0;
  EpisodeRecord ep;
  Matrix obs = env.reset();
  std::vector<std::size_t> prev(spec.n_agents, kNoAction);
  if (use_net) {
    net.set_recording(false);
    net.begin_episode(1);
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> any_action(0, spec.n_actions - 1);
  while (true) {
    std::optional<AdjacencyTensor> graph;
    if (dynamic) {
      graph = env.interaction_graphs();
      if (!graph) throw ConfigError("environment " + std::string(env.name()) + " supplies no graphs");
    }
    JointAction action(spec.n_agents);
    if (use_net) {
      std::span<const AdjacencyTensor> g;
      if (graph) g = std::span<const AdjacencyTensor>(&*graph, 1);
      const auto fq = net.step(obs, prev, g);
      action = net.greedy(fq.front());
    }
    for (auto& a : action) {
      if (!use_net || coin(rng) < epsilon) a = any_action(rng);
    }
    StepResult res = env.step(action);
    ep.obs.push_back(std::move(obs));
    ep.actions.push_back(action);
    ep.rewards.push_back(res.reward);
    ep.terminated.push_back(res.terminated);
    if (graph) ep.graphs.push_back(std::move(*graph));
    if (res.terminated) break;
    obs = std::move(res.obs);
    prev.assign(action.begin(), action.end());
  }
  if (use_net) {
    net.clear_caches();
    net.set_recording(true);
  }
  return ep;
}

double td_loss_and_grad(std::span<const EpisodeRecord* const> batch, CoordinationNet& online,
                        CoordinationNet& target, double gamma) {
  if (batch.empty()) throw ArgumentError("td_update: empty batch");
  std::size_t horizon = 0;
  for (const auto* ep : batch) horizon = std::max(horizon, ep->length());
  const bool per_agent = online.config().algo == Algo::kIql;

  target.set_recording(false);
  const auto tq = unroll(batch, target, horizon);
  target.clear_caches();
  target.set_recording(true);

  online.set_recording(true);
  online.clear_caches();
  const auto oq = unroll(batch, online, horizon);

  std::size_t count = 0;
  for (const auto* ep : batch) count += ep->length() * (per_agent ? online.config().n_agents : 1);
  const double scale = 2.0 / static_cast<double>(count);

  double loss = 0.0;
  std::vector<std::vector<FactoredQGrad>> grads(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    grads[t].reserve(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const EpisodeRecord& ep = *batch[b];
      const FactoredQ& q = oq[t][b];
      FactoredQGrad g = zero_grad_like(q);
      if (t < ep.length()) {
        const JointAction& a = ep.actions[t];
        const bool last = ep.terminated[t] || t + 1 >= ep.length();
        if (per_agent) {
          for (std::size_t i = 0; i < q.agents(); ++i) {
            double y = ep.rewards[t];
            if (!last) {
              const auto& next = oq[t + 1][b].utilities[i];
              const auto best = static_cast<std::size_t>(
                  std::max_element(next.begin(), next.end()) - next.begin());
              y += gamma * tq[t + 1][b].utilities[i][best];
            }
            const double delta = q.utilities[i][a[i]] - y;
            loss += delta * delta;
            g.utilities[i][a[i]] += scale * delta;
          }
        } else {
          double y = ep.rewards[t];
          if (!last) {
            const JointAction next = online.greedy(oq[t + 1][b]);
            y += gamma * evaluate_q(tq[t + 1][b], next);
          }
          const double delta = evaluate_q(q, a) - y;
          loss += delta * delta;
          accumulate(g, q, a, scale * delta);
        }
      }
      grads[t].push_back(std::move(g));
    }
  }
  loss /= static_cast<double>(count);
  if (!std::isfinite(loss) || loss > kDivergenceBound) {
    online.clear_caches();
    throw DivergenceError("TD loss diverged: " + std::to_string(loss));
  }
  for (std::size_t t = horizon; t-- > 0;) online.backward_step(grads[t]);
  online.end_backward();
  return loss;
}

double td_update(std::span<const EpisodeRecord* const> batch, CoordinationNet& online,
                 CoordinationNet& target, Adam& optimizer, const TrainConfig& cfg) {
  optimizer.zero_grad();
  const double loss = td_loss_and_grad(batch, online, target, cfg.gamma);
  auto params = online.parameters();
  if (cfg.grad_clip > 0.0) clip_grad_norm(params, cfg.grad_clip);
  optimizer.step();
  optimizer.zero_grad();
  return loss;
}

EvalResult evaluate(Environment& env, CoordinationNet& net, std::size_t episodes, Rng& eval_rng) {
  EvalResult res;
  res.episodes = episodes;
  if (episodes == 0) return res;
  const auto& cfg = net.config();
  const bool dynamic = cfg.dynamic_layers > 0 && uses_generator(cfg.algo);
  std::vector<double> returns;
  double metric = 0.0;
  net.set_recording(false);
  for (std::size_t e = 0; e < episodes; ++e) {
    Matrix obs = env.reset(eval_rng());
    net.begin_episode(1);
    std::vector<std::size_t> prev(cfg.n_agents, kNoAction);
    while (true) {
      std::optional<AdjacencyTensor> graph;
      std::span<const AdjacencyTensor> g;
      if (dynamic) {
        graph = env.interaction_graphs();
        g = std::span<const AdjacencyTensor>(&*graph, 1);
      }
      const auto fq = net.step(obs, prev, g);
      const JointAction action = net.greedy(fq.front());
      StepResult step = env.step(action);
      if (step.terminated) break;
      obs = std::move(step.obs);
      prev.assign(action.begin(), action.end());
    }
    returns.push_back(env.episode_return());
    metric += env.episode_metric();
  }
  net.clear_caches();
  net.set_recording(true);
  const double n = static_cast<double>(episodes);
  res.return_mean = std::accumulate(returns.begin(), returns.end(), 0.0) / n;
  double var = 0.0;
  for (double r : returns) var += (r - res.return_mean) * (r - res.return_mean);
  res.return_std = std::sqrt(var / n);
  res.metric = metric / n;
  return res;
}

NetConfig net_config_for(const Environment& env, NetConfig base) {
  const EnvSpec spec = env.spec();
  base.n_agents = spec.n_agents;
  base.n_actions = spec.n_actions;
  base.obs_dim = spec.obs_dim;
  base.dynamic_layers = env.graph_layers();
  return base;
}

Trainer::Trainer(TrainerIdentity id, NetConfig net, TrainConfig train)
    : id_(std::move(id)),
      cfg_(train),
      buffer_(train.buffer_capacity),
      rng_(stream_rng(train.seed, kActStream)),
      eval_rng_(stream_rng(train.seed, kEvalStream)) {
  cfg_.validate();
  Rng env_seeds = stream_rng(cfg_.seed, kEnvStream);
  env_ = make_environment(id_.env_name, id_.env_options, env_seeds());
  eval_env_ = make_environment(id_.env_name, id_.env_options, env_seeds());
  const NetConfig nc = net_config_for(*env_, std::move(net));
  Rng net_seeds = stream_rng(cfg_.seed, kNetStream);
  const std::uint64_t net_seed = net_seeds();
  online_ = std::make_unique<CoordinationNet>(nc, net_seed);
  target_ = std::make_unique<CoordinationNet>(nc, net_seed);
  sync_target(*online_, *target_);
  optimizer_ = std::make_unique<Adam>(online_->parameters(), cfg_.adam);
}

MetricsRow Trainer::evaluate_now() {
  const EvalResult ev = evaluate(*eval_env_, *online_, cfg_.eval_episodes, eval_rng_);
  MetricsRow row;
  row.run_id = id_.run_id;
  row.seed = cfg_.seed;
  row.env = id_.env_name;
  row.algo = std::string(to_string(online_->config().algo));
  row.env_steps = env_steps_;
  row.episodes = episodes_;
  row.loss = last_loss_;
  row.test_return_mean = ev.return_mean;
  row.test_return_std = ev.return_std;
  row.task_metric_name = std::string(to_string(env_->spec().metric));
  row.task_metric_value = ev.metric;
  return row;
}

void Trainer::run(const RowCallback& on_eval) {
  if (on_eval) on_eval(evaluate_now(), *online_);
  std::uint64_t next_eval = cfg_.eval_interval;
  while (env_steps_ < cfg_.total_env_steps) {
    EpisodeRecord ep = collect_episode(*env_, *online_, cfg_.epsilon_at(env_steps_), rng_);
    env_steps_ += ep.length();
    ++episodes_;
    buffer_.add(std::move(ep));
    if (buffer_.size() >= cfg_.batch_episodes) {
      const auto batch = buffer_.sample(cfg_.batch_episodes, rng_);
      last_loss_ = td_update(batch, *online_, *target_, *optimizer_, cfg_);
      ++updates_;
      if (updates_ % cfg_.target_sync_interval == 0) {
        sync_target(*online_, *target_);
        ++syncs_;
      }
    }
    if (env_steps_ >= next_eval || env_steps_ >= cfg_.total_env_steps) {
      while (next_eval <= env_steps_) next_eval += cfg_.eval_interval;
      if (on_eval) on_eval(evaluate_now(), *online_);
    }
  }
}

}  // namespace mcg
