#include "mcg/verify/suites.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include "mcg/coord/network.hpp"
#include "mcg/envs/environment.hpp"
#include "mcg/envs/pursuit.hpp"
#include "mcg/errors.hpp"
#include "mcg/mcgnet/generator.hpp"
#include "mcg/numerics/gradcheck.hpp"
#include "mcg/train/trainer.hpp"
#include "mcg/verify/oracles.hpp"

namespace mcg::verify {

namespace {

using Clock = std::chrono::steady_clock;

// Runs `body`, which returns {passed, detail}; exceptions count as failures.
CheckResult timed(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  CheckResult r;
  r.name = name;
  const auto t0 = Clock::now();
  try {
    auto [ok, detail] = body();
    r.passed = ok;
    r.detail = std::move(detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (auto& v : m.data()) v = u(rng);
  return m;
}

double weighted_sum(const Matrix& out, const Matrix& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) s += out.data()[k] * w.data()[k];
  return s;
}

std::pair<bool, std::string> grad_verdict(const GradCheckResult& g) {
  return {g.max_rel_error < kGradTolerance,
          "max rel error " + fmt(g.max_rel_error) + " over " + std::to_string(g.checked) +
              " entries, worst " + g.worst_parameter};
}

// Input-gradient check for layers whose backward returns dL/dx.
double input_grad_error(const std::function<Matrix(const Matrix&)>& fwd,
                        const std::function<Matrix(const Matrix&)>& bwd, Matrix x,
                        const Matrix& w) {
  fwd(x);
  const Matrix dx = bwd(w);
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x.data()[k];
    x.data()[k] = saved + kGradStep;
    const double plus = weighted_sum(fwd(x), w);
    bwd(w);
    x.data()[k] = saved - kGradStep;
    const double minus = weighted_sum(fwd(x), w);
    bwd(w);
    x.data()[k] = saved;
    const double numeric = (plus - minus) / (2.0 * kGradStep);
    worst = std::max(worst, std::abs(dx.data()[k] - numeric) / std::max(1.0, std::abs(numeric)));
  }
  return worst;
}

NetConfig toy_net(Algo algo, std::size_t n, std::size_t actions, std::size_t obs_dim) {
  NetConfig c;
  c.algo = algo;
  c.n_agents = n;
  c.n_actions = actions;
  c.obs_dim = obs_dim;
  c.embed_dim = 8;
  c.hidden_dim = 8;
  c.payoff_hidden = 8;
  return c;
}

std::pair<bool, std::string> end_to_end(const std::string& env_name, const EnvOptions& options,
                                        NetConfig base, std::uint64_t seed) {
  auto env = make_environment(env_name, options, seed);
  const NetConfig nc = net_config_for(*env, base);
  CoordinationNet online(nc, seed);
  CoordinationNet target(nc, seed + 1000);
  Rng rng(seed);
  std::vector<EpisodeRecord> episodes;
  for (int e = 0; e < 2; ++e) {
    // ε = 0.5 exercises the greedy path during collection as well.
    episodes.push_back(collect_episode(*env, online, 0.5, rng));
  }
  std::vector<const EpisodeRecord*> batch;
  for (const auto& e : episodes) batch.push_back(&e);
  const LossFunction f = [&](bool) { return td_loss_and_grad(batch, online, target, 0.9); };
  return grad_verdict(finite_diff_check(f, online.parameters(), kGradStep));
}

}  // namespace

bool all_passed(const Report& report) {
  for (const auto& r : report) {
    if (!r.passed) return false;
  }
  return !report.empty();
}

void print_report(const Report& report, std::ostream& os) {
  for (const auto& r : report) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ", " << fmt(r.seconds)
       << " s)\n";
  }
}

Report grad_suite(std::uint64_t seed) {
  Report report;
  Rng rng(seed);

  report.push_back(timed("grad.linear", [&] {
    Linear layer("lin", 5, 4, rng);
    const Matrix x = random_matrix(3, 5, rng);
    const Matrix w = random_matrix(3, 4, rng);
    const LossFunction f = [&](bool with_grad) {
      const double v = weighted_sum(layer.forward(x), w);
      if (with_grad) layer.backward(w); else layer.clear_cache();
      return v;
    };
    auto verdict = grad_verdict(finite_diff_check(f, layer.parameters()));
    const double dx = input_grad_error([&](const Matrix& in) { return layer.forward(in); },
                                       [&](const Matrix& g) { return layer.backward(g); }, x, w);
    zero_grads(layer.parameters());
    verdict.first = verdict.first && dx < kGradTolerance;
    verdict.second += ", input " + fmt(dx);
    return verdict;
  }));

  report.push_back(timed("grad.gru_sequence", [&] {
    GruCell gru("gru", 4, 5, rng);
    std::vector<Matrix> xs;
    for (int t = 0; t < 3; ++t) xs.push_back(random_matrix(2, 4, rng));
    const Matrix w = random_matrix(2, 5, rng);
    const LossFunction f = [&](bool with_grad) {
      Matrix h(2, 5);
      for (const auto& x : xs) h = gru.forward(x, h);
      const double v = weighted_sum(h, w);
      if (with_grad) {
        Matrix dh = w;
        for (std::size_t t = xs.size(); t-- > 0;) dh = gru.backward(dh).dh_prev;
      } else {
        gru.clear_cache();
      }
      return v;
    };
    return grad_verdict(finite_diff_check(f, gru.parameters()));
  }));

  for (const Activation act : {Activation::kRelu, Activation::kTanh}) {
    report.push_back(timed("grad.mcg_generator_" + std::string(to_string(act)), [&] {
      const std::size_t n = 4;
      std::vector<Matrix> layers;
      for (int k = 0; k < 2; ++k) layers.push_back(random_matrix(n, n, rng, 0.0, 1.0));
      const AdjacencyTensor a = AdjacencyTensor(layers).append_identity();
      MetaPathConfig cfg;
      cfg.length = 3;
      cfg.channels = 2;
      McgGenerator gen(cfg, a.k(), 3, act, false, rng);
      const Matrix x = random_matrix(n, 3, rng);
      const Matrix w = random_matrix(n, gen.output_dim(), rng);
      const LossFunction f = [&](bool with_grad) {
        const McgOutput out = gen.generate(a, x);
        const double v = weighted_sum(out.z, w);
        if (with_grad) gen.generate_backward(w); else gen.clear_cache();
        return v;
      };
      auto verdict = grad_verdict(finite_diff_check(f, gen.parameters()));
      const double dx = input_grad_error(
          [&](const Matrix& in) { return gen.generate(a, in).z; },
          [&](const Matrix& g) { return gen.generate_backward(g); }, x, w);
      zero_grads(gen.parameters());
      verdict.first = verdict.first && dx < kGradTolerance;
      verdict.second += ", input " + fmt(dx);
      return verdict;
    }));
  }

  report.push_back(timed("grad.normalize", [&] {
    const Matrix a = random_matrix(4, 4, rng, 0.0, 2.0);
    const Matrix w = random_matrix(4, 4, rng);
    const double err = input_grad_error([&](const Matrix& in) { return normalize(in); },
                                        [&](const Matrix& g) { return normalize_backward(a, g); },
                                        a, w);
    return std::make_pair(err < kGradTolerance, "max rel error " + fmt(err));
  }));

  report.push_back(timed("grad.payoff_head", [&] {
    PayoffHead head(4, 6, 3, rng);
    const Matrix z = random_matrix(3, 4, rng);
    const std::vector<NodePair> pairs = {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}};
    const Matrix w = random_matrix(pairs.size(), 9, rng);
    const LossFunction f = [&](bool with_grad) {
      const double v = weighted_sum(head.forward(z, pairs), w);
      if (with_grad) head.backward(w); else head.clear_cache();
      return v;
    };
    auto verdict = grad_verdict(finite_diff_check(f, head.parameters()));
    const double dz = input_grad_error([&](const Matrix& in) { return head.forward(in, pairs); },
                                       [&](const Matrix& g) { return head.backward(g); }, z, w);
    zero_grads(head.parameters());
    verdict.first = verdict.first && dz < kGradTolerance;
    verdict.second += ", input " + fmt(dz);
    return verdict;
  }));

  report.push_back(timed("grad.encoder_sequence", [&] {
    AgentEncoder enc({3, 4, 5, 6, 7}, rng);
    std::vector<Matrix> obs;
    for (int t = 0; t < 3; ++t) obs.push_back(random_matrix(6, 5, rng));
    const std::vector<std::vector<std::size_t>> prev = {
        std::vector<std::size_t>(6, kNoAction), {0, 1, 2, 3, 0, 1}, {3, 3, 2, 1, 0, 0}};
    std::vector<Matrix> w;
    for (int t = 0; t < 3; ++t) w.push_back(random_matrix(6, 7, rng));
    const LossFunction f = [&](bool with_grad) {
      enc.begin_episode(2);
      double v = 0.0;
      for (int t = 0; t < 3; ++t) v += weighted_sum(enc.encode_step(obs[t], prev[t]), w[t]);
      if (with_grad) {
        for (int t = 3; t-- > 0;) enc.backward_step(w[t]);
        enc.end_backward();
      } else {
        enc.clear_cache();
      }
      return v;
    };
    return grad_verdict(finite_diff_check(f, enc.parameters()));
  }));

  report.push_back(timed("grad.td_loss_dmcg_static", [&] {
    NetConfig c = toy_net(Algo::kDmcg, 0, 0, 0);
    c.topologies = {TopologyKind::kFull, TopologyKind::kLine};
    return end_to_end("gather", {{"agents", "3"}, {"grid", "5"}, {"episode_limit", "4"}}, c, seed);
  }));
  report.push_back(timed("grad.td_loss_dmcg_dynamic", [&] {
    NetConfig c = toy_net(Algo::kDmcg, 0, 0, 0);
    return end_to_end("pursuit",
                      {{"predators", "3"}, {"prey", "2"}, {"grid", "5"}, {"episode_limit", "3"}},
                      c, seed);
  }));
  report.push_back(timed("grad.td_loss_dcg", [&] {
    return end_to_end("gather", {{"agents", "3"}, {"grid", "5"}, {"episode_limit", "4"}},
                      toy_net(Algo::kDcg, 0, 0, 0), seed);
  }));
  report.push_back(timed("grad.td_loss_iql", [&] {
    return end_to_end("gather", {{"agents", "3"}, {"grid", "5"}, {"episode_limit", "4"}},
                      toy_net(Algo::kIql, 0, 0, 0), seed);
  }));
  report.push_back(timed("grad.td_loss_dmcg_vdn", [&] {
    return end_to_end("gather", {{"agents", "3"}, {"grid", "5"}, {"episode_limit", "4"}},
                      toy_net(Algo::kDmcgVdn, 0, 0, 0), seed);
  }));
  return report;
}

Report composition_suite(std::size_t instances, std::uint64_t seed) {
  Report report;
  Rng rng(seed);
  report.push_back(timed("oracle.composition", [&] {
    std::size_t mismatches = 0;
    std::size_t edge_mismatches = 0;
    for (std::size_t inst = 0; inst < instances; ++inst) {
      std::uniform_int_distribution<std::size_t> nd(2, 6), kd(1, 3), ld(1, 3), od(1, 2);
      std::bernoulli_distribution bit(0.35);
      const std::size_t n = nd(rng), k = kd(rng), l = ld(rng), o = od(rng);
      std::vector<Matrix> raw;
      for (std::size_t t = 0; t < k; ++t) {
        Matrix m(n, n);
        for (auto& v : m.data()) v = bit(rng) ? 1.0 : 0.0;
        raw.push_back(m);
      }
      const AdjacencyTensor a = AdjacencyTensor(raw).append_identity();
      MetaPathConfig cfg;
      cfg.length = l;
      cfg.channels = o;
      McgGenerator gen(cfg, a.k(), 2, Activation::kRelu, false, rng);
      // One-hot selection: exp(-1000) underflows to exactly zero.
      std::vector<std::vector<std::size_t>> types(o, std::vector<std::size_t>(l));
      std::uniform_int_distribution<std::size_t> td(0, a.k() - 1);
      Matrix& w = gen.selection().w_phi().value;
      for (std::size_t s = 0; s < l; ++s) {
        for (std::size_t c = 0; c < o; ++c) {
          types[c][s] = td(rng);
          auto row = w.row(gen.selection().row_index(s, c));
          for (std::size_t t = 0; t < a.k(); ++t) row[t] = t == types[c][s] ? 0.0 : -1000.0;
        }
      }
      const auto graph = gen.build_graph(a);
      for (std::size_t c = 0; c < o; ++c) {
        const auto reach = oracle::typed_path_reachability(a.layers(), types[c]);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            if ((graph->channels[c](i, j) > 0.0) != reach[i][j]) ++mismatches;
          }
        }
      }
      if (graph->edges != oracle::scan_edges(graph->channels, cfg.edge_threshold)) ++edge_mismatches;
    }
    return std::make_pair(mismatches == 0 && edge_mismatches == 0,
                          std::to_string(instances) + " instances, " + std::to_string(mismatches) +
                              " support mismatches, " + std::to_string(edge_mismatches) +
                              " edge-set mismatches");
  }));
  report.push_back(timed("oracle.matmul", [&] {
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
      std::uniform_int_distribution<std::size_t> d(1, 12);
      const std::size_t r = d(rng), m = d(rng), c = d(rng);
      Matrix a = random_matrix(r, m, rng);
      for (auto& v : a.data()) {
        if (std::bernoulli_distribution(0.3)(rng)) v = 0.0;
      }
      const Matrix b = random_matrix(m, c, rng);
      const Matrix fast = matmul(a, b);
      const Matrix slow = oracle::naive_matmul(a, b);
      worst = std::max(worst, max_abs(fast - slow));
      worst = std::max(worst, max_abs(matmul_tn(transpose(a), b) - slow));
      worst = std::max(worst, max_abs(matmul_nt(a, transpose(b)) - slow));
    }
    return std::make_pair(worst < 1e-12, "max abs diff " + fmt(worst));
  }));
  return report;
}

Report maxsum_suite(std::size_t tree_instances, std::size_t cyclic_instances, std::uint64_t seed) {
  Report report;
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> ad(2, 4);
  report.push_back(timed("oracle.maxsum_tree_exact", [&] {
    std::size_t wrong = 0;
    for (std::size_t inst = 0; inst < tree_instances; ++inst) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
      const FactoredQ fq = oracle::random_factored_q(n, ad(rng), oracle::random_tree(n, rng),
                                                     Aggregation::kMean, rng);
      const auto best = oracle::exhaustive_max(fq);
      if (evaluate_q(fq, greedy_action(fq, 2 * n)) != best.value) ++wrong;
    }
    return std::make_pair(wrong == 0, std::to_string(tree_instances) + " trees, " +
                                          std::to_string(wrong) + " below the exhaustive maximum");
  }));
  report.push_back(timed("oracle.maxsum_cyclic_anytime", [&] {
    std::size_t bad = 0;
    for (std::size_t inst = 0; inst < cyclic_instances; ++inst) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 6)(rng);
      const FactoredQ fq = oracle::random_factored_q(n, ad(rng), oracle::random_cyclic(n, rng),
                                                     Aggregation::kMean, rng);
      const auto res = max_sum(fq, 2 * n);
      bool ok = res.best_per_round.size() == 2 * n + 1 && res.value == evaluate_q(fq, res.action) &&
                res.best_per_round.back() == res.value;
      for (std::size_t r = 1; r < res.best_per_round.size(); ++r) {
        ok = ok && res.best_per_round[r] >= res.best_per_round[r - 1];
      }
      if (!ok) ++bad;
    }
    return std::make_pair(bad == 0, std::to_string(cyclic_instances) + " cyclic graphs, " +
                                        std::to_string(bad) + " violations");
  }));
  return report;
}

Report factorization_suite(std::size_t instances, std::uint64_t seed) {
  Report report;
  Rng rng(seed);
  report.push_back(timed("oracle.factorization", [&] {
    double worst = 0.0;
    for (std::size_t inst = 0; inst < instances; ++inst) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
      const std::size_t a = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
      EdgeSet edges;
      for (const auto& e : all_pairs(n)) {
        if (std::bernoulli_distribution(0.5)(rng)) edges.push_back(e);
      }
      const auto agg = inst % 4 == 3 ? Aggregation::kSum : Aggregation::kMean;
      const FactoredQ fq = oracle::random_factored_q(n, a, edges, agg, rng);
      JointAction act(n);
      for (auto& x : act) x = std::uniform_int_distribution<std::size_t>(0, a - 1)(rng);
      worst = std::max(worst, std::abs(evaluate_q(fq, act) - oracle::resum_q(fq, act)));
    }
    return std::make_pair(worst <= 1e-12, std::to_string(instances) + " instances, max abs diff " +
                                              fmt(worst));
  }));
  return report;
}

Report reduction_suite(std::size_t inputs, std::uint64_t seed) {
  Report report;
  Rng rng(seed);
  report.push_back(timed("reduction.bypass_equals_dcg", [&] {
    double worst = 0.0;
    std::size_t structural = 0;
    for (std::size_t inst = 0; inst < inputs; ++inst) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
      const std::size_t a = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
      const std::size_t obs_dim = 5;
      NetConfig dcg_cfg = toy_net(Algo::kDcg, n, a, obs_dim);
      dcg_cfg.dcg_topology = TopologyKind::kFull;
      NetConfig mcg_cfg = toy_net(Algo::kDmcg, n, a, obs_dim);
      mcg_cfg.bypass = true;
      mcg_cfg.topologies = {TopologyKind::kFull};
      const std::uint64_t net_seed = seed * 1000 + inst;
      CoordinationNet dcg(dcg_cfg, net_seed);
      CoordinationNet dmcg(mcg_cfg, net_seed);
      dcg.set_recording(false);
      dmcg.set_recording(false);
      dcg.begin_episode(1);
      dmcg.begin_episode(1);
      std::vector<std::size_t> prev(n, kNoAction);
      for (int t = 0; t < 3; ++t) {
        const Matrix obs = random_matrix(n, obs_dim, rng);
        const auto q1 = dcg.step(obs, prev).front();
        const auto q2 = dmcg.step(obs, prev).front();
        if (q1.edges != q2.edges || q1.payoffs.size() != q2.payoffs.size()) {
          ++structural;
          break;
        }
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t k = 0; k < a; ++k) {
            worst = std::max(worst, std::abs(q1.utilities[i][k] - q2.utilities[i][k]));
          }
        }
        for (std::size_t e = 0; e < q1.payoffs.size(); ++e) {
          worst = std::max(worst, max_abs(q1.payoffs[e].forward - q2.payoffs[e].forward));
          worst = std::max(worst, max_abs(q1.payoffs[e].backward - q2.payoffs[e].backward));
        }
        JointAction act(n);
        for (auto& x : act) x = std::uniform_int_distribution<std::size_t>(0, a - 1)(rng);
        worst = std::max(worst, std::abs(evaluate_q(q1, act) - evaluate_q(q2, act)));
        if (dcg.greedy(q1) != dmcg.greedy(q2)) ++structural;
        prev = act;
      }
    }
    return std::make_pair(worst <= 1e-12 && structural == 0,
                          std::to_string(inputs) + " inputs, max abs diff " + fmt(worst) + ", " +
                              std::to_string(structural) + " structural mismatches");
  }));
  return report;
}

namespace {

bool reward_allowed(std::string_view env, double r, bool terminated, const EnvSpec& spec) {
  auto integral = [](double v) { return v == std::floor(v); };
  if (env == "gather") {
    if (!terminated) return r == 0.0;
    return r == 10.0 || r == 5.0 || r == -5.0 || r == 0.0;
  }
  if (env == "disperse") return r <= 0.0 && integral(r) && r >= -static_cast<double>(spec.n_agents);
  if (env == "pursuit") return integral(r);
  if (env == "hallway") {
    if (r == 0.0 || r == 1.0) return true;
    const double groups = -r / 0.5;
    return r < 0.0 && integral(groups) && groups >= 2.0;
  }
  if (env == "climb") {
    for (const auto& row : {11.0, -30.0, 0.0, 7.0, 6.0, 5.0}) {
      if (r == row) return true;
    }
    return false;
  }
  return false;
}

}  // namespace

Report env_suite(std::size_t steps_per_env, std::uint64_t seed) {
  Report report;
  for (const std::string name : {"gather", "disperse", "pursuit", "hallway", "climb"}) {
    report.push_back(timed("env." + name, [&]() -> std::pair<bool, std::string> {
      auto env = make_environment(name, {}, seed);
      auto twin = make_environment(name, {}, seed);
      const EnvSpec spec = env->spec();
      Rng rng(seed);
      std::uniform_int_distribution<std::size_t> act(0, spec.n_actions - 1);
      std::size_t violations = 0;
      std::string first;
      auto violate = [&](const std::string& what) {
        if (violations++ == 0) first = what;
      };

      // Seeded determinism: two instances, and reset(seed) twice.
      if (!(env->reset() == twin->reset())) violate("same-seed instances reset differently");
      if (!(env->reset(seed + 7) == env->reset(seed + 7))) violate("reset(seed) not reproducible");
      {
        auto a = make_environment(name, {}, seed + 1);
        auto b = make_environment(name, {}, seed + 1);
        a->reset();
        b->reset();
        for (int t = 0; t < 5 && !a->terminated(); ++t) {
          JointAction ja(spec.n_agents);
          for (auto& x : ja) x = act(rng);
          const auto ra = a->step(ja);
          const auto rb = b->step(ja);
          if (!(ra.obs == rb.obs) || ra.reward != rb.reward) violate("twin rollouts diverged");
        }
      }
      // Invalid action.
      env->reset();
      try {
        env->step(JointAction(spec.n_agents, spec.n_actions));
        violate("invalid action accepted");
      } catch (const ArgumentError&) {
      }

      std::size_t steps = 0;
      while (steps < steps_per_env) {
        Matrix obs = env->reset();
        if (obs.rows() != spec.n_agents || obs.cols() != spec.obs_dim) violate("reset obs shape");
        std::size_t t = 0;
        double episode_return = 0.0;
        while (!env->terminated()) {
          JointAction ja(spec.n_agents);
          for (auto& x : ja) x = act(rng);
          const StepResult r = env->step(ja);
          ++t;
          ++steps;
          episode_return += r.reward;
          if (r.obs.rows() != spec.n_agents || r.obs.cols() != spec.obs_dim) violate("step obs shape");
          if (!std::isfinite(r.reward) || !reward_allowed(name, r.reward, r.terminated, spec)) {
            violate("reward " + std::to_string(r.reward) + " outside the allowed set");
          }
          if (t > spec.episode_limit) violate("episode exceeded its limit");
          if (auto* p = dynamic_cast<PursuitEnv*>(env.get())) {
            if (p->caught() + p->prey().size() != p->initial_prey()) violate("prey not conserved");
            const auto g = p->interaction_graphs();
            for (const auto& layer : g->layers()) {
              for (std::size_t i = 0; i < spec.n_agents; ++i) {
                if (layer(i, i) != 0.0) violate("graph diagonal non-zero");
                for (std::size_t j = 0; j < spec.n_agents; ++j) {
                  if (layer(i, j) != layer(j, i)) violate("graph not symmetric");
                }
              }
            }
          }
        }
        if (std::abs(env->episode_return() - episode_return) > 1e-9) violate("return bookkeeping");
        try {
          env->step(JointAction(spec.n_agents, 0));
          violate("step after termination accepted");
        } catch (const StateError&) {
        }
      }
      return {violations == 0, std::to_string(steps) + " steps, " + std::to_string(violations) +
                                   " violations" + (first.empty() ? "" : ", first: " + first)};
    }));
  }
  return report;
}

std::vector<std::string> suite_names() { return {"grads", "oracles", "envs", "reduction"}; }

Report run_named_suite(std::string_view name) {
  if (name == "grads") return grad_suite();
  if (name == "oracles") {
    Report r = composition_suite();
    for (auto& c : maxsum_suite()) r.push_back(std::move(c));
    for (auto& c : factorization_suite()) r.push_back(std::move(c));
    return r;
  }
  if (name == "envs") return env_suite();
  if (name == "reduction") return reduction_suite();
  throw ConfigError("unknown verify suite '" + std::string(name) + "' (expected grads|oracles|envs|reduction)");
}

}  // namespace mcg::verify
