// Acceptance runner: one PASS/FAIL line per criterion.
//
//   mcg_acceptance [criterion...]      (no arguments runs everything)
//   mcg_acceptance --list
//
// Learning criteria train from the shipped configs and write their runs under
// MCG_ACCEPTANCE_OUT (default ./acceptance_runs).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mcg/cli/config.hpp"
#include "mcg/cli/runner.hpp"
#include "mcg/train/metrics.hpp"
#include "mcg/verify/suites.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

fs::path config_dir() {
  if (const char* d = std::getenv("MCG_CONFIG_DIR"); d && *d) return d;
  return MCG_DEFAULT_CONFIG_DIR;
}

fs::path out_dir() {
  if (const char* d = std::getenv("MCG_ACCEPTANCE_OUT"); d && *d) return d;
  return fs::current_path() / "acceptance_runs";
}

mcg::RunConfig load_config(const std::string& file, const mcg::KeyValues& overrides) {
  auto kv = mcg::read_config_file(config_dir() / file);
  for (const auto& [k, v] : overrides) {
    std::erase_if(kv, [&](const auto& p) { return p.first == k; });
    kv.emplace_back(k, v);
  }
  auto cfg = mcg::resolve_config(kv);
  cfg.out = out_dir().string();
  return cfg;
}

// Evaluation rows per seed for one algorithm.
using Curves = std::vector<std::vector<mcg::MetricsRow>>;

Curves train_all_seeds(const mcg::RunConfig& cfg) {
  Curves curves;
  for (auto seed : cfg.seeds) {
    auto& rows = curves.emplace_back();
    mcg::run_seed(cfg, seed, [&](const mcg::MetricsRow& r) { rows.push_back(r); });
  }
  return curves;
}

// Seed-averaged task metric at every evaluation.
std::vector<double> mean_curve(const Curves& curves) {
  std::vector<double> out(curves.front().size(), 0.0);
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i].task_metric_value;
  }
  for (auto& v : out) v /= static_cast<double>(curves.size());
  return out;
}

Outcome from_report(const mcg::verify::Report& report) {
  std::ostringstream os;
  mcg::verify::print_report(report, os);
  std::cerr << os.str();
  std::size_t failed = 0;
  for (const auto& c : report) failed += c.passed ? 0 : 1;
  return {mcg::verify::all_passed(report), fmt("%zu checks, %zu failed", report.size(), failed)};
}

Outcome with_budget(Outcome o, double seconds, double budget) {
  o.detail += fmt(", %.1fs of %.0fs budget", seconds, budget);
  if (seconds >= budget) o.passed = false;
  return o;
}

Outcome gradients() {
  auto start = Clock::now();
  auto o = from_report(mcg::verify::grad_suite());
  return with_budget(o, seconds_since(start), 120.0);
}

Outcome composition() {
  auto start = Clock::now();
  auto o = from_report(mcg::verify::composition_suite(200));
  return with_budget(o, seconds_since(start), 60.0);
}

Outcome maxsum() {
  auto start = Clock::now();
  auto o = from_report(mcg::verify::maxsum_suite(100, 100));
  return with_budget(o, seconds_since(start), 120.0);
}

Outcome factorization() { return from_report(mcg::verify::factorization_suite(100)); }

Outcome reduction() { return from_report(mcg::verify::reduction_suite(50)); }

Outcome environments() { return from_report(mcg::verify::env_suite(10000)); }

Outcome climb() {
  auto start = Clock::now();
  std::map<std::string, int> optimal;
  std::string detail;
  for (const char* algo : {"iql", "vdn", "dcg", "dmcg"}) {
    auto cfg = load_config("climb.toml", {{"algo", algo}, {"run_id", std::string("climb_") + algo}});
    auto curves = train_all_seeds(cfg);
    std::string finals;
    for (const auto& c : curves) {
      const double r = c.back().test_return_mean;
      optimal[algo] += r == 11.0 ? 1 : 0;
      finals += fmt("%s%g", finals.empty() ? "" : "/", r);
    }
    detail += fmt("%s%s %d/4 optimal [%s]", detail.empty() ? "" : "; ", algo, optimal[algo], finals.c_str());
  }
  const bool ok = optimal["iql"] <= 1 && optimal["vdn"] <= 1 && optimal["dcg"] >= 3 && optimal["dmcg"] >= 3;
  return with_budget({ok, detail}, seconds_since(start), 600.0);
}

Outcome hallway() {
  auto start = Clock::now();
  std::map<std::string, std::vector<double>> curve;
  std::string detail;
  for (const char* algo : {"iql", "vdn", "dcg", "dmcg"}) {
    auto cfg = load_config("hallway.toml", {{"algo", algo}, {"run_id", std::string("hallway_") + algo}});
    curve[algo] = mean_curve(train_all_seeds(cfg));
    detail += fmt("%s%s final %.3f", detail.empty() ? "" : "; ", algo, curve[algo].back());
  }
  bool ordered = true;
  const auto& dmcg = curve["dmcg"];
  const auto& dcg = curve["dcg"];
  const std::size_t evals = dmcg.size();
  const std::size_t first = evals >= 10 ? evals - 10 : 0;
  for (std::size_t i = first; i < evals; ++i) ordered = ordered && dmcg[i] >= dcg[i];
  detail += fmt("; dmcg >= dcg on last %zu evals: %s", evals - first, ordered ? "yes" : "no");
  const bool ok = dmcg.back() >= 0.9 && curve["iql"].back() <= 0.3 && curve["vdn"].back() <= 0.3 &&
                  ordered && evals >= 10;
  return with_budget({ok, detail}, seconds_since(start), 45.0 * 60.0);
}

Outcome gather() {
  auto start = Clock::now();
  auto cfg = load_config("gather_dmcg.toml", {{"run_id", "gather_dmcg"}});
  auto curves = train_all_seeds(cfg);
  auto mean = mean_curve(curves);
  std::string finals;
  for (const auto& c : curves) finals += fmt("%s%.2f", finals.empty() ? "" : "/", c.back().task_metric_value);
  Outcome o{mean.back() >= 0.8 && curves.size() == 4,
            fmt("dmcg mean final win rate %.3f [%s] at %llu steps", mean.back(), finals.c_str(),
                static_cast<unsigned long long>(curves.front().back().env_steps))};
  return with_budget(o, seconds_since(start), 45.0 * 60.0);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  std::vector<std::string> files;
  for (const char* copy : {"a", "b"}) {
    auto cfg = load_config("hallway.toml", {{"run_id", "determinism"},
                                            {"seeds", "[3]"},
                                            {"train.total_steps", "6000"},
                                            {"train.eval_interval", "1000"}});
    cfg.out = (out_dir() / "determinism" / copy).string();
    mcg::run_seed(cfg, 3);
    files.push_back(slurp(mcg::seed_directory(cfg, 3) / "metrics.csv"));
  }
  const bool same = files[0] == files[1] && !files[0].empty();
  return {same, fmt("%zu bytes each, %s", files[0].size(), same ? "identical" : "different")};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"gradients", gradients},   {"composition", composition}, {"maxsum", maxsum},
      {"factorization", factorization}, {"reduction", reduction}, {"climb", climb},
      {"hallway", hallway},       {"gather", gather},           {"environments", environments},
      {"determinism", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.size() == 1 && wanted[0] == "--list") {
    for (const auto& c : criteria()) std::cout << c.name << "\n";
    return 0;
  }
  for (const auto& w : wanted) {
    bool known = false;
    for (const auto& c : criteria()) known = known || w == c.name;
    if (!known) {
      std::cerr << "unknown criterion " << w << "\n";
      return 2;
    }
  }
  int failures = 0;
  for (const auto& c : criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.name) == wanted.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.passed ? "PASS " : "FAIL ") << c.name << " (" << o.detail << ")" << std::endl;
    failures += o.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
