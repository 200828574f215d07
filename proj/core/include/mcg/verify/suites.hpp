#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mcg::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

using Report = std::vector<CheckResult>;

bool all_passed(const Report& report);
// One "PASS|FAIL name (detail)" line per check.
void print_report(const Report& report, std::ostream& os);

inline constexpr double kGradTolerance = 1e-4;
inline constexpr double kGradStep = 1e-5;

// Finite-difference checks of every layer and of the end-to-end DMCG TD loss
// on a 3-agent toy batch.
Report grad_suite(std::uint64_t seed = 1);

// Support of the composed meta-graph under one-hot selections versus typed
// path enumeration (n ≤ 6, K ≤ 3 binary layers plus identity, l ≤ 3).
Report composition_suite(std::size_t instances = 200, std::uint64_t seed = 2);

// Tree instances: the max-sum joint action attains the exhaustive maximum.
// Cyclic instances: the anytime value never decreases across rounds.
Report maxsum_suite(std::size_t tree_instances = 100, std::size_t cyclic_instances = 100,
                    std::uint64_t seed = 3);

// evaluate_q against an independent re-summation, within 1e-12.
Report factorization_suite(std::size_t instances = 100, std::uint64_t seed = 4);

// DMCG with bypass over a static full topology against the DCG path under a
// shared seed, within 1e-12 on every utility and payoff entry.
Report reduction_suite(std::size_t inputs = 50, std::uint64_t seed = 5);

// Random-action rollouts per environment checking reward sets, observation
// shapes, termination and seeded-reset determinism.
Report env_suite(std::size_t steps_per_env = 10000, std::uint64_t seed = 6);

// Named groups used by the CLI: grads | oracles | envs | reduction. Throws
// ConfigError for other names.
Report run_named_suite(std::string_view name);
std::vector<std::string> suite_names();

}  // namespace mcg::verify
