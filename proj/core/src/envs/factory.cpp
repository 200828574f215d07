#include <charconv>
#include <set>
#include <string>

#include "mcg/envs/disperse.hpp"
#include "mcg/envs/environment.hpp"
#include "mcg/envs/gather.hpp"
#include "mcg/envs/hallway.hpp"
#include "mcg/envs/pursuit.hpp"
#include "mcg/errors.hpp"

namespace mcg {

namespace {

class OptionReader {
 public:
  OptionReader(std::string_view env, const EnvOptions& options) : env_(env), options_(options) {}

  void read(const std::string& key, std::size_t& out) {
    known_.insert(key);
    auto it = options_.find(key);
    if (it == options_.end()) return;
    const std::string& v = it->second;
    std::size_t parsed = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
    if (ec != std::errc() || end != v.data() + v.size()) {
      throw ConfigError("env." + env_ + "." + key + ": expected a non-negative integer, got '" +
                        v + "'");
    }
    out = parsed;
  }

  void finish() const {
    for (const auto& [key, value] : options_) {
      if (!known_.count(key)) throw ConfigError("unknown key env." + env_ + "." + key);
    }
  }

 private:
  std::string env_;
  const EnvOptions& options_;
  std::set<std::string> known_;
};

}  // namespace

bool is_environment_name(std::string_view name) {
  return name == "gather" || name == "disperse" || name == "pursuit" || name == "hallway" ||
         name == "climb";
}

std::vector<std::string> environment_parameters(std::string_view name) {
  if (name == "gather") return {"agents", "grid", "episode_limit", "view_radius"};
  if (name == "disperse") return {"agents", "hospitals", "episode_limit"};
  if (name == "pursuit") {
    return {"predators", "prey", "grid", "episode_limit", "view_radius", "graph_radius"};
  }
  if (name == "hallway") return {"groups", "group_size", "length", "episode_limit"};
  if (name == "climb") return {};
  throw ConfigError("unknown environment '" + std::string(name) + "'");
}

std::unique_ptr<Environment> make_environment(std::string_view name, const EnvOptions& options,
                                              std::uint64_t seed) {
  OptionReader r(name, options);
  std::unique_ptr<Environment> env;
  if (name == "gather") {
    GatherEnv::Config c;
    r.read("agents", c.agents);
    r.read("grid", c.grid);
    r.read("episode_limit", c.episode_limit);
    r.read("view_radius", c.view_radius);
    r.finish();
    env = std::make_unique<GatherEnv>(c, seed);
  } else if (name == "disperse") {
    DisperseEnv::Config c;
    r.read("agents", c.agents);
    r.read("hospitals", c.hospitals);
    r.read("episode_limit", c.episode_limit);
    r.finish();
    env = std::make_unique<DisperseEnv>(c, seed);
  } else if (name == "pursuit") {
    PursuitEnv::Config c;
    r.read("predators", c.predators);
    r.read("prey", c.prey);
    r.read("grid", c.grid);
    r.read("episode_limit", c.episode_limit);
    r.read("view_radius", c.view_radius);
    r.read("graph_radius", c.graph_radius);
    r.finish();
    env = std::make_unique<PursuitEnv>(c, seed);
  } else if (name == "hallway") {
    HallwayEnv::Config c;
    r.read("groups", c.groups);
    r.read("group_size", c.group_size);
    r.read("length", c.length);
    r.read("episode_limit", c.episode_limit);
    r.finish();
    env = std::make_unique<HallwayEnv>(c, seed);
  } else if (name == "climb") {
    r.finish();
    env = std::make_unique<ClimbEnv>(seed);
  } else {
    throw ConfigError("unknown environment '" + std::string(name) + "'");
  }
  return env;
}

}  // namespace mcg
