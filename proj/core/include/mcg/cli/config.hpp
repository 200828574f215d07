#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mcg/coord/network.hpp"
#include "mcg/envs/environment.hpp"
#include "mcg/train/trainer.hpp"

namespace mcg {

// Flat "section.key" → raw value pairs in insertion order.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Parses a flat-sectioned key-value file:
//   # comment
//   algo = "dmcg"
//   [train]
//   total_steps = 20000
//   [env.gather]
//   grid = 7
// Quoted strings lose their quotes; lists keep their brackets. Duplicate
// keys and malformed lines throw ConfigError with the line number.
KeyValues parse_config_text(std::string_view text, std::string_view origin = "<config>");
KeyValues read_config_file(const std::filesystem::path& path);

// "key=value" as given to --override.
std::pair<std::string, std::string> parse_override(std::string_view spec);

// "[0, 1, 2]" or "0,1,2" → {0, 1, 2}.
std::vector<std::string> parse_list(std::string_view value);
std::vector<std::uint64_t> parse_seed_list(std::string_view value, std::string_view key = "seeds");

struct RunConfig {
  std::string run_id = "run";
  std::string out = "out";
  std::vector<std::uint64_t> seeds = {0};
  std::string env_name;
  EnvOptions env_options;
  NetConfig net;
  TrainConfig train;
};

// Validates every key against the schema, then applies them over the
// defaults. Throws ConfigError naming the offending key; a missing env.name
// is reported as "env.name".
RunConfig resolve_config(const KeyValues& kv);

// Fully resolved text form; parsing it back yields the same RunConfig.
std::string to_config_text(const RunConfig& cfg);

// Every key the schema accepts outside env.<name>.<param>.
std::vector<std::string> known_config_keys();

}  // namespace mcg
