#include "mcg/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "mcg/errors.hpp"

namespace mcg {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename F>
auto wrap(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};


const std::vector<Field>& schema() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    auto u64 = [&f](std::string key, auto getter) {
      f.push_back({key,
                   [key, getter](RunConfig& c, const std::string& v) {
                     getter(c) = static_cast<std::remove_reference_t<decltype(getter(c))>>(
                         to_u64(key, v));
                   },
                   [getter](const RunConfig& c) {
                     return std::to_string(getter(const_cast<RunConfig&>(c)));
                   }});
    };
    auto real = [&f](std::string key, auto getter) {
      f.push_back({key,
                   [key, getter](RunConfig& c, const std::string& v) { getter(c) = to_double(key, v); },
                   [getter](const RunConfig& c) {
                     return fmt_double(getter(const_cast<RunConfig&>(c)));
                   }});
    };
    auto str = [&f](std::string key, auto set, auto get) { f.push_back({key, set, get}); };

    str("run_id", [](RunConfig& c, const std::string& v) { c.run_id = v; },
        [](const RunConfig& c) { return "\"" + c.run_id + "\""; });
    str("out", [](RunConfig& c, const std::string& v) { c.out = v; },
        [](const RunConfig& c) { return "\"" + c.out + "\""; });
    str("seeds", [](RunConfig& c, const std::string& v) { c.seeds = parse_seed_list(v); },
        [](const RunConfig& c) {
          std::string s = "[";
          for (std::size_t i = 0; i < c.seeds.size(); ++i) {
            s += (i ? ", " : "") + std::to_string(c.seeds[i]);
          }
          return s + "]";
        });
    str("algo",
        [](RunConfig& c, const std::string& v) { c.net.algo = wrap("algo", [&] { return parse_algo(v); }); },
        [](const RunConfig& c) { return "\"" + std::string(to_string(c.net.algo)) + "\""; });
    str("env.name",
        [](RunConfig& c, const std::string& v) {
          if (!is_environment_name(v)) throw ConfigError("env.name: unknown environment '" + v + "'");
          c.env_name = v;
        },
        [](const RunConfig& c) { return "\"" + c.env_name + "\""; });

    u64("net.embed_dim", [](RunConfig& c) -> std::size_t& { return c.net.embed_dim; });
    u64("net.hidden_dim", [](RunConfig& c) -> std::size_t& { return c.net.hidden_dim; });
    u64("net.payoff_hidden", [](RunConfig& c) -> std::size_t& { return c.net.payoff_hidden; });

    u64("mcg.length", [](RunConfig& c) -> std::size_t& { return c.net.mcg.length; });
    u64("mcg.channels", [](RunConfig& c) -> std::size_t& { return c.net.mcg.channels; });
    real("mcg.threshold", [](RunConfig& c) -> double& { return c.net.mcg.edge_threshold; });
    str("mcg.bypass",
        [](RunConfig& c, const std::string& v) { c.net.bypass = to_bool("mcg.bypass", v); },
        [](const RunConfig& c) { return std::string(c.net.bypass ? "true" : "false"); });
    str("mcg.activation",
        [](RunConfig& c, const std::string& v) {
          c.net.activation = wrap("mcg.activation", [&] { return parse_activation(v); });
        },
        [](const RunConfig& c) { return "\"" + std::string(to_string(c.net.activation)) + "\""; });
    str("mcg.topologies",
        [](RunConfig& c, const std::string& v) {
          c.net.topologies.clear();
          for (const auto& t : parse_list(v)) {
            c.net.topologies.push_back(wrap("mcg.topologies", [&] { return parse_topology(t); }));
          }
        },
        [](const RunConfig& c) {
          std::string s = "[";
          for (std::size_t i = 0; i < c.net.topologies.size(); ++i) {
            s += (i ? ", \"" : "\"") + std::string(to_string(c.net.topologies[i])) + "\"";
          }
          return s + "]";
        });
    u64("msgpass.iterations", [](RunConfig& c) -> std::size_t& { return c.net.msgpass_iterations; });
    str("dcg.topology",
        [](RunConfig& c, const std::string& v) {
          c.net.dcg_topology = wrap("dcg.topology", [&] { return parse_topology(v); });
        },
        [](const RunConfig& c) { return "\"" + std::string(to_string(c.net.dcg_topology)) + "\""; });

    real("train.gamma", [](RunConfig& c) -> double& { return c.train.gamma; });
    real("train.lr", [](RunConfig& c) -> double& { return c.train.adam.lr; });
    u64("train.batch", [](RunConfig& c) -> std::size_t& { return c.train.batch_episodes; });
    real("train.epsilon_start", [](RunConfig& c) -> double& { return c.train.epsilon_start; });
    real("train.epsilon_end", [](RunConfig& c) -> double& { return c.train.epsilon_end; });
    u64("train.epsilon_anneal_steps",
        [](RunConfig& c) -> std::uint64_t& { return c.train.epsilon_anneal_steps; });
    u64("train.target_sync", [](RunConfig& c) -> std::uint64_t& { return c.train.target_sync_interval; });
    u64("train.total_steps", [](RunConfig& c) -> std::uint64_t& { return c.train.total_env_steps; });
    u64("train.eval_interval", [](RunConfig& c) -> std::uint64_t& { return c.train.eval_interval; });
    u64("train.eval_episodes", [](RunConfig& c) -> std::size_t& { return c.train.eval_episodes; });
    u64("train.buffer", [](RunConfig& c) -> std::size_t& { return c.train.buffer_capacity; });
    real("train.grad_clip", [](RunConfig& c) -> double& { return c.train.grad_clip; });
    return f;
  }();
  return fields;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : schema()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

}  // namespace

KeyValues parse_config_text(std::string_view text, std::string_view origin) {
  KeyValues out;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto where = std::string(origin) + ":" + std::to_string(line_no);
    std::string line = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = unquote(trim(std::string_view(line).substr(eq + 1)));
    if (key.empty()) throw ConfigError(where + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (!seen.insert(full).second) throw ConfigError(where + ": duplicate key " + full);
    out.emplace_back(full, value);
  }
  return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

std::pair<std::string, std::string> parse_override(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(spec) + "' is not key=value");
  }
  std::string key = trim(spec.substr(0, eq));
  if (key.empty()) throw ConfigError("override '" + std::string(spec) + "' has an empty key");
  return {key, unquote(trim(spec.substr(eq + 1)))};
}

std::vector<std::string> parse_list(std::string_view value) {
  std::string v = trim(value);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw ConfigError("unterminated list '" + v + "'");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = unquote(trim(item));
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view value, std::string_view key) {
  std::vector<std::uint64_t> seeds;
  for (const auto& s : parse_list(value)) seeds.push_back(to_u64(std::string(key), s));
  if (seeds.empty()) throw ConfigError(std::string(key) + ": seed list is empty");
  return seeds;
}

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : schema()) keys.push_back(f.key);
  return keys;
}

RunConfig resolve_config(const KeyValues& kv) {
  // Validate every key before applying anything.
  for (const auto& [key, value] : kv) {
    if (find_field(key)) continue;
    if (key.rfind("env.", 0) == 0) {
      const auto rest = key.substr(4);
      const auto dot = rest.find('.');
      if (dot != std::string::npos) {
        const auto env = rest.substr(0, dot);
        const auto param = rest.substr(dot + 1);
        if (is_environment_name(env)) {
          const auto params = environment_parameters(env);
          if (std::find(params.begin(), params.end(), param) != params.end()) continue;
        }
      }
    }
    throw ConfigError("unknown key " + key);
  }
  RunConfig cfg;
  for (const auto& [key, value] : kv) {
    if (const Field* f = find_field(key)) f->set(cfg, value);
  }
  if (cfg.env_name.empty()) throw ConfigError("env.name: required key is missing");
  const std::string prefix = "env." + cfg.env_name + ".";
  for (const auto& [key, value] : kv) {
    if (key.rfind(prefix, 0) == 0) cfg.env_options[key.substr(prefix.size())] = value;
  }
  if (cfg.run_id.empty() || cfg.run_id.find('/') != std::string::npos || cfg.run_id == "." ||
      cfg.run_id == "..") {
    throw ConfigError("run_id: must be a plain directory name");
  }
  cfg.train.validate();
  if (cfg.net.embed_dim == 0 || cfg.net.hidden_dim == 0 || cfg.net.payoff_hidden == 0) {
    throw ConfigError("net: layer widths must be positive");
  }
  if (uses_generator(cfg.net.algo)) {
    wrap("mcg", [&] {
      cfg.net.mcg.validate();
      return 0;
    });
  }
  if (cfg.net.msgpass_iterations == 0) throw ConfigError("msgpass.iterations must be at least 1");
  // Catches malformed environment values before any allocation of networks.
  make_environment(cfg.env_name, cfg.env_options, 0);
  return cfg;
}

std::string to_config_text(const RunConfig& cfg) {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
  std::vector<std::string> order;
  auto put = [&](const std::string& full, const std::string& value) {
    const auto dot = full.rfind('.');
    const std::string section = dot == std::string::npos ? "" : full.substr(0, dot);
    const std::string key = dot == std::string::npos ? full : full.substr(dot + 1);
    if (!sections.count(section)) order.push_back(section);
    sections[section].emplace_back(key, value);
  };
  for (const auto& f : schema()) put(f.key, f.get(cfg));
  for (const auto& [k, v] : cfg.env_options) put("env." + cfg.env_name + "." + k, v);
  std::string text;
  for (const auto& section : order) {
    if (!section.empty()) text += "\n[" + section + "]\n";
    for (const auto& [k, v] : sections[section]) text += k + " = " + v + "\n";
  }
  return text;
}

}  // namespace mcg
