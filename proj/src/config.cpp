#include "hyperwalk/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace hyperwalk {

namespace {

std::string join_lines(const std::vector<std::string>& problems) {
  std::string out;
  for (const auto& p : problems) {
    if (!out.empty()) out += '\n';
    out += p;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool known_key(const std::string& key) {
  const auto& d = config_defaults();
  return std::any_of(d.begin(), d.end(), [&](const auto& kv) { return kv.first == key; });
}

/// Typed field reader that records problems instead of throwing.
class Reader {
 public:
  Reader(const ConfigValues& values, std::vector<std::string>& problems)
      : values_(values), problems_(problems) {}

  const std::string& raw(const std::string& key) const { return values_.at(key); }

  template <typename T>
  T number(const std::string& key, T lo, T hi) {
    const std::string& text = raw(key);
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      problems_.push_back(key + ": cannot parse '" + text + "'");
      return lo;
    }
    if (!(value >= lo && value <= hi)) {
      std::ostringstream os;
      os << key << ": " << text << " outside [" << lo << ", " << hi << "]";
      problems_.push_back(os.str());
      return lo;
    }
    return value;
  }

  bool boolean(const std::string& key) {
    const std::string& text = raw(key);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    problems_.push_back(key + ": expected true or false, got '" + text + "'");
    return false;
  }

  template <typename T>
  std::vector<T> list(const std::string& key, T lo, T hi) {
    std::vector<T> out;
    for (const auto& item : split_list(raw(key))) {
      T value{};
      const auto* end = item.data() + item.size();
      const auto [ptr, ec] = std::from_chars(item.data(), end, value);
      if (ec != std::errc() || ptr != end || !(value >= lo && value <= hi)) {
        problems_.push_back(key + ": bad list entry '" + item + "'");
        continue;
      }
      out.push_back(value);
    }
    return out;
  }

  void fail(const std::string& message) { problems_.push_back(message); }

 private:
  const ConfigValues& values_;
  std::vector<std::string>& problems_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_lines(problems)), problems_(std::move(problems)) {}

const std::vector<std::pair<std::string, std::string>>& config_defaults() {
  static const std::vector<std::pair<std::string, std::string>> defaults = {
      {"backend", "free:2"},
      {"model", "bernoulli"},
      {"p", "1"},
      {"alpha", "0.5"},
      {"conductance_law", "log_uniform"},
      {"seed", "1"},
      {"r_infty", "30"},
      {"replicas", "200"},
      {"horizon", "2000"},
      {"checkpoints", "4"},
      {"entropy_steps", "30"},
      {"entropy_method", "increment"},
      {"truncation", "1e-15"},
      {"entry_budget", "10000000"},
      {"adaptive_budget", "20000"},
      {"boundary_samples", "1000"},
      {"probes", "0"},
      {"grid_min", "0"},
      {"grid_max", "0"},
      {"grid_mean_count", "5"},
      {"min_pairs", "50"},
      {"environment_replica", "0"},
      {"shadow_probes", "100"},
      {"shadow_depths", "2,4,6,8"},
      {"shadow_log_c_max", "6"},
      {"shadow_r0_max", "10"},
      {"shadow_target_rate", "0.95"},
      {"stationarity_replicas", "10000"},
      {"stationarity_weighted", "true"},
      {"level", "0.01"},
      {"sweep_P", "5,5,5,5"},
      {"sweep_Q", "8,16,32,64"},
      {"sweep_p", "0.8,0.9,1"},
      {"jump_sigmas", "3"},
      {"threads", "1"},
      {"memory_budget", "2147483648"},
  };
  return defaults;
}

ConfigValues parse_config_text(const std::string& text, const std::string& origin) {
  ConfigValues values;
  std::vector<std::string> problems;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back(where + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_key(key)) {
      problems.push_back(where + ": unknown key '" + key + "'");
    } else if (!values.emplace(key, value).second) {
      problems.push_back(where + ": duplicate key '" + key + "'");
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return values;
}

ConfigValues load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void apply_environment_overrides(ConfigValues& values) {
  for (const auto& [key, unused] : config_defaults()) {
    std::string name = "HYPERWALK_";
    for (char c : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(name.c_str())) values[key] = trim(v);
  }
}

ExperimentConfig resolve_config(const ConfigValues& values) {
  std::vector<std::string> problems;
  ConfigValues full;
  for (const auto& [key, value] : values) {
    if (!known_key(key)) problems.push_back("unknown key '" + key + "'");
  }
  for (const auto& [key, def] : config_defaults()) {
    const auto it = values.find(key);
    full[key] = it == values.end() ? def : it->second;
  }
  Reader r(full, problems);
  ExperimentConfig c;
  c.resolved = full;
  auto& p = c.params;

  c.backend = full["backend"];
  try {
    (void)make_backend(c.backend);
  } catch (const std::exception& e) {
    r.fail(std::string("backend: ") + e.what());
  }
  const std::string model = full["model"];
  if (model == "bernoulli") {
    p.model = EnvironmentModel::bernoulli(r.number<double>("p", 0.0, 1.0));
  } else if (model == "conductance") {
    ConductanceLaw law = ConductanceLaw::kLogUniform;
    try {
      law = parse_conductance_law(full["conductance_law"]);
    } catch (const std::exception& e) {
      r.fail(std::string("conductance_law: ") + e.what());
    }
    const double alpha = r.number<double>("alpha", 0.0, 1.0);
    if (alpha <= 0.0 || alpha >= 1.0) r.fail("alpha: must lie strictly inside (0, 1)");
    p.model = EnvironmentModel::conductance(alpha, law);
  } else {
    r.fail("model: expected bernoulli or conductance, got '" + model + "'");
  }
  p.seed = r.number<std::uint64_t>("seed", 0, UINT64_MAX);
  p.r_infty = r.number<int>("r_infty", 1, 10000);
  p.replicas = r.number<int>("replicas", 2, 100'000'000);
  p.horizon = r.number<int>("horizon", 1, 100'000'000);
  p.checkpoints = r.number<int>("checkpoints", 1, 30);
  p.entropy_steps = r.number<int>("entropy_steps", 1, 100000);
  try {
    p.entropy_method = parse_entropy_method(full["entropy_method"]);
  } catch (const std::exception& e) {
    r.fail(std::string("entropy_method: ") + e.what());
  }
  p.truncation = r.number<double>("truncation", 0.0, 1e-6);
  p.dp_limits.entry_budget = r.number<std::size_t>("entry_budget", 1, SIZE_MAX);
  p.dp_limits.adaptive_budget = r.number<std::size_t>("adaptive_budget", 0, SIZE_MAX);
  p.boundary_samples = r.number<int>("boundary_samples", 2, 10'000'000);
  p.probes = r.number<int>("probes", 0, 10'000'000);
  p.grid_min = r.number<int>("grid_min", 0, 200);
  p.grid_max = r.number<int>("grid_max", 0, 250);
  if (p.grid_max != 0 && p.grid_max - p.grid_min + 1 < 4) {
    r.fail("grid_max: radius grid needs at least 4 points (grid_max >= grid_min + 3)");
  }
  p.auto_grid_mean_count = r.number<double>("grid_mean_count", 0.0, 1e9);
  p.min_pairs = r.number<int>("min_pairs", 0, 1'000'000'000);
  p.environment_replica = r.number<std::uint64_t>("environment_replica", 0, UINT64_MAX);
  p.shadow_probes = r.number<int>("shadow_probes", 1, 1'000'000);
  p.shadow_depths = r.list<double>("shadow_depths", 0.0, 1e6);
  if (p.shadow_depths.empty()) r.fail("shadow_depths: need at least one depth");
  p.shadow_log_c_max = r.number<double>("shadow_log_c_max", 0.0, 100.0);
  p.shadow_r0_max = r.number<int>("shadow_r0_max", 1, 1000);
  p.shadow_target_rate = r.number<double>("shadow_target_rate", 0.0, 1.0);
  p.stationarity_replicas = r.number<int>("stationarity_replicas", 4, 100'000'000);
  p.stationarity_weighted = r.boolean("stationarity_weighted");
  p.stationarity_level = r.number<double>("level", 0.0, 1.0);
  c.sweep_sides = r.list<int>("sweep_P", 3, 255);
  c.sweep_tiles = r.list<int>("sweep_Q", 3, 1'000'000);
  if (c.sweep_sides.size() != c.sweep_tiles.size()) {
    r.fail("sweep_P, sweep_Q: lists must have the same length");
  }
  c.sweep_p = r.list<double>("sweep_p", 0.0, 1.0);
  c.jump_sigmas = r.number<double>("jump_sigmas", 0.0, 1e6);
  p.threads = r.number<int>("threads", 1, 4096);
  p.memory_budget = r.number<std::size_t>("memory_budget", 1 << 20, SIZE_MAX);
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

nlohmann::json make_manifest(const std::string& subcommand, const ExperimentConfig& config,
                             const std::vector<std::string>& outputs, int status) {
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [key, unused] : config_defaults()) cfg[key] = config.resolved.at(key);
  nlohmann::json m;
  m["tool"] = "hyperwalk";
  m["version"] = HYPERWALK_VERSION;
  m["subcommand"] = subcommand;
  m["config"] = nlohmann::json::parse(cfg.dump());
  m["outputs"] = outputs;
  m["status"] = status;
  return m;
}

ConfigValues config_from_manifest(const nlohmann::json& manifest, std::string* subcommand) {
  if (!manifest.contains("config") || !manifest["config"].is_object()) {
    throw ConfigError({"manifest: missing config object"});
  }
  ConfigValues values;
  std::vector<std::string> problems;
  for (const auto& [key, value] : manifest["config"].items()) {
    if (!known_key(key)) {
      problems.push_back("manifest: unknown key '" + key + "'");
    } else if (!value.is_string()) {
      problems.push_back("manifest: value of '" + key + "' is not a string");
    } else {
      values[key] = value.get<std::string>();
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  if (subcommand) *subcommand = manifest.value("subcommand", std::string());
  return values;
}

}  // namespace hyperwalk
