#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperwalk/estimators.hpp"
#include "json.hpp"

namespace hyperwalk {

/// Collected field-level problems; the message lists one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Raw key=value settings. Keys are validated against the known set.
using ConfigValues = std::map<std::string, std::string>;

/// Known keys with their defaults, in manifest order.
const std::vector<std::pair<std::string, std::string>>& config_defaults();

/// Parses "key = value" lines; '#' starts a comment. Unknown or duplicate
/// keys are errors.
ConfigValues parse_config_text(const std::string& text, const std::string& origin = "config");
ConfigValues load_config_file(const std::string& path);

/// Overrides from HYPERWALK_<KEY> environment variables (key upper-cased).
void apply_environment_overrides(ConfigValues& values);

struct ExperimentConfig {
  std::string backend = "free:2";
  ExperimentParams params;
  std::vector<int> sweep_sides;   // P per cell
  std::vector<int> sweep_tiles;   // Q per cell
  std::vector<double> sweep_p;
  double jump_sigmas = 3.0;

  ConfigValues resolved;  // every key, defaults applied, as strings
};

/// Applies defaults and checks every field, reporting all problems at once.
ExperimentConfig resolve_config(const ConfigValues& values);

/// Manifest: the resolved config, subcommand and output file list. Contains
/// nothing time- or host-dependent, so reruns reproduce it exactly.
nlohmann::json make_manifest(const std::string& subcommand, const ExperimentConfig& config,
                             const std::vector<std::string>& outputs, int status);

/// Settings stored in a manifest, for rerunning.
ConfigValues config_from_manifest(const nlohmann::json& manifest, std::string* subcommand);

}  // namespace hyperwalk
