#ifndef MORPHIN_CONFIG_IO_HPP
#define MORPHIN_CONFIG_IO_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "morphin/harness.hpp"

namespace morphin {

// Raised for any malformed, unknown or invariant-violating configuration
// input. The message names the offending field or key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json spec_to_json(const ExperimentSpec& spec);

// Strict parse: unknown keys anywhere in the tree are a ConfigError, and
// the resulting spec is validated.
ExperimentSpec spec_from_json(const nlohmann::json& j);

ExperimentSpec load_spec_file(const std::filesystem::path& path);

// Canned experiment specs shipped with the tool. Full-scale variants run
// the complete benchmark; *_desk variants are the quick versions the
// acceptance suite runs.
std::vector<std::string> canned_spec_names();
std::optional<ExperimentSpec> canned_spec(std::string_view name);

// Resolves --config values: a canned name, else a path to a JSON file.
ExperimentSpec resolve_spec(const std::string& config_value);

// Applies one `key=value` override onto the JSON form of a spec. The
// dotted key path must name an existing field; the value is parsed as JSON
// when possible, else taken as a string.
void apply_override(nlohmann::json& spec_json, const std::string& assignment);

}  // namespace morphin

#endif  // MORPHIN_CONFIG_IO_HPP
