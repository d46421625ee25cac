#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "offload/harness.hpp"

namespace offload {

// Flat `key = value` documents. Lists are comma separated, `#` starts a comment.
struct ConfigKey {
  std::string name;
  std::string unit;
  std::string description;
};

const std::vector<ConfigKey>& ConfigKeys();

// Sets one key from its textual value. Throws ConfigError naming the key when
// the key is unknown or the value does not parse.
void ApplySetting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

// Parses "key=value" as given to --set.
void ApplyOverride(ExperimentConfig& cfg, std::string_view assignment);

// Starts from the defaults, applies every line, then finalizes and validates.
ExperimentConfig ParseConfig(std::string_view text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Every key with its current value; ParseConfig(RenderConfig(c)) reproduces c.
std::string RenderConfig(const ExperimentConfig& cfg);

}  // namespace offload
