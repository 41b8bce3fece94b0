#pragma once

#include <filesystem>
#include <string>

#include "mml/experiments.hpp"

namespace mml {

/// Config document is syntactically broken, has an unknown key or a value of
/// the wrong type.
class ConfigParseError : public Error {
 public:
  using Error::Error;
};

/// Parses a YAML config. Keys absent from the document keep their defaults;
/// unknown keys anywhere are rejected. Range checks are left to
/// ExperimentConfig::validate.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical YAML form; parse_config(config_to_yaml(c)) reproduces c.
std::string config_to_yaml(const ExperimentConfig& cfg);

}  // namespace mml
