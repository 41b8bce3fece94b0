#pragma once

#include <string>
#include <vector>

#include "mml/experiments.hpp"

namespace mml {

struct Preset {
  std::string name;
  std::string summary;
  std::vector<std::string> provenance;  // parameter sources, one per line
  ExperimentConfig config;
};

/// Bundled figure presets in a fixed order: fig2, fig3, fig5, fig5-inset, fig6.
const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

/// Human-readable listing with one "<preset>: <parameter>" line per
/// provenance entry.
std::string presets_listing();

}  // namespace mml
