#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oqrw/config.hpp"

namespace oqrw {

/// Bundled experiment presets reproducing each figure's underlying data.
/// A preset expands to one or more (subdirectory suffix, config) pairs; the
/// suffix distinguishes parameter variants that belong to the same figure.
std::vector<std::pair<std::string, ExperimentConfig>> preset_configs(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace oqrw
