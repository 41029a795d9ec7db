#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oqrw/analysis.hpp"
#include "oqrw/config.hpp"

namespace oqrw {

struct RunOutputs {
    std::vector<std::string> files;  // everything written, manifest included
    std::string manifest_path;
    EnsembleSummary summary;
};

/// Executes one experiment: validates the config, writes a running manifest,
/// produces the mode's data files, then finalizes the manifest with derived
/// quantities, wall time and per-output checksums. Deterministic given
/// (config, seed) apart from the manifest's wall-clock field.
RunOutputs run_experiment(const ExperimentConfig& cfg);

/// FNV-1a 64-bit checksum of a file's bytes.
std::uint64_t fnv1a_file(const std::string& path);

std::string version_string();

}  // namespace oqrw
