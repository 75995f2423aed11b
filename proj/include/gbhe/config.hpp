#pragma once

#include <iosfwd>
#include <string>

#include "gbhe/harness.hpp"

namespace gbhe {

/// Defaults of each experiment (levels, degree, adaptivity caps).
ExperimentConfig default_config(const std::string& experiment);

/// Sets one `key = value` entry. Keys are the field names of
/// ExperimentConfig and ModelParams (alpha, nu, ..., mu, tol, levels, ...);
/// unknown keys throw.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// INI text: `experiment = ...` selects the defaults, every other entry
/// overrides one field. Section headers only group keys.
ExperimentConfig load_config(std::istream& is);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace gbhe
