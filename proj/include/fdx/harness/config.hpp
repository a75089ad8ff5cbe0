#pragma once

#include <string>

#include <json.hpp>

#include "fdx/harness/sweep.hpp"

namespace fdx::harness {

/// Config document <-> ExperimentConfig. Field names mirror the struct
/// members; absent fields keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::string& path);

/// Writes the fully resolved config next to an output artifact
/// (<path>.meta.json) so every result carries its provenance.
void write_config_sidecar(const ExperimentConfig& cfg, const std::string& out_path);

} // namespace fdx::harness
