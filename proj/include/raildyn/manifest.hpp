#pragma once

#include "raildyn/config.hpp"

#include <string>

namespace raildyn {

/// Deterministic JSON echo of every resolved parameter of a run, track values
/// converted back to their entry units. Carries no timestamps or host state.
std::string manifest_json(const ScenarioConfig& cfg);

void write_manifest(const ScenarioConfig& cfg, const std::string& path);

} // namespace raildyn
