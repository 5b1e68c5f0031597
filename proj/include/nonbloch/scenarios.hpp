#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nonbloch/config.hpp"

namespace nonbloch {

struct RunManifest {
  std::string scenario;
  std::vector<std::string> outputs;  // files written, relative to out_dir
  std::filesystem::path manifest_path;
};

/// Executes a scenario, writing CSV/JSON (and optional SVG) artifacts plus a
/// manifest.json that echoes the config and lists every output file.
/// Identical configs reproduce identical numeric outputs.
RunManifest run_scenario(const ScenarioConfig& cfg);

}  // namespace nonbloch
