#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nonbloch/lattice.hpp"
#include "nonbloch/laurent.hpp"

namespace nonbloch {

enum class Scenario {
  fig1_spectra,
  fig1_lambda_map,
  fig1_profiles,
  fig2_geometry_spectra,
  fig2_vshape_map,
  fig2_greens_map,
  fig2_dynamics,
  fig2_delta_sweep,
  hierarchy_table,
  custom,
};

std::string to_string(Scenario s);
std::optional<Scenario> scenario_from_string(const std::string& name);

struct GeometrySpec {
  GeometryKind kind = GeometryKind::square;
  int length = 50;
  int cut = 1;            // corner block size
  double radius = 0.0;    // disk; 0 = L/2
  double disorder_w = 1.0;
};

/// Numeric knobs shared across scenarios; each scenario reads the subset it
/// needs. Defaults reproduce the shipped studies.
struct NumericsSpec {
  int chain_length = 150;
  int bloch_grid = 128;
  std::array<int, 2> omega_grid{20, 20};
  std::optional<std::array<double, 4>> frame;  // re0, re1, im0, im1
  int source_site = 0;                         // 0 = center
  std::array<int, 2> window_plus{85, 135};
  std::array<int, 2> window_minus{15, 65};
  double margin = 0.02;
  double gbz_tol = 0.05;
  double horizon = 60.0;
  double dt = 0.0;  // 0 = auto
  std::vector<int> sizes{20, 30, 40};
  int deltas_per_decade = 4;
  int delta_min_exp = -7;
  int delta_max_exp = -1;
  int mu_points = 41;
  double mu_range = 2.0;
  double membership_eps = 1e-3;
  std::array<double, 2> omega_probe{0.7, 0.02};
  bool emit_svg = true;
  /// Scenario-budget switch for hierarchy panels inside fig2_geometry_spectra.
  bool amoeba_panel = true;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::fig1_spectra;
  std::vector<LaurentOperator> model;  // 1 (1D) or 2 (separable 2D) symbols
  GeometrySpec geometry;
  NumericsSpec numerics;
  int threads = 0;  // 0 = all cores
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  std::vector<std::string> emit{"all"};  // custom scenario task list
};

/// Parses and fully validates a config file. Throws ConfigError with
/// line-level diagnostics; never partially executes.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Validation result for --validate-only: empty vector = ok.
std::vector<std::string> validate_config(const std::filesystem::path& path);

/// Built-in model presets: "fig1" (next-nearest chain with complex
/// asymmetry), "fig2" (real next-nearest anisotropy, the fragile-square
/// model), "fig2_nn" (nearest-neighbor caption variant), "hatano_nelson".
std::vector<LaurentOperator> model_preset(const std::string& name);

/// Default symbols for a scenario when the config omits the model.
std::vector<LaurentOperator> default_model(Scenario s);

}  // namespace nonbloch
