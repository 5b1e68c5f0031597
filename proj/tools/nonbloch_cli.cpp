#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "nonbloch/config.hpp"
#include "nonbloch/errors.hpp"
#include "nonbloch/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nonbloch: non-Hermitian lattice spectra, Green's-function asymptotics, "
               "and spectral-hierarchy scenarios"};

  std::string config_path;
  std::string scenario_override;
  std::string out_dir;
  int threads = -1;
  long long seed = -1;
  bool validate_only = false;

  app.add_option("--config", config_path, "scenario config file (JSON)");
  app.add_option("--scenario", scenario_override, "scenario name (overrides the config)");
  app.add_option("--out-dir", out_dir, "output directory (overrides the config)");
  app.add_option("--threads", threads, "parallel pool size (0 = all cores)");
  app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_flag("--validate-only", validate_only, "validate the config and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_only) {
      if (config_path.empty()) {
        std::fprintf(stderr, "--validate-only requires --config\n");
        return 2;
      }
      const auto diags = nonbloch::validate_config(config_path);
      if (diags.empty()) {
        std::printf("ok\n");
        return 0;
      }
      for (const auto& d : diags) std::fprintf(stderr, "%s\n", d.c_str());
      return 1;
    }

    nonbloch::ScenarioConfig cfg;
    if (!config_path.empty()) {
      cfg = nonbloch::load_config(config_path);
    } else if (scenario_override.empty()) {
      std::fprintf(stderr, "need --config and/or --scenario\n");
      return 2;
    }
    if (!scenario_override.empty()) {
      const auto s = nonbloch::scenario_from_string(scenario_override);
      if (!s) {
        std::fprintf(stderr, "unknown scenario '%s'\n", scenario_override.c_str());
        return 2;
      }
      cfg.scenario = *s;
      if (config_path.empty()) cfg.model = nonbloch::default_model(cfg.scenario);
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads >= 0) cfg.threads = threads;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

    const auto manifest = nonbloch::run_scenario(cfg);
    std::printf("scenario %s: wrote %zu files under %s\n", manifest.scenario.c_str(),
                manifest.outputs.size(), cfg.out_dir.string().c_str());
    return 0;
  } catch (const nonbloch::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
