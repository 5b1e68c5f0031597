#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nonbloch/config.hpp"
#include "nonbloch/errors.hpp"
#include "nonbloch/io.hpp"
#include "nonbloch/scenarios.hpp"

using namespace nonbloch;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("nonbloch_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("csv writer formats and guards") {
  const auto dir = temp_dir("csv");
  io::Csv csv({"a", "b"});
  csv.row({io::num(0.1), io::num(1.0 / 3.0)});
  csv.write(dir / "t.csv");
  const std::string text = slurp(dir / "t.csv");
  CHECK(text.find("a,b\n") == 0);
  CHECK(text.find("0.1000000000000000") != std::string::npos);
  CHECK_THROWS_AS(csv.row({"only_one"}), Error);
}

TEST_CASE("spectrum and sweep csv round out") {
  const auto dir = temp_dir("clouds");
  SpectrumCloud cloud{{cplx(1.5, -0.25), cplx(0, 2)}, "demo"};
  io::write_spectrum_csv(dir / "s.csv", cloud);
  const std::string s = slurp(dir / "s.csv");
  CHECK(s.find("re,im,source_tag") == 0);
  CHECK(s.find("1.5,-0.25,demo") != std::string::npos);

  SweepResult sweep;
  sweep.deltas = {0.0, 1e-6};
  sweep.max_imag = {1e-14, 2e-5};
  io::write_sweep_csv(dir / "w.csv", sweep);
  CHECK(slurp(dir / "w.csv").find("delta,max_imag") == 0);
}

TEST_CASE("svg emitters produce wellformed-enough documents") {
  const auto dir = temp_dir("svg");
  io::write_scatter_svg(dir / "sc.svg", {{{cplx(0, 0), cplx(1, 1)}, "#112233"}}, "demo");
  const std::string sc = slurp(dir / "sc.svg");
  CHECK(sc.find("<svg") != std::string::npos);
  CHECK(sc.find("</svg>") != std::string::npos);
  CHECK(sc.find("circle") != std::string::npos);

  io::write_heatmap_svg(dir / "h.svg", {0.0, 1.0, 2.0, 3.0}, 2, 2, 0, 1, 0, 1, "demo");
  CHECK(slurp(dir / "h.svg").find("rect") != std::string::npos);
  CHECK_THROWS_AS(io::write_heatmap_svg(dir / "bad.svg", {1.0}, 2, 2, 0, 1, 0, 1, "x"), Error);
}

TEST_CASE("config validation diagnostics") {
  const auto dir = temp_dir("cfg");

  write(dir / "ok.json", R"({"scenario": "fig1_spectra"})");
  CHECK(validate_config(dir / "ok.json").empty());

  write(dir / "bad_scenario.json", R"({"scenario": "fig9_unknown"})");
  auto d1 = validate_config(dir / "bad_scenario.json");
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].find("unknown scenario") != std::string::npos);

  write(dir / "parse.json", "{\n  \"scenario\": \"fig1_spectra\",\n  broken\n}");
  auto d2 = validate_config(dir / "parse.json");
  REQUIRE(!d2.empty());
  CHECK(d2[0].find("line 3") != std::string::npos);

  // missing model coefficients named in the diagnostic
  write(dir / "model.json", R"({"scenario": "fig1_spectra", "model": {"x": []}})");
  auto d3 = validate_config(dir / "model.json");
  REQUIRE(!d3.empty());
  CHECK(d3[0].find("model.x") != std::string::npos);

  // lattice precondition surfaces at validation time
  write(dir / "short.json",
        R"({"scenario": "fig2_delta_sweep", "geometry": {"L": 3}})");
  auto d4 = validate_config(dir / "short.json");
  REQUIRE(!d4.empty());
  CHECK(d4[0].find("hopping range") != std::string::npos);

  write(dir / "unknown_key.json", R"({"scenario": "fig1_spectra", "bogus": 1})");
  auto d5 = validate_config(dir / "unknown_key.json");
  REQUIRE(!d5.empty());
  CHECK(d5[0].find("bogus") != std::string::npos);

  CHECK_THROWS_AS((void)load_config(dir / "bad_scenario.json"), ConfigError);
}

TEST_CASE("model presets and defaults") {
  CHECK(model_preset("fig1").size() == 1);
  CHECK(model_preset("fig2").size() == 2);
  CHECK(model_preset("fig2_nn")[0].pos_range() == 1);
  CHECK(model_preset("hatano_nelson")[0].coeffs().size() == 2);
  CHECK_THROWS_AS((void)model_preset("nope"), Error);
  CHECK(default_model(Scenario::fig1_spectra).size() == 1);
  CHECK(default_model(Scenario::fig2_delta_sweep).size() == 2);
}

TEST_CASE("run_scenario writes a complete manifest and is rerun-stable") {
  const auto dir = temp_dir("scenario");
  ScenarioConfig cfg;
  cfg.scenario = Scenario::fig1_spectra;
  cfg.model = model_preset("fig1");
  cfg.numerics.chain_length = 40;  // small but structurally complete
  cfg.numerics.gbz_tol = 0.1;
  cfg.numerics.emit_svg = true;
  cfg.out_dir = dir / "run1";
  const auto m1 = run_scenario(cfg);
  CHECK(m1.outputs.size() >= 4);
  for (const auto& f : m1.outputs) CHECK(fs::exists(cfg.out_dir / f));

  // no orphan files beyond the manifest itself
  std::size_t found = 0;
  for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
    if (entry.path().filename() == "manifest.json") continue;
    ++found;
  }
  CHECK(found == m1.outputs.size());

  cfg.out_dir = dir / "run2";
  const auto m2 = run_scenario(cfg);
  REQUIRE(m1.outputs == m2.outputs);
  for (const auto& f : m1.outputs)
    CHECK(slurp(dir / "run1" / f) == slurp(dir / "run2" / f));

  // manifests identical after dropping the timestamp
  auto load = [](const fs::path& p) {
    auto j = nlohmann::json::parse(std::ifstream(p));
    j.erase("timestamp");
    return j;
  };
  CHECK(load(dir / "run1" / "manifest.json") == load(dir / "run2" / "manifest.json"));
}

TEST_CASE("custom scenario with a Hermitian symbol reports only two zones") {
  const auto dir = temp_dir("hermitian_zones");
  ScenarioConfig cfg;
  cfg.scenario = Scenario::custom;
  cfg.model = {LaurentOperator({{1, 1.0}, {-1, 1.0}})};
  cfg.emit = {"hierarchy"};
  cfg.numerics.omega_grid = {9, 7};
  cfg.threads = 2;
  cfg.out_dir = dir;
  const auto manifest = run_scenario(cfg);
  const std::string csv = slurp(dir / "hierarchy_zones.csv");
  CHECK(csv.find("inside_amoeba") != std::string::npos);
  CHECK(csv.find("outside_bloch") != std::string::npos);
  CHECK(csv.find("outside_amoeba_inside_bloch") == std::string::npos);
}
