#include "nonbloch/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nonbloch/errors.hpp"

namespace nonbloch {

using nlohmann::json;

namespace {

const std::vector<std::pair<Scenario, std::string>> kScenarioNames = {
    {Scenario::fig1_spectra, "fig1_spectra"},
    {Scenario::fig1_lambda_map, "fig1_lambda_map"},
    {Scenario::fig1_profiles, "fig1_profiles"},
    {Scenario::fig2_geometry_spectra, "fig2_geometry_spectra"},
    {Scenario::fig2_vshape_map, "fig2_vshape_map"},
    {Scenario::fig2_greens_map, "fig2_greens_map"},
    {Scenario::fig2_dynamics, "fig2_dynamics"},
    {Scenario::fig2_delta_sweep, "fig2_delta_sweep"},
    {Scenario::hierarchy_table, "hierarchy_table"},
    {Scenario::custom, "custom"},
};

int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

LaurentOperator symbol_from_json(const json& j, const std::string& where,
                                 std::vector<std::string>& diags) {
  std::vector<std::array<double, 3>> triples;
  if (!j.is_array() || j.empty()) {
    diags.push_back(where + ": expected a nonempty list of (s, Re, Im) triples");
    return LaurentOperator({{0, 1.0}});
  }
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_number()) {
      diags.push_back(where + ": each entry must be a numeric triple [s, re, im]");
      return LaurentOperator({{0, 1.0}});
    }
    triples.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
  }
  try {
    return LaurentOperator::from_triples(triples);
  } catch (const Error& e) {
    diags.push_back(where + ": " + e.what());
    return LaurentOperator({{0, 1.0}});
  }
}

struct Parsed {
  ScenarioConfig cfg;
  std::vector<std::string> diags;
};

Parsed parse(const std::filesystem::path& path) {
  Parsed out;
  std::ifstream in(path);
  if (!in) {
    out.diags.push_back("cannot read " + path.string());
    return out;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    out.diags.push_back("line " + std::to_string(line_of_offset(text, e.byte)) +
                        ": JSON parse error: " + e.what());
    return out;
  }
  if (!j.is_object()) {
    out.diags.push_back("top level must be an object");
    return out;
  }

  static const std::vector<std::string> known{"scenario", "model",  "geometry", "numerics",
                                              "threads",  "seed",   "out_dir",  "emit"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      out.diags.push_back("unknown top-level key '" + key + "'");
  }

  ScenarioConfig& cfg = out.cfg;
  if (!j.contains("scenario") || !j["scenario"].is_string()) {
    out.diags.push_back("missing required string field 'scenario'");
  } else {
    const auto s = scenario_from_string(j["scenario"].get<std::string>());
    if (!s) {
      out.diags.push_back("unknown scenario '" + j["scenario"].get<std::string>() + "'");
    } else {
      cfg.scenario = *s;
    }
  }

  if (j.contains("model")) {
    const json& m = j["model"];
    if (m.is_object() && m.contains("preset")) {
      try {
        cfg.model = model_preset(m["preset"].get<std::string>());
      } catch (const Error& e) {
        out.diags.push_back(std::string("model.preset: ") + e.what());
      }
    } else if (m.is_object()) {
      if (m.contains("x")) cfg.model.push_back(symbol_from_json(m["x"], "model.x", out.diags));
      if (m.contains("y")) cfg.model.push_back(symbol_from_json(m["y"], "model.y", out.diags));
      if (!m.contains("x"))
        out.diags.push_back("model: expected 'preset' or coefficient lists 'x' (and 'y')");
    } else {
      out.diags.push_back("model: expected an object");
    }
  }
  if (cfg.model.empty()) cfg.model = default_model(cfg.scenario);

  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    if (!g.is_object()) {
      out.diags.push_back("geometry: expected an object");
    } else {
      if (g.contains("kind")) {
        const std::string kind = g["kind"].get<std::string>();
        if (kind == "interval") cfg.geometry.kind = GeometryKind::interval;
        else if (kind == "square") cfg.geometry.kind = GeometryKind::square;
        else if (kind == "corner_cut") cfg.geometry.kind = GeometryKind::corner_cut;
        else if (kind == "disk") cfg.geometry.kind = GeometryKind::disk;
        else out.diags.push_back("geometry.kind: unknown kind '" + kind + "'");
      }
      if (g.contains("L")) cfg.geometry.length = g["L"].get<int>();
      if (g.contains("cut")) cfg.geometry.cut = g["cut"].get<int>();
      if (g.contains("R")) cfg.geometry.radius = g["R"].get<double>();
      if (g.contains("disorder_w")) cfg.geometry.disorder_w = g["disorder_w"].get<double>();
      if (cfg.geometry.length < 2) out.diags.push_back("geometry.L: must be >= 2");
      if (cfg.geometry.cut < 1) out.diags.push_back("geometry.cut: must be >= 1");
    }
  }

  if (j.contains("numerics")) {
    const json& n = j["numerics"];
    if (!n.is_object()) {
      out.diags.push_back("numerics: expected an object");
    } else {
      NumericsSpec& ns = cfg.numerics;
      auto geti = [&](const char* k, int& dst) {
        if (n.contains(k)) dst = n[k].get<int>();
      };
      auto getd = [&](const char* k, double& dst) {
        if (n.contains(k)) dst = n[k].get<double>();
      };
      geti("chain_length", ns.chain_length);
      geti("bloch_grid", ns.bloch_grid);
      geti("source_site", ns.source_site);
      getd("margin", ns.margin);
      getd("gbz_tol", ns.gbz_tol);
      getd("horizon", ns.horizon);
      getd("dt", ns.dt);
      geti("deltas_per_decade", ns.deltas_per_decade);
      geti("delta_min_exp", ns.delta_min_exp);
      geti("delta_max_exp", ns.delta_max_exp);
      geti("mu_points", ns.mu_points);
      getd("mu_range", ns.mu_range);
      getd("eps", ns.membership_eps);
      if (n.contains("emit_svg")) ns.emit_svg = n["emit_svg"].get<bool>();
      if (n.contains("amoeba_panel")) ns.amoeba_panel = n["amoeba_panel"].get<bool>();
      if (n.contains("omega_grid")) {
        ns.omega_grid = {n["omega_grid"][0].get<int>(), n["omega_grid"][1].get<int>()};
      }
      if (n.contains("frame")) {
        if (!n["frame"].is_array() || n["frame"].size() != 4) {
          out.diags.push_back("numerics.frame: expected [re0, re1, im0, im1]");
        } else {
          ns.frame = {{n["frame"][0].get<double>(), n["frame"][1].get<double>(),
                       n["frame"][2].get<double>(), n["frame"][3].get<double>()}};
        }
      }
      if (n.contains("window_plus"))
        ns.window_plus = {n["window_plus"][0].get<int>(), n["window_plus"][1].get<int>()};
      if (n.contains("window_minus"))
        ns.window_minus = {n["window_minus"][0].get<int>(), n["window_minus"][1].get<int>()};
      if (n.contains("sizes")) {
        ns.sizes.clear();
        for (const auto& v : n["sizes"]) ns.sizes.push_back(v.get<int>());
      }
      if (n.contains("omega_probe"))
        ns.omega_probe = {n["omega_probe"][0].get<double>(), n["omega_probe"][1].get<double>()};
      if (ns.chain_length < 3) out.diags.push_back("numerics.chain_length: must be >= 3");
      if (ns.bloch_grid < 64) out.diags.push_back("numerics.bloch_grid: must be >= 64");
      if (ns.mu_points < 3) out.diags.push_back("numerics.mu_points: must be >= 3");
    }
  }

  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("emit")) {
    cfg.emit.clear();
    for (const auto& v : j["emit"]) cfg.emit.push_back(v.get<std::string>());
  }

  // cross-field checks: chain must exceed the model's hopping range
  for (const auto& op : cfg.model) {
    const int need = op.neg_range() + op.pos_range();
    if (cfg.geometry.length <= need)
      out.diags.push_back("geometry.L: chain shorter than the model's hopping range (need L > " +
                          std::to_string(need) + ")");
    if (cfg.numerics.chain_length <= need)
      out.diags.push_back("numerics.chain_length: shorter than the model's hopping range");
  }
  return out;
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [sc, name] : kScenarioNames)
    if (sc == s) return name;
  return "?";
}

std::optional<Scenario> scenario_from_string(const std::string& name) {
  for (const auto& [sc, n] : kScenarioNames)
    if (n == name) return sc;
  return std::nullopt;
}

std::vector<LaurentOperator> model_preset(const std::string& name) {
  const auto chain = [](double t, cplx s1, cplx s2) {
    return LaurentOperator({{1, t}, {-1, t}, {2, s1}, {-2, s2}});
  };
  if (name == "fig1") return {chain(1.0, 0.5, cplx(0.0, 0.2))};
  if (name == "fig2") {
    const auto h = chain(1.0, 0.2, 0.1);
    return {h, h};
  }
  if (name == "fig2_nn") {
    const LaurentOperator h({{1, 1.2}, {-1, 1.1}});
    return {h, h};
  }
  if (name == "hatano_nelson") return {LaurentOperator({{1, 1.2}, {-1, 1.1}})};
  throw Error("unknown model preset '" + name + "'");
}

std::vector<LaurentOperator> default_model(Scenario s) {
  switch (s) {
    case Scenario::fig1_spectra:
    case Scenario::fig1_lambda_map:
    case Scenario::fig1_profiles:
      return model_preset("fig1");
    default:
      return model_preset("fig2");
  }
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  Parsed p = parse(path);
  if (!p.diags.empty()) {
    std::string msg = "config validation failed:";
    for (const auto& d : p.diags) msg += "\n  - " + d;
    throw ConfigError(msg);
  }
  return p.cfg;
}

std::vector<std::string> validate_config(const std::filesystem::path& path) {
  return parse(path).diags;
}

}  // namespace nonbloch
