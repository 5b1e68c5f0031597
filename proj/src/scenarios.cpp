#include "nonbloch/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <fstream>
#include <json.hpp>

#include "nonbloch/dynamics.hpp"
#include "nonbloch/errors.hpp"
#include "nonbloch/gbz.hpp"
#include "nonbloch/greens.hpp"
#include "nonbloch/hierarchy.hpp"
#include "nonbloch/io.hpp"
#include "nonbloch/spectra.hpp"

namespace nonbloch {

using nlohmann::json;

namespace {

// Tracks every file written so the manifest has no orphans.
struct Emitter {
  std::filesystem::path dir;
  std::vector<std::string> files;

  std::filesystem::path path(const std::string& name) {
    files.push_back(name);
    return dir / name;
  }
};

OperatorMatrix squared_matrix(const OperatorMatrix& h) {
  OperatorMatrix out = h;
  out.entries = h.entries * h.entries;
  return out;
}

OperatorMatrix build_geometry_matrix(const ScenarioConfig& cfg, GeometryKind kind) {
  if (cfg.model.size() != 2) throw Error("2D scenario needs a two-symbol model");
  const int length = cfg.geometry.length;
  const auto hx = build_1d(cfg.model[0], length, BoundaryCondition::open);
  const auto hy = build_1d(cfg.model[1], length, BoundaryCondition::open);
  const auto square = kron_sum_2d(hx, hy);
  const int range = square.geometry.hop_range();
  switch (kind) {
    case GeometryKind::square:
      return square;
    case GeometryKind::corner_cut:
      return restrict_geometry(square,
                               LatticeGeometry::corner_cut(length, cfg.geometry.cut, range));
    case GeometryKind::disk: {
      const double radius = cfg.geometry.radius > 0 ? cfg.geometry.radius : length / 2.0;
      return restrict_geometry(square, LatticeGeometry::disk(length, radius, range));
    }
    default:
      throw Error("unsupported geometry kind for this scenario");
  }
}

std::array<double, 4> frame_of(const std::vector<cplx>& values, double pad_frac) {
  double re0 = values[0].real(), re1 = re0, im0 = values[0].imag(), im1 = im0;
  for (const cplx& v : values) {
    re0 = std::min(re0, v.real());
    re1 = std::max(re1, v.real());
    im0 = std::min(im0, v.imag());
    im1 = std::max(im1, v.imag());
  }
  const double pr = pad_frac * std::max(1e-6, re1 - re0);
  const double pi = pad_frac * std::max(1e-6, im1 - im0);
  return {re0 - pr, re1 + pr, im0 - pi, im1 + pi};
}

std::vector<cplx> grid_over_frame(const std::array<double, 4>& f, int nx, int ny) {
  std::vector<cplx> grid;
  grid.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      grid.emplace_back(f[0] + (f[1] - f[0]) * i / std::max(1, nx - 1),
                        f[2] + (f[3] - f[2]) * j / std::max(1, ny - 1));
  return grid;
}

MuSearchConfig mu_config(const ScenarioConfig& cfg) {
  MuSearchConfig m;
  m.mu_min = -cfg.numerics.mu_range;
  m.mu_max = cfg.numerics.mu_range;
  m.points_per_axis = cfg.numerics.mu_points;
  m.eps = cfg.numerics.membership_eps;
  return m;
}

// ---------------------------------------------------------------------------
// scenario bodies

void run_fig1_spectra(const ScenarioConfig& cfg, Emitter& em) {
  const auto& op = cfg.model.front();
  const auto sq = product(op, op);
  const int length = cfg.numerics.chain_length;

  const auto h = build_1d(op, length, BoundaryCondition::open);
  const auto h_sq = squared_matrix(h);                             // H[h]^2
  const auto h_of_sq = build_1d(sq, length, BoundaryCondition::open);  // H[h^2]

  const auto spec_plain = eig(h);
  auto spec_sq = eig(h_sq);
  spec_sq.source_tag = "squared_operator";
  auto spec_of_sq = eig(h_of_sq);
  spec_of_sq.source_tag = "squared_symbol";
  io::write_spectrum_csv(em.path("spectrum_squared_operator.csv"), spec_sq);
  io::write_spectrum_csv(em.path("spectrum_squared_symbol.csv"), spec_of_sq);

  const auto gbz_plain = gbz_1d(op, spec_plain.values, cfg.numerics.gbz_tol);
  const auto gbz_sq = gbz_1d(sq, spec_of_sq.values, cfg.numerics.gbz_tol);
  io::write_gbz_csv(em.path("gbz_plain.csv"), gbz_plain);
  io::write_gbz_csv(em.path("gbz_squared.csv"), gbz_sq);

  if (cfg.numerics.emit_svg) {
    io::write_scatter_svg(em.path("spectra.svg"),
                          {{spec_sq.values, "#e07b39"}, {spec_of_sq.values, "#1f6fb4"}},
                          "spectra: squared operator (orange) vs squared symbol (blue)");
    std::vector<cplx> b1, b2;
    for (const auto& p : gbz_plain.points) b1.push_back(p.beta);
    for (const auto& p : gbz_sq.points) b2.push_back(p.beta);
    io::write_scatter_svg(em.path("gbz.svg"), {{b1, "#e07b39"}, {b2, "#1f6fb4"}},
                          "GBZ of h (orange) and h^2 (blue)");
  }
}

struct LambdaMapRow {
  cplx omega;
  GreensProfile fit;
  LambdaPrediction pred;
};

std::vector<LambdaMapRow> lambda_map(const ScenarioConfig& cfg) {
  const auto& op = cfg.model.front();
  const int length = cfg.numerics.chain_length;
  const int source = cfg.numerics.source_site > 0 ? cfg.numerics.source_site : length / 2;
  const auto h_sq = squared_matrix(build_1d(op, length, BoundaryCondition::open));

  std::array<double, 4> frame;
  if (cfg.numerics.frame) {
    frame = *cfg.numerics.frame;
  } else {
    auto spec_sq = eig(h_sq);
    const auto spec_of_sq =
        eig(build_1d(product(op, op), length, BoundaryCondition::open));
    std::vector<cplx> all = spec_sq.values;
    all.insert(all.end(), spec_of_sq.values.begin(), spec_of_sq.values.end());
    frame = frame_of(all, 0.1);
  }

  const auto grid = grid_over_frame(frame, cfg.numerics.omega_grid[0], cfg.numerics.omega_grid[1]);
  std::vector<LambdaMapRow> rows(grid.size());
  const FitWindow wp{cfg.numerics.window_plus[0], cfg.numerics.window_plus[1]};
  const FitWindow wm{cfg.numerics.window_minus[0], cfg.numerics.window_minus[1]};
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    LambdaMapRow row;
    row.omega = grid[i];
    try {
      const auto col = greens_column(h_sq, source - 1, row.omega);
      row.fit = fit_lambda_shape(col, row.omega, source, wp, wm, cfg.numerics.margin);
    } catch (const NearSpectrumError&) {
      row.fit.omega = row.omega;  // r2 stays 0: excluded point
    }
    try {
      row.pred = lambda_pm_predict(op, row.omega, LambdaMechanism::squared_factorization);
    } catch (const Error&) {
      row.pred.omega = row.omega;
    }
    rows[i] = row;
  });
  return rows;
}

void write_lambda_map(const std::vector<LambdaMapRow>& rows, const ScenarioConfig& cfg,
                      Emitter& em) {
  io::Csv csv({"re_omega", "im_omega", "lambda_plus", "lambda_minus", "r2_plus", "r2_minus",
               "shape", "pred_lambda_plus", "pred_lambda_minus"});
  for (const auto& r : rows)
    csv.row({io::num(r.omega.real()), io::num(r.omega.imag()), io::num(r.fit.lambda_plus),
             io::num(r.fit.lambda_minus), io::num(r.fit.r2_plus), io::num(r.fit.r2_minus),
             to_string(r.fit.shape), io::num(r.pred.lambda_plus),
             io::num(r.pred.lambda_minus)});
  csv.write(em.path("lambda_map.csv"));
  if (cfg.numerics.emit_svg) {
    std::vector<double> vals;
    for (const auto& r : rows) vals.push_back(r.fit.lambda_plus - r.fit.lambda_minus);
    const auto f = cfg.numerics.frame.value_or(frame_of(
        [&] {
          std::vector<cplx> os;
          for (const auto& r : rows) os.push_back(r.omega);
          return os;
        }(),
        0.0));
    io::write_heatmap_svg(em.path("lambda_map.svg"), vals, cfg.numerics.omega_grid[0],
                          cfg.numerics.omega_grid[1], f[0], f[1], f[2], f[3],
                          "lambda_+ - lambda_-");
  }
}

void run_fig1_profiles(const ScenarioConfig& cfg, Emitter& em) {
  const auto rows = lambda_map(cfg);
  write_lambda_map(rows, cfg, em);
  // one representative profile per classified region of the computed map
  const auto& op = cfg.model.front();
  const int length = cfg.numerics.chain_length;
  const int source = cfg.numerics.source_site > 0 ? cfg.numerics.source_site : length / 2;
  const auto h_sq = squared_matrix(build_1d(op, length, BoundaryCondition::open));
  for (const ProfileShape want :
       {ProfileShape::V, ProfileShape::Lambda, ProfileShape::directional}) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const LambdaMapRow& r) {
      return r.fit.shape == want && r.fit.r2_plus > 0.9 && r.fit.r2_minus > 0.9;
    });
    if (it == rows.end()) continue;
    const auto col = greens_column(h_sq, source - 1, it->omega);
    const auto profile = fit_lambda_shape(col, it->omega, source,
                                          {cfg.numerics.window_plus[0], cfg.numerics.window_plus[1]},
                                          {cfg.numerics.window_minus[0], cfg.numerics.window_minus[1]},
                                          cfg.numerics.margin);
    io::write_profile_csv(em.path("profile_" + to_string(want) + ".csv"), profile);
  }
}

void run_fig2_geometry_spectra(const ScenarioConfig& cfg, Emitter& em) {
  const int length = cfg.geometry.length;
  const auto hx = build_1d(cfg.model[0], length, BoundaryCondition::open);
  const auto hy = build_1d(cfg.model[1], length, BoundaryCondition::open);

  auto clean = eig(kron_sum_2d(hx, hy));
  clean.source_tag = "clean_square";
  io::write_spectrum_csv(em.path("spectrum_clean_square.csv"), clean);

  auto pbc = bloch_spectrum({cfg.model[0], cfg.model[1]}, cfg.numerics.bloch_grid);
  io::write_spectrum_csv(em.path("spectrum_pbc.csv"), pbc);

  const auto corner = build_geometry_matrix(cfg, GeometryKind::corner_cut);
  auto corner_spec = eig(corner);
  corner_spec.source_tag = "corner_cut";
  io::write_spectrum_csv(em.path("spectrum_corner_cut.csv"), corner_spec);

  const auto square = kron_sum_2d(hx, hy);
  const auto disordered = add_onsite(
      square, Perturbation::boundary_disorder(square.geometry, cfg.geometry.disorder_w, cfg.seed));
  auto dis_spec = eig(disordered);
  dis_spec.source_tag = "boundary_disorder";
  io::write_spectrum_csv(em.path("spectrum_boundary_disorder.csv"), dis_spec);

  const auto disk = build_geometry_matrix(cfg, GeometryKind::disk);
  auto disk_spec = eig(disk);
  disk_spec.source_tag = "disk";
  io::write_spectrum_csv(em.path("spectrum_disk.csv"), disk_spec);

  if (cfg.numerics.amoeba_panel) {
    // amoebic-spectrum panel: zone map over the spectral frame
    std::vector<cplx> all = clean.values;
    all.insert(all.end(), pbc.values.begin(), pbc.values.end());
    const auto frame = cfg.numerics.frame.value_or(frame_of(all, 0.15));
    const auto grid = grid_over_frame(frame, cfg.numerics.omega_grid[0], cfg.numerics.omega_grid[1]);
    const auto verdicts =
        hierarchy_classify({cfg.model[0], cfg.model[1]}, grid, mu_config(cfg), cfg.threads);
    io::write_verdict_csv(em.path("amoeba_zones.csv"), verdicts);
  }

  if (cfg.numerics.emit_svg) {
    io::write_scatter_svg(
        em.path("geometry_spectra.svg"),
        {{clean.values, "#444444"},
         {corner_spec.values, "#e07b39"},
         {dis_spec.values, "#1f6fb4"},
         {disk_spec.values, "#2e9e62"}},
        "spectra: clean (grey), corner-cut (orange), disorder (blue), disk (green)");
  }
}

void run_fig2_vshape_map(const ScenarioConfig& cfg, Emitter& em) {
  // ln I(omega) over the frame for each size; slope of ln I vs L per omega
  const auto frame = cfg.numerics.frame.value_or(std::array<double, 4>{-4.8, 4.8, -0.6, 0.6});
  const auto grid = grid_over_frame(frame, cfg.numerics.omega_grid[0], cfg.numerics.omega_grid[1]);

  io::Csv csv({"re_omega", "im_omega", "value", "L"});
  std::vector<std::vector<double>> ln_i(cfg.numerics.sizes.size(),
                                        std::vector<double>(grid.size()));
  for (std::size_t li = 0; li < cfg.numerics.sizes.size(); ++li) {
    const int length = cfg.numerics.sizes[li];
    const auto hx = build_1d(cfg.model[0], length, BoundaryCondition::open);
    const auto hy = build_1d(cfg.model[1], length, BoundaryCondition::open);
    const auto h2 = kron_sum_2d(hx, hy);
    auto& row = ln_i[li];
    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
      try {
        row[i] = std::log(vshape_proxy(h2, grid[i]));
      } catch (const NearSpectrumError&) {
        row[i] = std::numeric_limits<double>::quiet_NaN();
      }
    });
    for (std::size_t i = 0; i < grid.size(); ++i)
      csv.row({io::num(grid[i].real()), io::num(grid[i].imag()), io::num(row[i]),
               std::to_string(length)});
  }
  csv.write(em.path("vshape_map.csv"));

  if (cfg.numerics.sizes.size() >= 3) {
    io::Csv slopes({"re_omega", "im_omega", "slope", "r2"});
    std::vector<double> ls(cfg.numerics.sizes.begin(), cfg.numerics.sizes.end());
    std::vector<double> slope_vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<double> ys;
      std::vector<double> xs;
      for (std::size_t li = 0; li < ls.size(); ++li) {
        if (std::isfinite(ln_i[li][i])) {
          xs.push_back(ls[li]);
          ys.push_back(ln_i[li][i]);
        }
      }
      const auto fit = fit_line(xs, ys);
      slope_vals[i] = xs.size() >= 3 ? fit.slope : std::numeric_limits<double>::quiet_NaN();
      slopes.row({io::num(grid[i].real()), io::num(grid[i].imag()), io::num(slope_vals[i]),
                  io::num(fit.r2)});
    }
    slopes.write(em.path("vshape_slope.csv"));
    if (cfg.numerics.emit_svg)
      io::write_heatmap_svg(em.path("vshape_slope.svg"), slope_vals, cfg.numerics.omega_grid[0],
                            cfg.numerics.omega_grid[1], frame[0], frame[1], frame[2], frame[3],
                            "d ln I / d L");
  }
}

void run_fig2_greens_map(const ScenarioConfig& cfg, Emitter& em) {
  const int length = cfg.geometry.length;
  const auto hx = build_1d(cfg.model[0], length, BoundaryCondition::open);
  const auto hy = build_1d(cfg.model[1], length, BoundaryCondition::open);
  const auto h2 = kron_sum_2d(hx, hy);
  const cplx omega(cfg.numerics.omega_probe[0], cfg.numerics.omega_probe[1]);
  const int cx = cfg.numerics.source_site > 0 ? cfg.numerics.source_site : (length + 1) / 2;
  const int source = (cx - 1) * length + (cx - 1);

  const auto col = greens_column(h2, source, omega);
  io::Csv csv({"x", "y", "ln_abs_g"});
  std::vector<double> vals(static_cast<std::size_t>(length) * length);
  for (int x = 1; x <= length; ++x)
    for (int y = 1; y <= length; ++y) {
      const double a = std::abs(col((x - 1) * length + (y - 1)));
      const double v = a >= 1e-280 ? std::log(a) : std::numeric_limits<double>::quiet_NaN();
      vals[static_cast<std::size_t>(y - 1) * length + (x - 1)] = v;
      csv.row({std::to_string(x), std::to_string(y), io::num(v)});
    }
  csv.write(em.path("greens_map.csv"));
  if (cfg.numerics.emit_svg)
    io::write_heatmap_svg(em.path("greens_map.svg"), vals, length, length, 1, length, 1, length,
                          "ln |G(r, r0)|");

  // cuts through the source: antidiagonal and the two axes
  io::Csv cuts({"cut", "offset", "ln_abs_g"});
  for (int d = -(cx - 1); d <= length - cx; ++d) {
    const int x = cx + d, y = cx - d;
    if (y >= 1 && y <= length)
      cuts.row({"antidiagonal", std::to_string(d),
                io::num(std::log(std::max(1e-300, std::abs(col((x - 1) * length + (y - 1))))))});
  }
  for (int d = -(cx - 1); d <= length - cx; ++d) {
    cuts.row({"x_axis", std::to_string(d),
              io::num(std::log(std::max(1e-300, std::abs(col((cx + d - 1) * length + (cx - 1))))))});
    cuts.row({"y_axis", std::to_string(d),
              io::num(std::log(std::max(1e-300, std::abs(col((cx - 1) * length + (cx + d - 1))))))});
  }
  cuts.write(em.path("greens_cuts.csv"));
}

void run_fig2_dynamics(const ScenarioConfig& cfg, Emitter& em) {
  const int length = cfg.geometry.length;
  const int center_coord = (length + 1) / 2;
  const int center = (center_coord - 1) * length + (center_coord - 1);
  EvolveOptions opts;
  opts.horizon = cfg.numerics.horizon;
  opts.dt = cfg.numerics.dt;

  const auto open_x = build_1d(cfg.model[0], length, BoundaryCondition::open);
  const auto open_y = build_1d(cfg.model[1], length, BoundaryCondition::open);
  const auto square = kron_sum_2d(open_x, open_y);
  io::write_trajectory_csv(em.path("trajectory_clean.csv"), evolve(square, center, opts));

  const auto bumped = add_onsite(square, Perturbation::corner_onsite(square.geometry, 1.0));
  io::write_trajectory_csv(em.path("trajectory_corner.csv"), evolve(bumped, center, opts));

  const auto torus = kron_sum_2d(build_1d(cfg.model[0], length, BoundaryCondition::periodic),
                                 build_1d(cfg.model[1], length, BoundaryCondition::periodic));
  io::write_trajectory_csv(em.path("trajectory_pbc.csv"), evolve(torus, center, opts));
}

void run_fig2_delta_sweep(const ScenarioConfig& cfg, Emitter& em) {
  const int length = cfg.geometry.length;
  auto builder = [&](double delta) {
    const auto hx = build_1d(cfg.model[0], length, BoundaryCondition::open);
    const auto hy = build_1d(cfg.model[1], length, BoundaryCondition::open);
    const auto square = kron_sum_2d(hx, hy);
    return add_onsite(square, Perturbation::corner_onsite(square.geometry, delta));
  };
  std::vector<double> deltas{0.0};
  for (int e = cfg.numerics.delta_min_exp * cfg.numerics.deltas_per_decade;
       e <= cfg.numerics.delta_max_exp * cfg.numerics.deltas_per_decade; ++e)
    deltas.push_back(std::pow(10.0, double(e) / cfg.numerics.deltas_per_decade));
  const auto sweep = delta_sweep(builder, deltas);
  io::write_sweep_csv(em.path("delta_sweep.csv"), sweep);

  json summary;
  summary["L"] = length;
  summary["noise_floor"] = sweep.noise_floor;
  if (sweep.delta_c) summary["delta_c"] = *sweep.delta_c;
  std::ofstream(em.path("delta_sweep_summary.json")) << summary.dump(2) << "\n";
}

void run_hierarchy_table(const ScenarioConfig& cfg, Emitter& em) {
  const bool two_d = cfg.model.size() == 2;
  const SymbolSet symbols(cfg.model.begin(), cfg.model.end());

  std::array<double, 4> frame;
  if (cfg.numerics.frame) {
    frame = *cfg.numerics.frame;
  } else {
    const auto bloch = bloch_spectrum(cfg.model, cfg.numerics.bloch_grid);
    frame = frame_of(bloch.values, 0.4);
  }
  const auto grid = grid_over_frame(frame, cfg.numerics.omega_grid[0], cfg.numerics.omega_grid[1]);
  const auto verdicts = hierarchy_classify(symbols, grid, mu_config(cfg), cfg.threads);
  io::write_verdict_csv(em.path("hierarchy_zones.csv"), verdicts);

  // cross-checks on one representative omega per zone
  json checks = json::array();
  for (const Zone zone :
       {Zone::outside_bloch, Zone::outside_amoeba_inside_bloch, Zone::inside_amoeba}) {
    const auto it = std::find_if(verdicts.begin(), verdicts.end(),
                                 [&](const HierarchyVerdict& v) { return v.zone == zone; });
    if (it == verdicts.end()) continue;
    json entry;
    entry["zone"] = to_string(zone);
    entry["omega"] = {it->omega.real(), it->omega.imag()};
    const int length = std::min(cfg.geometry.length, two_d ? 24 : 120);
    if (two_d) {
      const auto h2 = kron_sum_2d(build_1d(cfg.model[0], length, BoundaryCondition::open),
                                  build_1d(cfg.model[1], length, BoundaryCondition::open));
      try {
        entry["ln_vshape_proxy"] = std::log(vshape_proxy(h2, it->omega));
      } catch (const NearSpectrumError&) {
        entry["ln_vshape_proxy"] = nullptr;
      }
    } else {
      const auto h = build_1d(cfg.model[0], length, BoundaryCondition::open);
      try {
        const auto col = greens_column(h, length / 2, it->omega);
        entry["max_abs_g"] = col.cwiseAbs().maxCoeff();
      } catch (const NearSpectrumError&) {
        entry["max_abs_g"] = nullptr;
      }
    }
    if (zone != Zone::inside_amoeba && it->mu_star) {
      const auto h = two_d
                         ? kron_sum_2d(build_1d(cfg.model[0], 20, BoundaryCondition::open),
                                       build_1d(cfg.model[1], 20, BoundaryCondition::open))
                         : build_1d(cfg.model[0], 80, BoundaryCondition::open);
      try {
        const auto rep = gauge_bound_check(h, symbols, it->omega, *it->mu_star, mu_config(cfg));
        entry["gauge_bound_holds"] = rep.bound_holds;
        entry["gauge_bound_max_ratio"] = rep.max_ratio;
      } catch (const Error&) {
        entry["gauge_bound_holds"] = nullptr;
      }
    }
    checks.push_back(entry);
  }
  std::ofstream(em.path("hierarchy_checks.json")) << checks.dump(2) << "\n";
}

void run_custom(const ScenarioConfig& cfg, Emitter& em) {
  auto wants = [&](const std::string& what) {
    return std::find(cfg.emit.begin(), cfg.emit.end(), what) != cfg.emit.end() ||
           std::find(cfg.emit.begin(), cfg.emit.end(), "all") != cfg.emit.end();
  };
  const bool two_d = cfg.model.size() == 2;
  if (wants("spectrum")) {
    if (two_d) {
      auto cloud = eig(build_geometry_matrix(cfg, cfg.geometry.kind));
      io::write_spectrum_csv(em.path("spectrum.csv"), cloud);
    } else {
      auto cloud = eig(build_1d(cfg.model[0], cfg.numerics.chain_length, BoundaryCondition::open));
      io::write_spectrum_csv(em.path("spectrum.csv"), cloud);
    }
  }
  if (wants("bloch"))
    io::write_spectrum_csv(em.path("bloch.csv"), bloch_spectrum(cfg.model, cfg.numerics.bloch_grid));
  if (wants("gbz") && !two_d) {
    const auto energies =
        eig(build_1d(cfg.model[0], cfg.numerics.chain_length, BoundaryCondition::open));
    io::write_gbz_csv(em.path("gbz.csv"),
                      gbz_1d(cfg.model[0], energies.values, cfg.numerics.gbz_tol));
  }
  if (wants("matrix")) {
    const auto h = two_d
                       ? build_geometry_matrix(cfg, cfg.geometry.kind)
                       : build_1d(cfg.model[0], cfg.numerics.chain_length, BoundaryCondition::open);
    io::write_matrix_triplets_csv(em.path("matrix.csv"), h);
  }
  if (wants("potential") && !two_d) {
    const int length = cfg.numerics.chain_length;
    const auto h = build_1d(cfg.model[0], length, BoundaryCondition::open);
    const cplx omega(cfg.numerics.omega_probe[0], cfg.numerics.omega_probe[1]);
    const auto cloud = eig(h);
    const double phi = coulomb_potential(cloud, omega);
    const auto g_first = greens_column(h, 0, omega);
    const auto g_last = greens_column(h, length - 1, omega);
    const EndpointGreens eg{g_first(0), g_last(length - 1), g_last(0), g_first(length - 1)};
    io::write_potential_json(em.path("potential.json"),
                             perturbation_series(eg, 1e-3, length, omega, phi));
  }
  if (wants("hierarchy")) run_hierarchy_table(cfg, em);
}

}  // namespace

RunManifest run_scenario(const ScenarioConfig& cfg) {
  Emitter em;
  em.dir = cfg.out_dir;
  std::filesystem::create_directories(em.dir);

  switch (cfg.scenario) {
    case Scenario::fig1_spectra: run_fig1_spectra(cfg, em); break;
    case Scenario::fig1_lambda_map: {
      const auto rows = lambda_map(cfg);
      write_lambda_map(rows, cfg, em);
      break;
    }
    case Scenario::fig1_profiles: run_fig1_profiles(cfg, em); break;
    case Scenario::fig2_geometry_spectra: run_fig2_geometry_spectra(cfg, em); break;
    case Scenario::fig2_vshape_map: run_fig2_vshape_map(cfg, em); break;
    case Scenario::fig2_greens_map: run_fig2_greens_map(cfg, em); break;
    case Scenario::fig2_dynamics: run_fig2_dynamics(cfg, em); break;
    case Scenario::fig2_delta_sweep: run_fig2_delta_sweep(cfg, em); break;
    case Scenario::hierarchy_table: run_hierarchy_table(cfg, em); break;
    case Scenario::custom: run_custom(cfg, em); break;
  }

  // manifest: config echo + versions + seeds + every output file
  json manifest;
  manifest["tool"] = "nonbloch";
  manifest["version"] = "1.0.0";
  manifest["scenario"] = to_string(cfg.scenario);
  manifest["seed"] = cfg.seed;
  manifest["threads"] = cfg.threads;
  json model = json::array();
  for (const auto& op : cfg.model) {
    json sym = json::array();
    for (const auto& [s, t] : op.coeffs()) sym.push_back({s, t.real(), t.imag()});
    model.push_back(sym);
  }
  manifest["model"] = model;
  manifest["geometry"] = {{"kind", to_string(cfg.geometry.kind)},
                          {"L", cfg.geometry.length},
                          {"cut", cfg.geometry.cut},
                          {"R", cfg.geometry.radius},
                          {"disorder_w", cfg.geometry.disorder_w}};
  manifest["outputs"] = em.files;
  manifest["timestamp"] = static_cast<std::int64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());

  RunManifest out;
  out.scenario = to_string(cfg.scenario);
  out.outputs = em.files;
  out.manifest_path = em.dir / "manifest.json";
  std::ofstream(out.manifest_path) << manifest.dump(2) << "\n";
  return out;
}

}  // namespace nonbloch
