#include "nonbloch/hierarchy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "nonbloch/errors.hpp"

namespace nonbloch {

namespace {

// h(k - i mu) over the uniform k-grid; h(k - i mu) has coefficients t_s e^{s mu}.
std::vector<cplx> deformed_samples(const LaurentOperator& op, double mu, int grid) {
  std::vector<cplx> out(grid);
  const LaurentOperator scaled = op.scaled(std::exp(mu));
  for (int i = 0; i < grid; ++i) out[i] = scaled.eval_k(kTwoPi * i / grid);
  return out;
}

// Winding of the closed sequence f around 0 via summed phase increments.
// Returns the raw (un-rounded) value.
double phase_winding(const std::vector<cplx>& f) {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const cplx a = f[j];
    const cplx b = f[(j + 1) % f.size()];
    acc += std::arg(b * std::conj(a));
  }
  return acc / kTwoPi;
}

struct LineScan {
  std::vector<int> w;
  double gap = 0.0;
  bool agree = true;
  double min_abs = std::numeric_limits<double>::infinity();
};

// Per-line windings of omega - hx_i - hy_j along each axis. For 1D pass an
// empty hy (single line).
LineScan scan_lines(cplx omega, const std::vector<cplx>& hx, const std::vector<cplx>& hy) {
  LineScan out;
  if (hy.empty()) {
    std::vector<cplx> f(hx.size());
    for (std::size_t i = 0; i < hx.size(); ++i) {
      f[i] = omega - hx[i];
      out.min_abs = std::min(out.min_abs, std::abs(f[i]));
    }
    const double raw = phase_winding(f);
    const double rounded = std::round(raw);
    out.w = {static_cast<int>(rounded)};
    out.gap = std::abs(raw - rounded);
    return out;
  }

  const int nx = static_cast<int>(hx.size());
  const int ny = static_cast<int>(hy.size());
  std::vector<cplx> f(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i) {
    const cplx base = omega - hx[i];
    for (int j = 0; j < ny; ++j) {
      const cplx v = base - hy[j];
      f[static_cast<std::size_t>(i) * ny + j] = v;
      const double a = std::abs(v);
      if (a < out.min_abs) out.min_abs = a;
    }
  }
  auto axis_winding = [&](bool along_x) {
    const int lines = along_x ? ny : nx;
    const int steps = along_x ? nx : ny;
    int w_first = 0;
    for (int line = 0; line < lines; ++line) {
      double acc = 0.0;
      for (int s = 0; s < steps; ++s) {
        const cplx a = along_x ? f[static_cast<std::size_t>(s) * ny + line]
                               : f[static_cast<std::size_t>(line) * ny + s];
        const int sn = (s + 1) % steps;
        const cplx b = along_x ? f[static_cast<std::size_t>(sn) * ny + line]
                               : f[static_cast<std::size_t>(line) * ny + sn];
        acc += std::arg(b * std::conj(a));
      }
      const double raw = acc / kTwoPi;
      const double rounded = std::round(raw);
      out.gap = std::max(out.gap, std::abs(raw - rounded));
      const int wi = static_cast<int>(rounded);
      if (line == 0) {
        w_first = wi;
      } else if (wi != w_first) {
        out.agree = false;
      }
    }
    return w_first;
  };
  const int wx = axis_winding(true);
  const int wy = axis_winding(false);
  out.w = {wx, wy};
  return out;
}

// Local zoom refinement of min_k |omega - h(k - i mu)| around a seed.
double refine_seed_1d(const LaurentOperator& op, double mu, cplx omega, double k0, double width,
                      int levels) {
  const LaurentOperator scaled = op.scaled(std::exp(mu));
  double best = std::numeric_limits<double>::infinity();
  for (int lev = 0; lev < levels; ++lev) {
    double arg_best = k0;
    for (int i = -4; i <= 4; ++i) {
      const double k = k0 + width * i / 4.0;
      const double d = std::abs(omega - scaled.eval_k(k));
      if (d < best) {
        best = d;
        arg_best = k;
      }
    }
    k0 = arg_best;
    width /= 2.0;
  }
  return best;
}

double refine_seed_2d(const LaurentOperator& ox, const LaurentOperator& oy, double mux,
                      double muy, cplx omega, double kx0, double ky0, double width, int levels) {
  const LaurentOperator sx = ox.scaled(std::exp(mux));
  const LaurentOperator sy = oy.scaled(std::exp(muy));
  double best = std::numeric_limits<double>::infinity();
  for (int lev = 0; lev < levels; ++lev) {
    double bx = kx0, by = ky0;
    for (int i = -4; i <= 4; ++i) {
      const cplx vx = sx.eval_k(kx0 + width * i / 4.0);
      for (int j = -4; j <= 4; ++j) {
        const double d = std::abs(omega - vx - sy.eval_k(ky0 + width * j / 4.0));
        if (d < best) {
          best = d;
          bx = kx0 + width * i / 4.0;
          by = ky0 + width * j / 4.0;
        }
      }
    }
    kx0 = bx;
    ky0 = by;
    width /= 2.0;
  }
  return best;
}

}  // namespace

std::string to_string(Zone z) {
  switch (z) {
    case Zone::outside_bloch: return "outside_bloch";
    case Zone::outside_amoeba_inside_bloch: return "outside_amoeba_inside_bloch";
    case Zone::inside_amoeba: return "inside_amoeba";
  }
  return "?";
}

WindingResult winding(const SymbolSet& symbols, cplx omega, const std::vector<double>& mu,
                      const WindingOptions& opts) {
  if (symbols.empty() || symbols.size() > 2) throw Error("winding: need 1 or 2 symbols");
  if (mu.size() != symbols.size()) throw Error("winding: mu dimension mismatch");
  const int grid = symbols.size() == 1 ? opts.kgrid_1d : opts.kgrid_2d;
  const auto hx = deformed_samples(symbols[0], mu[0], grid);
  const std::vector<cplx> hy =
      symbols.size() == 2 ? deformed_samples(symbols[1], mu[1], grid) : std::vector<cplx>{};
  const LineScan scan = scan_lines(omega, hx, hy);
  if (scan.min_abs < 1e-13)
    throw Error("winding: k-grid point hits a zero of omega - h (refine or reject)");
  if (scan.gap > opts.max_rounding_gap)
    throw Error("winding: rounding gap exceeds threshold; omega too close to the deformed set");
  return WindingResult{scan.w, scan.gap, scan.agree, scan.min_abs};
}

double deformed_bloch_distance(const SymbolSet& symbols, cplx omega,
                               const std::vector<double>& mu, const WindingOptions& opts) {
  if (symbols.empty() || symbols.size() > 2) throw Error("distance: need 1 or 2 symbols");
  constexpr int kLevels = 13;
  if (symbols.size() == 1) {
    const int grid = opts.kgrid_1d;
    const auto hx = deformed_samples(symbols[0], mu[0], grid);
    // best few grid minima as refinement seeds
    std::vector<std::pair<double, int>> d(grid);
    for (int i = 0; i < grid; ++i) d[i] = {std::abs(omega - hx[i]), i};
    std::partial_sort(d.begin(), d.begin() + std::min(grid, 4), d.end());
    double best = d[0].first;
    for (int s = 0; s < std::min(grid, 4); ++s)
      best = std::min(best, refine_seed_1d(symbols[0], mu[0], omega, kTwoPi * d[s].second / grid,
                                           kTwoPi / grid, kLevels));
    return best;
  }
  const int grid = opts.kgrid_2d;
  const auto hx = deformed_samples(symbols[0], mu[0], grid);
  const auto hy = deformed_samples(symbols[1], mu[1], grid);
  std::vector<std::pair<double, int>> d(static_cast<std::size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * grid + j;
      d[idx] = {std::abs(omega - hx[i] - hy[j]), static_cast<int>(idx)};
    }
  // Seeds: global best cells plus the best per-row and per-column minima.
  // The minimizing valley can be narrow; a single global argmin misses it.
  std::vector<int> seeds;
  const int n_global = std::min<int>(16, grid * grid);
  std::vector<std::pair<double, int>> top(d);
  std::partial_sort(top.begin(), top.begin() + n_global, top.end());
  double best = top[0].first;
  for (int s = 0; s < n_global; ++s) seeds.push_back(top[s].second);
  std::vector<std::pair<double, int>> row_best(grid), col_best(grid);
  for (int j = 0; j < grid; ++j) {
    double lb = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int i = 0; i < grid; ++i) {
      const double v = d[static_cast<std::size_t>(i) * grid + j].first;
      if (v < lb) {
        lb = v;
        arg = i * grid + j;
      }
    }
    col_best[j] = {lb, arg};
  }
  for (int i = 0; i < grid; ++i) {
    double lb = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int j = 0; j < grid; ++j) {
      const double v = d[static_cast<std::size_t>(i) * grid + j].first;
      if (v < lb) {
        lb = v;
        arg = i * grid + j;
      }
    }
    row_best[i] = {lb, arg};
  }
  const int n_lines = std::min(grid, 12);
  std::partial_sort(row_best.begin(), row_best.begin() + n_lines, row_best.end());
  std::partial_sort(col_best.begin(), col_best.begin() + n_lines, col_best.end());
  for (int s = 0; s < n_lines; ++s) {
    seeds.push_back(row_best[s].second);
    seeds.push_back(col_best[s].second);
  }
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  for (int seed : seeds) {
    const int i = seed / grid, j = seed % grid;
    best = std::min(best, refine_seed_2d(symbols[0], symbols[1], mu[0], mu[1], omega,
                                         kTwoPi * i / grid, kTwoPi * j / grid, kTwoPi / grid,
                                         kLevels));
  }
  return best;
}

namespace {

// Certification of a single mu candidate; nullopt = not certified.
// Tables (when provided) hold precomputed deformed samples for grid mu values.
std::optional<double> certify_mu(const SymbolSet& symbols, cplx omega,
                                 const std::vector<double>& mu, const MuSearchConfig& cfg,
                                 const std::vector<cplx>* hx_tab,
                                 const std::vector<cplx>* hy_tab) {
  const int grid = symbols.size() == 1 ? cfg.winding.kgrid_1d : cfg.winding.kgrid_2d;
  const std::vector<cplx> hx = hx_tab ? *hx_tab : deformed_samples(symbols[0], mu[0], grid);
  std::vector<cplx> hy_local;
  const std::vector<cplx>* hy = &hy_local;
  if (symbols.size() == 2) {
    if (hy_tab) {
      hy = hy_tab;
    } else {
      hy_local = deformed_samples(symbols[1], mu[1], grid);
    }
  }
  const LineScan scan = scan_lines(omega, hx, *hy);
  if (scan.min_abs <= cfg.eps) return std::nullopt;
  if (!scan.agree || scan.gap > cfg.winding.max_rounding_gap) return std::nullopt;
  for (int w : scan.w)
    if (w != 0) return std::nullopt;
  const double dist = deformed_bloch_distance(symbols, omega, mu, cfg.winding);
  if (dist <= cfg.eps) return std::nullopt;
  return dist;
}

}  // namespace

HierarchyVerdict amoeba_membership(const SymbolSet& symbols, cplx omega,
                                   const MuSearchConfig& cfg) {
  if (symbols.empty() || symbols.size() > 2)
    throw Error("amoeba_membership: need 1 or 2 symbols");
  const std::size_t dims = symbols.size();
  HierarchyVerdict v;
  v.omega = omega;

  // mu = 0 first: the Bloch test.
  const std::vector<double> mu0(dims, 0.0);
  try {
    const WindingResult w0 = winding(symbols, omega, mu0, cfg.winding);
    if (w0.lines_agree) v.windings_mu0 = w0.w;
  } catch (const Error&) {
    // omega on (or numerically on) the Bloch set; windings undefined.
  }
  if (auto d0 = certify_mu(symbols, omega, mu0, cfg, nullptr, nullptr)) {
    v.zone = Zone::outside_bloch;
    v.cert_distance = *d0;
    return v;
  }

  // Exhaustive mu grid, row-major, tracking the best uncertified candidate.
  const int np = cfg.points_per_axis;
  std::vector<double> mus(np);
  for (int i = 0; i < np; ++i)
    mus[i] = cfg.mu_min + (cfg.mu_max - cfg.mu_min) * i / std::max(1, np - 1);
  const int grid = dims == 1 ? cfg.winding.kgrid_1d : cfg.winding.kgrid_2d;

  std::vector<std::vector<cplx>> tab_x(np), tab_y;
  for (int i = 0; i < np; ++i) tab_x[i] = deformed_samples(symbols[0], mus[i], grid);
  if (dims == 2) {
    tab_y.resize(np);
    for (int i = 0; i < np; ++i) tab_y[i] = deformed_samples(symbols[1], mus[i], grid);
  }

  // Candidate steering for the refinement stage: a certificate appears where
  // the windings vanish, and they vanish by omega crossing the deformed Bloch
  // set. Prefer any all-zero-winding candidate (maximizing distance); absent
  // one, refine near the mu whose deformed set passes closest to omega.
  bool have_zero = false;
  double best_zero_dist = -std::numeric_limits<double>::infinity();
  double best_near_dist = std::numeric_limits<double>::infinity();
  std::vector<double> best_mu(dims, 0.0);
  auto consider = [&](const std::vector<double>& mu, const LineScan& scan) {
    bool zero = scan.agree && scan.gap <= cfg.winding.max_rounding_gap;
    for (int w : scan.w) zero = zero && (w == 0);
    if (zero) {
      if (!have_zero || scan.min_abs > best_zero_dist) {
        best_zero_dist = scan.min_abs;
        best_mu = mu;
      }
      have_zero = true;
    } else if (!have_zero && scan.min_abs < best_near_dist) {
      best_near_dist = scan.min_abs;
      best_mu = mu;
    }
  };

  const double spacing = np > 1 ? (cfg.mu_max - cfg.mu_min) / (np - 1) : 1.0;
  if (dims == 1) {
    for (int i = 0; i < np; ++i) {
      const std::vector<double> mu{mus[i]};
      const LineScan scan = scan_lines(omega, tab_x[i], {});
      consider(mu, scan);
      if (auto d = certify_mu(symbols, omega, mu, cfg, &tab_x[i], nullptr)) {
        v.zone = Zone::outside_amoeba_inside_bloch;
        v.mu_star = mu;
        v.cert_distance = *d;
        v.mu_on_search_boundary = (i == 0 || i == np - 1);
        return v;
      }
    }
  } else {
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j) {
        const std::vector<double> mu{mus[i], mus[j]};
        const LineScan scan = scan_lines(omega, tab_x[i], tab_y[j]);
        consider(mu, scan);
        if (scan.min_abs <= cfg.eps) continue;
        if (auto d = certify_mu(symbols, omega, mu, cfg, &tab_x[i], &tab_y[j])) {
          v.zone = Zone::outside_amoeba_inside_bloch;
          v.mu_star = mu;
          v.cert_distance = *d;
          v.mu_on_search_boundary = (i == 0 || i == np - 1 || j == 0 || j == np - 1);
          return v;
        }
      }
  }

  // Local refinement around the best candidate (the winding is locally
  // constant, so a certificate between grid points is still reachable).
  std::vector<double> center = best_mu;
  double width = spacing;
  for (int level = 0; level < cfg.refine_levels; ++level) {
    const int half = 2;
    if (dims == 1) {
      for (int i = -half; i <= half; ++i) {
        const std::vector<double> mu{center[0] + width * i / half};
        if (auto d = certify_mu(symbols, omega, mu, cfg, nullptr, nullptr)) {
          v.zone = Zone::outside_amoeba_inside_bloch;
          v.mu_star = mu;
          v.cert_distance = *d;
          return v;
        }
      }
    } else {
      for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j) {
          const std::vector<double> mu{center[0] + width * i / half,
                                       center[1] + width * j / half};
          if (auto d = certify_mu(symbols, omega, mu, cfg, nullptr, nullptr)) {
            v.zone = Zone::outside_amoeba_inside_bloch;
            v.mu_star = mu;
            v.cert_distance = *d;
            return v;
          }
        }
    }
    width /= cfg.refine_factor;
  }

  v.zone = Zone::inside_amoeba;
  v.cert_distance = 0.0;
  return v;
}

GaugeBoundReport gauge_bound_check(const OperatorMatrix& h, const SymbolSet& symbols,
                                   cplx omega, const std::vector<double>& mu,
                                   const MuSearchConfig& cfg) {
  if (!certify_mu(symbols, omega, mu, cfg, nullptr, nullptr))
    throw Error("gauge_bound_check: mu is not a valid certificate for this omega");

  const int grid = symbols.size() == 1 ? cfg.winding.kgrid_1d : cfg.winding.kgrid_2d;
  double c = 0.0;
  if (symbols.size() == 1) {
    const auto hx = deformed_samples(symbols[0], mu[0], grid);
    for (const cplx& v : hx) c += 1.0 / std::abs(omega - v);
    c /= grid;
  } else {
    const auto hx = deformed_samples(symbols[0], mu[0], grid);
    const auto hy = deformed_samples(symbols[1], mu[1], grid);
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) c += 1.0 / std::abs(omega - hx[i] - hy[j]);
    c /= static_cast<double>(grid) * grid;
  }

  Eigen::MatrixXcd m = -h.entries;
  m.diagonal().array() += omega;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);

  // Probe pairs: every stride-th site against every other.
  const int n = h.dim();
  const int stride = std::max(1, n / 16);
  std::vector<int> probes;
  for (int i = 0; i < n; i += stride) probes.push_back(i);

  GaugeBoundReport rep;
  rep.constant = c;
  const auto& sites = h.geometry.sites();
  for (int src : probes) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(src) = 1.0;
    const Eigen::VectorXcd g = lu.solve(e);
    for (int tgt : probes) {
      double mu_dot = mu[0] * (sites[tgt][0] - sites[src][0]);
      if (mu.size() == 2) mu_dot += mu[1] * (sites[tgt][1] - sites[src][1]);
      const double bound = std::exp(mu_dot) * c;
      rep.max_ratio = std::max(rep.max_ratio, std::abs(g(tgt)) / bound);
    }
  }
  rep.bound_holds = rep.max_ratio <= 1.0;
  return rep;
}

FragileModeScan fragile_mode_scan(const std::function<OperatorMatrix(int)>& builder, cplx omega,
                                  const std::vector<int>& sizes) {
  if (sizes.size() < 3 || !std::is_sorted(sizes.begin(), sizes.end()))
    throw Error("fragile_mode_scan: need >= 3 increasing sizes");
  FragileModeScan scan;
  scan.omega = omega;
  scan.sizes = sizes;
  std::vector<double> ls, lns;
  for (int l : sizes) {
    const OperatorMatrix h = builder(l);
    Eigen::MatrixXcd m = -h.entries;
    m.diagonal().array() += omega;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    scan.sigma_min.push_back(smin);
    if (smin > 0.0) {
      ls.push_back(l);
      lns.push_back(std::log(smin));
    }
  }
  scan.decay_rate = fit_line(ls, lns).slope;
  return scan;
}

std::vector<HierarchyVerdict> hierarchy_classify(const SymbolSet& symbols,
                                                 const std::vector<cplx>& omega_grid,
                                                 const MuSearchConfig& cfg, int threads) {
  std::vector<HierarchyVerdict> out(omega_grid.size());
  parallel_for(omega_grid.size(), threads,
               [&](std::size_t i) { out[i] = amoeba_membership(symbols, omega_grid[i], cfg); });
  return out;
}

}  // namespace nonbloch
