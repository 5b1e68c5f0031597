#include "nonbloch/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nonbloch/errors.hpp"

namespace nonbloch {

namespace {

Eigen::MatrixXcd resolvent_matrix(const OperatorMatrix& h, cplx omega) {
  Eigen::MatrixXcd m = -h.entries;
  m.diagonal().array() += omega;
  return m;
}

double inf_norm(const Eigen::MatrixXcd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

std::string to_string(ProfileShape s) {
  switch (s) {
    case ProfileShape::V: return "V";
    case ProfileShape::Lambda: return "Lambda";
    case ProfileShape::directional: return "directional";
    case ProfileShape::flat: return "flat";
  }
  return "?";
}

Eigen::VectorXcd greens_column(const OperatorMatrix& h, int source_index, cplx omega) {
  if (source_index < 0 || source_index >= h.dim())
    throw Error("greens_column: source index out of range");
  const Eigen::MatrixXcd m = resolvent_matrix(h, omega);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
    throw NearSpectrumError("greens_column: omega is numerically on the spectrum", rcond);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(h.dim());
  e(source_index) = 1.0;
  Eigen::VectorXcd g = lu.solve(e);
  const double residual = (m * g - e).norm();
  const double allowed = 1e-10 * g.norm() * inf_norm(m);
  if (!(residual <= allowed) || !g.allFinite())
    throw NearSpectrumError("greens_column: solve residual exceeds its backward-error bound",
                            allowed > 0 ? residual / allowed : std::numeric_limits<double>::infinity());
  return g;
}

GreensProfile fit_lambda_shape(const Eigen::VectorXcd& column, cplx omega, int source_site,
                               FitWindow window_plus, FitWindow window_minus, double margin) {
  const int length = static_cast<int>(column.size());
  for (const FitWindow& w : {window_plus, window_minus}) {
    if (w.lo < 1 || w.hi > length || w.hi < w.lo)
      throw Error("fit_lambda_shape: window outside the chain");
    if (w.hi - w.lo + 1 < 10) throw Error("fit_lambda_shape: window shorter than 10 sites");
  }
  GreensProfile p;
  p.omega = omega;
  p.source_site = source_site;
  p.log_abs.reserve(length);
  for (int x = 1; x <= length; ++x) {
    const double a = std::abs(column(x - 1));
    if (a >= 1e-280) p.log_abs.emplace_back(x, std::log(a));
  }
  auto fit_window = [&](const FitWindow& w) {
    std::vector<double> xs, ys;
    for (const auto& [site, ln_g] : p.log_abs) {
      if (site >= w.lo && site <= w.hi) {
        xs.push_back(site);
        ys.push_back(ln_g);
      }
    }
    return fit_line(xs, ys);
  };
  const LineFit plus = fit_window(window_plus);
  const LineFit minus = fit_window(window_minus);
  p.lambda_plus = plus.slope;
  p.r2_plus = plus.r2;
  p.lambda_minus = minus.slope;
  p.r2_minus = minus.r2;

  const double lp = p.lambda_plus, lm = p.lambda_minus;
  if (lp > margin && lm < -margin) {
    p.shape = ProfileShape::V;
  } else if (lp < -margin && lm > margin) {
    p.shape = ProfileShape::Lambda;
  } else if (std::abs(lp) < margin && std::abs(lm) < margin) {
    p.shape = ProfileShape::flat;
  } else {
    p.shape = ProfileShape::directional;
  }
  return p;
}

double vshape_proxy(const OperatorMatrix& h, cplx omega) {
  std::vector<int> boundary = boundary_sites(h.geometry);
  if (boundary.empty()) throw Error("vshape_proxy: geometry has no boundary sites");

  int extent = 0;
  for (const auto& s : h.geometry.sites()) extent = std::max({extent, s[0], s[1]});
  if (extent > 40) {
    std::vector<int> sub;
    for (std::size_t i = 0; i < boundary.size(); i += 2) sub.push_back(boundary[i]);
    boundary.swap(sub);
  }

  const Eigen::MatrixXcd m = resolvent_matrix(h, omega);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
    throw NearSpectrumError("vshape_proxy: omega is numerically on the spectrum", rcond);
  const int nb = static_cast<int>(boundary.size());
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(h.dim(), nb);
  for (int j = 0; j < nb; ++j) rhs(boundary[j], j) = 1.0;
  Eigen::MatrixXcd cols = lu.solve(rhs);
  if (!cols.allFinite()) throw NearSpectrumError("vshape_proxy: omega on the spectrum", 0.0);
  const double residual = (m * cols - rhs).norm();
  const double allowed = 1e-10 * cols.norm() * inf_norm(m);
  if (!(residual <= allowed))
    throw NearSpectrumError("vshape_proxy: omega is numerically on the spectrum",
                            allowed > 0 ? residual / allowed : 0.0);

  // b(j, i) = G(boundary_j, boundary_i)
  Eigen::MatrixXcd b(nb, nb);
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i < nb; ++i) b(j, i) = cols(boundary[j], i);
  double best = 0.0;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) best = std::max(best, std::abs(b(j, i) * b(i, j)));
  return best;
}

double factorization_residual(const LaurentOperator& op, int length, cplx omega) {
  if (omega == cplx(0.0, 0.0)) throw Error("factorization_residual: omega = 0 is a branch point");
  const OperatorMatrix h = build_1d(op, length, BoundaryCondition::open);
  const Eigen::MatrixXcd h2 = h.entries * h.entries;
  const cplx root = std::sqrt(omega);

  Eigen::MatrixXcd lhs_m = -h2;
  lhs_m.diagonal().array() += omega;
  Eigen::MatrixXcd plus_m = -h.entries;
  plus_m.diagonal().array() += root;
  Eigen::MatrixXcd minus_m = h.entries;
  minus_m.diagonal().array() += root;

  Eigen::PartialPivLU<Eigen::MatrixXcd> lhs_lu(lhs_m), plus_lu(plus_m), minus_lu(minus_m);

  std::vector<int> probes{0, length / 4, length / 2, 3 * length / 4, length - 1};
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  double worst = 0.0, scale = 0.0;
  for (int col : probes) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(length);
    e(col) = 1.0;
    const Eigen::VectorXcd lhs = lhs_lu.solve(e);
    const Eigen::VectorXcd rhs = (plus_lu.solve(e) + minus_lu.solve(e)) / (2.0 * root);
    if (!lhs.allFinite() || !rhs.allFinite())
      throw NearSpectrumError("factorization_residual: singular system", 0.0);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    scale = std::max(scale, lhs.cwiseAbs().maxCoeff());
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace nonbloch
