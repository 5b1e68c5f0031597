#include "nonbloch/spectra.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "nonbloch/errors.hpp"

#ifdef NONBLOCH_HAVE_LAPACKE
#include <lapacke.h>
#endif

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace nonbloch {

using QuadReal = boost::multiprecision::cpp_bin_float_quad;

namespace {

// Exact diagonal similarity using the per-axis balance gauge recorded on the
// matrix: A'_{ij} = A_{ij} e^{g.(r_j - r_i)}.
Eigen::MatrixXcd apply_gauge(const OperatorMatrix& h) {
  Eigen::MatrixXcd a = h.entries;
  const auto& sites = h.geometry.sites();
  const double gx = h.gauge_log[0], gy = h.gauge_log[1];
  if (gx == 0.0 && gy == 0.0) return a;
  std::vector<double> w(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) w[i] = gx * sites[i][0] + gy * sites[i][1];
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != cplx(0.0, 0.0)) a(i, j) *= std::exp(w[j] - w[i]);
  return a;
}

std::vector<cplx> eigenvalues_dense(Eigen::MatrixXcd a) {
  const int n = static_cast<int>(a.rows());
  std::vector<cplx> w(n);
#ifdef NONBLOCH_HAVE_LAPACKE
  // std::complex<double> is layout-compatible with the C complex type.
  auto* a_ptr = reinterpret_cast<lapack_complex_double*>(a.data());
  auto* w_ptr = reinterpret_cast<lapack_complex_double*>(w.data());
  const int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a_ptr, n, w_ptr, nullptr, 1, nullptr, 1);
  if (info != 0) throw Error("eig: zgeev failed to converge (info=" + std::to_string(info) + ")");
#else
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
  if (solver.info() != Eigen::Success) throw Error("eig: eigensolver failed to converge");
  for (int i = 0; i < n; ++i) w[i] = solver.eigenvalues()(i);
#endif
  return w;
}

template <typename Real>
std::vector<cplx> eigenvalues_highprec(const Eigen::MatrixXcd& a) {
  using XMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  const int n = static_cast<int>(a.rows());
  XMat x(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = std::complex<Real>(a(i, j).real(), a(i, j).imag());
  Eigen::ComplexEigenSolver<XMat> solver(x, false);
  if (solver.info() != Eigen::Success) throw Error("eig: high-precision eigensolver failed");
  std::vector<cplx> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = cplx(static_cast<double>(solver.eigenvalues()(i).real()),
                static_cast<double>(solver.eigenvalues()(i).imag()));
  return w;
}

// Skin-effect chains carry eigenvector condition numbers growing like
// (spread of GBZ moduli)^L. The coefficient-based balance radius can sit far
// from the GBZ, so the gauge is refined from the middle-root moduli of a
// short chain's spectrum, and the solver precision is chosen from the
// estimated residual amplification.
struct ChainGaugePlan {
  double gauge_log;       // refined ln r*
  double amplification;   // (worst moduli ratio)^L
};

ChainGaugePlan plan_chain_gauge(const LaurentOperator& op, int length,
                                double fallback_gauge_log) {
  ChainGaugePlan plan{fallback_gauge_log, 1.0};
  const int probe_length = 64;
  if (op.neg_range() < 1 || op.pos_range() < 1) return plan;
  Eigen::MatrixXcd probe = Eigen::MatrixXcd::Zero(probe_length, probe_length);
  const double r0 = balance_radius(op);
  for (const auto& [s, t] : op.coeffs())
    for (int i = 0; i < probe_length; ++i) {
      const int j = i + s;
      if (j >= 0 && j < probe_length) probe(i, j) += t * std::pow(r0, s);
    }
  std::vector<cplx> energies;
  try {
    energies = eigenvalues_dense(probe);
  } catch (const Error&) {
    return plan;
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const cplx& e : energies) {
    RootList rl;
    try {
      rl = roots_sorted(op, e);
    } catch (const Error&) {
      continue;
    }
    const double m1 = std::abs(rl.roots[op.neg_range() - 1]);
    const double m2 = std::abs(rl.roots[op.neg_range()]);
    if (m2 == 0.0 || std::abs(m1 - m2) / m2 > 0.3) continue;
    lo = std::min(lo, m1);
    hi = std::max(hi, m2);
  }
  if (!(lo > 0.0) || !(hi < std::numeric_limits<double>::infinity())) return plan;
  const double r_star = std::sqrt(lo * hi);
  plan.gauge_log = std::log(r_star);
  const double ratio = std::max(hi / r_star, r_star / lo);
  plan.amplification = std::pow(ratio, length);
  return plan;
}

}  // namespace

SpectrumCloud eig(const OperatorMatrix& h, const EigOptions& opts) {
  if (h.dim() < 1) throw Error("eig: empty matrix");
  OperatorMatrix prepared_view = h;  // shallow copy; entries shared until gauge
  EigPrecision precision = opts.precision;
  if (opts.use_gauge && h.geometry.dims() == 1 && h.symbol && h.gauge_log[0] != 0.0) {
    const ChainGaugePlan plan = plan_chain_gauge(*h.symbol, h.dim(), h.gauge_log[0]);
    prepared_view.gauge_log[0] = plan.gauge_log;
    if (precision == EigPrecision::automatic) {
      constexpr double kTarget = 1e-6;
      if (plan.amplification * 4.4e-16 <= kTarget) {
        precision = EigPrecision::fp64;
      } else if (plan.amplification * 2.2e-19 <= kTarget) {
        precision = EigPrecision::extended;
      } else {
        precision = EigPrecision::quad;
      }
    }
  }
  if (precision == EigPrecision::automatic) precision = EigPrecision::fp64;

  SpectrumCloud out;
  const Eigen::MatrixXcd prepared =
      opts.use_gauge ? apply_gauge(prepared_view) : h.entries;
  switch (precision) {
    case EigPrecision::extended:
      out.values = eigenvalues_highprec<long double>(prepared);
      break;
    case EigPrecision::quad:
      out.values = eigenvalues_highprec<QuadReal>(prepared);
      break;
    default:
      out.values = eigenvalues_dense(prepared);
  }
  // Deterministic order regardless of solver internals.
  std::sort(out.values.begin(), out.values.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  out.source_tag = to_string(h.geometry.kind()) + "_dim" + std::to_string(h.dim()) +
                   (h.bc == BoundaryCondition::periodic ? "_pbc" : "_obc");
  return out;
}

double eig_residual_witness(const OperatorMatrix& h, cplx eigenvalue) {
  Eigen::MatrixXcd m = -h.entries;
  m.diagonal().array() += eigenvalue;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

SpectrumCloud separable_spectrum_2d(const SpectrumCloud& cloud_x, const SpectrumCloud& cloud_y) {
  SpectrumCloud out;
  out.values.reserve(cloud_x.values.size() * cloud_y.values.size());
  for (const cplx& ex : cloud_x.values)
    for (const cplx& ey : cloud_y.values) out.values.push_back(ex + ey);
  out.source_tag = "separable_sum";
  return out;
}

SpectrumCloud bloch_spectrum(const std::vector<LaurentOperator>& symbols, int grid) {
  if (symbols.empty() || symbols.size() > 2) throw Error("bloch_spectrum: need 1 or 2 symbols");
  if (grid < 64) throw Error("bloch_spectrum: grid must be >= 64");
  SpectrumCloud out;
  if (symbols.size() == 1) {
    out.values.reserve(grid);
    for (int i = 0; i < grid; ++i) out.values.push_back(symbols[0].eval_k(kTwoPi * i / grid));
    out.source_tag = "bloch_1d";
  } else {
    std::vector<cplx> hx(grid), hy(grid);
    for (int i = 0; i < grid; ++i) {
      hx[i] = symbols[0].eval_k(kTwoPi * i / grid);
      hy[i] = symbols[1].eval_k(kTwoPi * i / grid);
    }
    out.values.reserve(static_cast<std::size_t>(grid) * grid);
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) out.values.push_back(hx[i] + hy[j]);
    out.source_tag = "bloch_2d";
  }
  return out;
}

CloudMetrics cloud_metrics(const SpectrumCloud& a, const SpectrumCloud& b) {
  if (a.values.empty() || b.values.empty()) throw Error("cloud_metrics: empty cloud");
  CloudMetrics m;
  cplx mean_a = 0.0, mean_b = 0.0;
  for (const cplx& z : a.values) {
    m.max_imag_a = std::max(m.max_imag_a, z.imag());
    mean_a += z;
  }
  for (const cplx& z : b.values) mean_b += z;
  mean_a /= static_cast<double>(a.values.size());
  mean_b /= static_cast<double>(b.values.size());
  m.centroid_shift = std::abs(mean_a - mean_b);

  auto directed = [](const std::vector<cplx>& p, const std::vector<cplx>& q) {
    double worst = 0.0;
    for (const cplx& zp : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const cplx& zq : q) best = std::min(best, std::abs(zp - zq));
      worst = std::max(worst, best);
    }
    return worst;
  };
  m.hausdorff = std::max(directed(a.values, b.values), directed(b.values, a.values));
  return m;
}

double coulomb_potential(const SpectrumCloud& cloud, cplx omega) {
  if (cloud.values.empty()) throw Error("coulomb_potential: empty cloud");
  double acc = 0.0;
  for (const cplx& e : cloud.values) {
    const double d = std::abs(omega - e);
    if (d <= 1e-12)
      throw SingularPotentialError("coulomb_potential: omega collides with an eigenvalue");
    acc += std::log(d);
  }
  return acc / static_cast<double>(cloud.values.size());
}

PotentialReport perturbation_series(const EndpointGreens& g, double delta, int length,
                                    cplx omega, double phi, double tolerance) {
  PotentialReport r;
  r.omega = omega;
  r.phi = phi;
  const double l = static_cast<double>(length);
  r.series_terms[0] = delta / l * (g.g11 + g.gLL).real();
  r.series_terms[1] =
      delta * delta / (2.0 * l) * (g.g11 * g.g11 + g.gLL * g.gLL + 2.0 * g.g1L * g.gL1).real();
  r.converged = std::abs(r.series_terms[1]) <= tolerance * std::max(1.0, std::abs(r.series_terms[0]));
  return r;
}

}  // namespace nonbloch
