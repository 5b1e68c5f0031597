#include "nonbloch/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "nonbloch/errors.hpp"

namespace nonbloch {

namespace {

double inf_norm(const Eigen::MatrixXcd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// y = H x, using the Kronecker-sum factors when available:
// (Hx (x) I + I (x) Hy + diag) with x viewed as an Lx x Ly row-major matrix.
struct Matvec {
  const OperatorMatrix& h;
  bool structured;
  int lx = 0, ly = 0;

  explicit Matvec(const OperatorMatrix& h_) : h(h_), structured(h_.kron.has_value()) {
    if (structured) {
      lx = static_cast<int>(h.kron->hx.rows());
      ly = static_cast<int>(h.kron->hy.rows());
    }
  }

  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    if (!structured) {
      y.noalias() = h.entries * x;
      return;
    }
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> xm(x.data(), lx, ly);
    Eigen::Map<RowMat> ym(y.data(), lx, ly);
    ym.noalias() = h.kron->hx * xm;
    ym.noalias() += xm * h.kron->hy.transpose();
    y.array() += h.kron->diag_extra.array() * x.array();
  }
};

}  // namespace

Trajectory evolve(const OperatorMatrix& h, int initial_site, const EvolveOptions& opts) {
  if (initial_site < 0 || initial_site >= h.dim()) throw Error("evolve: initial site out of range");
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(h.dim());
  psi0(initial_site) = 1.0;
  EvolveOptions o = opts;
  if (o.probe_index < 0) o.probe_index = initial_site;
  return evolve(h, psi0, o);
}

Trajectory evolve(const OperatorMatrix& h, const Eigen::VectorXcd& psi0,
                  const EvolveOptions& opts) {
  if (psi0.size() != h.dim()) throw Error("evolve: state dimension mismatch");
  const double norm_h = inf_norm(h.entries);
  double dt = opts.dt;
  if (dt <= 0.0) dt = 0.08 / std::max(norm_h, 1e-12);
  if (dt > 0.1 / std::max(norm_h, 1e-12))
    throw Error("evolve: step size violates dt <= 0.1/||H||");
  const long steps = std::max<long>(1, std::lround(std::ceil(opts.horizon / dt)));
  const long stride = std::max<long>(1, steps / std::max(1, opts.target_samples));

  const Matvec mv(h);
  const int probe = opts.probe_index >= 0 ? opts.probe_index : 0;

  Trajectory tr;
  tr.probe_index = probe;
  Eigen::VectorXcd psi = psi0;
  Eigen::VectorXcd k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()),
      tmp(psi.size());
  const cplx mi(0.0, -1.0);
  for (long s = 0; s < steps; ++s) {
    mv.apply(psi, k1);
    k1 *= mi;
    tmp = psi + 0.5 * dt * k1;
    mv.apply(tmp, k2);
    k2 *= mi;
    tmp = psi + 0.5 * dt * k2;
    mv.apply(tmp, k3);
    k3 *= mi;
    tmp = psi + dt * k3;
    mv.apply(tmp, k4);
    k4 *= mi;
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((s + 1) % stride == 0 || s + 1 == steps) {
      tr.times.push_back((s + 1) * dt);
      tr.probe_amp.push_back(psi(probe));
      tr.norm_trace.push_back(psi.norm());
    }
  }
  return tr;
}

double growth_rate(const Trajectory& tr, double t_lo, double t_hi) {
  std::vector<double> ts, ln_a;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double t = tr.times[i];
    if (t < t_lo || t > t_hi) continue;
    const double a = std::abs(tr.probe_amp[i]);
    if (a < 1e-300) throw Error("growth_rate: probe amplitude underflow in window");
    ts.push_back(t);
    ln_a.push_back(std::log(a));
  }
  if (ts.size() < 50) throw Error("growth_rate: fewer than 50 samples in window");
  return fit_line(ts, ln_a).slope;
}

SweepResult delta_sweep(const std::function<OperatorMatrix(double)>& builder,
                        const std::vector<double>& deltas) {
  if (deltas.empty() || deltas.front() != 0.0 || !std::is_sorted(deltas.begin(), deltas.end()))
    throw Error("delta_sweep: deltas must start at 0 and ascend");
  SweepResult r;
  r.deltas = deltas;
  r.max_imag.resize(deltas.size());
  // One dense eig per delta; the solver already uses the BLAS thread pool,
  // so the sweep itself runs sequentially.
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const SpectrumCloud cloud = eig(builder(deltas[i]));
    double mi = 0.0;
    for (const cplx& e : cloud.values) mi = std::max(mi, std::abs(e.imag()));
    r.max_imag[i] = mi;
  }
  r.noise_floor = r.max_imag[0];
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (r.max_imag[i] > 10.0 * r.noise_floor) {
      r.delta_c = deltas[i];
      break;
    }
  }
  return r;
}

}  // namespace nonbloch
