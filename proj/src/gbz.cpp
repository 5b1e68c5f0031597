#include "nonbloch/gbz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nonbloch/errors.hpp"

namespace nonbloch {

GbzCloud gbz_1d(const LaurentOperator& op, const std::vector<cplx>& energy_samples, double tol) {
  if (op.neg_range() < 1 || op.pos_range() < 1)
    throw Error("gbz_1d: symbol needs hopping in both directions (n, m >= 1)");
  GbzCloud cloud{{}, op, tol};
  const int n = op.neg_range();
  for (const cplx& e : energy_samples) {
    const RootList rl = roots_sorted(op, e);
    const cplx lo = rl.roots[n - 1];
    const cplx hi = rl.roots[n];
    const double mhi = std::abs(hi);
    if (mhi == 0.0) continue;
    if (std::abs(std::abs(lo) - mhi) / mhi <= tol) {
      cloud.points.push_back({lo, e, 0});
      cloud.points.push_back({hi, e, 1});
    }
  }
  return cloud;
}

SpectrumCloud nonbloch_spectrum(const LaurentOperator& target, const GbzCloud& cloud) {
  if (cloud.points.empty()) throw Error("nonbloch_spectrum: empty GBZ cloud");
  SpectrumCloud out;
  out.values.reserve(cloud.points.size());
  for (const GbzPoint& p : cloud.points) out.values.push_back(target.eval_beta(p.beta));
  out.source_tag = "nonbloch";
  return out;
}

LambdaPrediction lambda_pm_predict(const LaurentOperator& op, cplx omega,
                                   LambdaMechanism mechanism) {
  const int n = op.neg_range();
  LambdaPrediction out{omega, 0.0, 0.0, mechanism};
  if (mechanism == LambdaMechanism::plain_middle_roots) {
    const RootList rl = roots_sorted(op, omega);
    out.lambda_plus = std::log(std::abs(rl.roots[n - 1]));
    out.lambda_minus = std::log(std::abs(rl.roots[n]));
    return out;
  }
  if (omega == cplx(0.0, 0.0))
    throw Error("lambda_pm_predict: omega = 0 is a branch point of sqrt(omega)");
  const cplx root = std::sqrt(omega);
  double plus = -std::numeric_limits<double>::infinity();
  double minus = std::numeric_limits<double>::infinity();
  for (const cplx& e : {root, -root}) {
    const RootList rl = roots_sorted(op, e);
    plus = std::max(plus, std::log(std::abs(rl.roots[n - 1])));
    minus = std::min(minus, std::log(std::abs(rl.roots[n])));
  }
  out.lambda_plus = plus;
  out.lambda_minus = minus;
  return out;
}

double equienergy_growth_rate(const GbzCloud& gbz_x, const GbzCloud& gbz_y, cplx energy,
                              double nx, double ny, double pair_tol) {
  if (gbz_x.points.empty() || gbz_y.points.empty())
    throw Error("equienergy_growth_rate: empty GBZ cloud");
  const double norm = std::hypot(nx, ny);
  if (std::abs(norm - 1.0) > 1e-9)
    throw Error("equienergy_growth_rate: direction must be a unit vector");
  double best = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (const GbzPoint& px : gbz_x.points) {
    const cplx need = energy - px.energy;
    for (const GbzPoint& py : gbz_y.points) {
      if (std::abs(py.energy - need) > pair_tol) continue;
      found = true;
      best = std::max(best, nx * std::log(std::abs(px.beta)) + ny * std::log(std::abs(py.beta)));
    }
  }
  if (!found) throw Error("equienergy_growth_rate: empty equienergy line at this energy");
  return best;
}

}  // namespace nonbloch
