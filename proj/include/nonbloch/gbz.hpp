#pragma once

#include <vector>

#include "nonbloch/laurent.hpp"
#include "nonbloch/spectra.hpp"
#include "nonbloch/util.hpp"

namespace nonbloch {

/// One GBZ sample: a middle characteristic root beta at energy E.
/// branch 0 = beta_n (lower middle root), branch 1 = beta_{n+1}.
struct GbzPoint {
  cplx beta;
  cplx energy;
  int branch;
};

struct GbzCloud {
  std::vector<GbzPoint> points;
  LaurentOperator symbol;
  double tol;
};

/// Keeps, for each energy sample, the middle root pair when their moduli agree
/// to the relative tolerance: | |b_n| - |b_{n+1}| | / |b_{n+1}| <= tol.
/// An empty result is a warning condition, not an error.
GbzCloud gbz_1d(const LaurentOperator& op, const std::vector<cplx>& energy_samples, double tol);

/// Evaluates `target` at every GBZ beta (e.g. the squared symbol on the GBZ of
/// the plain one).
SpectrumCloud nonbloch_spectrum(const LaurentOperator& target, const GbzCloud& cloud);

enum class LambdaMechanism { plain_middle_roots, squared_factorization };

struct LambdaPrediction {
  cplx omega;
  double lambda_plus;
  double lambda_minus;
  LambdaMechanism mechanism;
};

/// Asymptotic Green's-function rates from characteristic roots.
///   plain:   lambda+ = ln|beta_n(omega)|, lambda- = ln|beta_{n+1}(omega)|
///            (sorted moduli make lambda+ <= lambda-: no V shape possible).
///   squared: middle roots at both +sqrt(omega) and -sqrt(omega);
///            lambda+ = max branch of ln|beta_n|, lambda- = min branch of
///            ln|beta_{n+1}|. omega = 0 is a branch point and rejected.
LambdaPrediction lambda_pm_predict(const LaurentOperator& op, cplx omega,
                                   LambdaMechanism mechanism);

/// lambda = max { n_x ln|beta_x| + n_y ln|beta_y| } over GBZ pairs whose
/// energies add to E within pair_tol (the discretized equienergy line).
/// Throws when no pair matches.
double equienergy_growth_rate(const GbzCloud& gbz_x, const GbzCloud& gbz_y, cplx energy,
                              double nx, double ny, double pair_tol = 0.05);

}  // namespace nonbloch
