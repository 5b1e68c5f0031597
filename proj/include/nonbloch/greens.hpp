#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nonbloch/gbz.hpp"
#include "nonbloch/lattice.hpp"
#include "nonbloch/util.hpp"

namespace nonbloch {

/// Column g = (omega - H)^{-1} e_source via partial-pivot LU. Throws
/// NearSpectrumError when the backward-error bound
/// ||(omega-H)g - e|| <= 1e-10 ||g|| ||omega-H||_inf fails.
Eigen::VectorXcd greens_column(const OperatorMatrix& h, int source_index, cplx omega);

enum class ProfileShape { V, Lambda, directional, flat };

std::string to_string(ProfileShape s);

/// Inclusive 1-based site range for slope fits.
struct FitWindow {
  int lo;
  int hi;
};

struct GreensProfile {
  cplx omega;
  int source_site;                                  // 1-based
  std::vector<std::pair<int, double>> log_abs;      // (site, ln|G|), underflow-guarded
  double lambda_plus = 0.0, lambda_minus = 0.0;
  double r2_plus = 0.0, r2_minus = 0.0;
  ProfileShape shape = ProfileShape::flat;
};

/// Ordinary least squares on ln|G| vs site over each window, skipping sites
/// with |G| < 1e-280. Shape classification with margin c:
///   V: l+ > c and l- < -c;  Lambda: l+ < -c and l- > c;
///   flat: both |l| < c;     directional otherwise.
GreensProfile fit_lambda_shape(const Eigen::VectorXcd& column, cplx omega, int source_site,
                               FitWindow window_plus, FitWindow window_minus,
                               double margin = 0.02);

/// V-shape proxy I(omega) = max over ordered boundary pairs of
/// |G(r',r) G(r,r')|. One LU factorization, one solve per boundary site;
/// boundary subsampled every 2nd site when the linear extent exceeds 40.
double vshape_proxy(const OperatorMatrix& h, cplx omega);

/// Max elementwise deviation, over probe columns, between (omega - H[h]^2)^{-1}
/// and (1/2 sqrt(omega)) [(sqrt(omega)-H)^{-1} + (sqrt(omega)+H)^{-1}],
/// normalized by the largest LHS magnitude. Exact identity: residual ~ 1e-14.
double factorization_residual(const LaurentOperator& op, int length, cplx omega);

}  // namespace nonbloch
