#pragma once

#include <string>
#include <vector>

#include "nonbloch/lattice.hpp"
#include "nonbloch/laurent.hpp"
#include "nonbloch/util.hpp"

namespace nonbloch {

/// Finite multiset of complex eigenvalues (or symbol samples) plus provenance.
struct SpectrumCloud {
  std::vector<cplx> values;
  std::string source_tag;
};

enum class EigPrecision {
  automatic,  // chosen from the chain's estimated eigenvector conditioning
  fp64,
  extended,  // 80-bit scalars
  quad,      // 113-bit software floats; slow, but long skin chains reach
             // eigenvector condition numbers ~1e20 that defeat the others
};

struct EigOptions {
  /// Apply the matrix's recorded balance gauge before the solve. The gauge is
  /// an exact similarity, so the spectrum is unchanged; conditioning is not.
  bool use_gauge = true;
  EigPrecision precision = EigPrecision::automatic;
};

/// All eigenvalues with multiplicity (dense non-symmetric solve).
SpectrumCloud eig(const OperatorMatrix& h, const EigOptions& opts = {});

/// Residual witness for a reported eigenvalue: sigma_min(E - H).
double eig_residual_witness(const OperatorMatrix& h, cplx eigenvalue);

/// All pairwise sums of two 1D clouds (the separable 2D spectrum).
SpectrumCloud separable_spectrum_2d(const SpectrumCloud& cloud_x, const SpectrumCloud& cloud_y);

/// Samples h(k) (one symbol) or h_x(k_x)+h_y(k_y) (two symbols) on a uniform
/// k-grid with `grid` points per axis (grid >= 64).
SpectrumCloud bloch_spectrum(const std::vector<LaurentOperator>& symbols, int grid);

struct CloudMetrics {
  double max_imag_a = 0.0;
  double hausdorff = 0.0;
  double centroid_shift = 0.0;
};

CloudMetrics cloud_metrics(const SpectrumCloud& a, const SpectrumCloud& b);

/// Phi(omega) = (1/L) sum_n ln|omega - E_n|. Throws SingularPotentialError
/// when omega is within 1e-12 of an eigenvalue.
double coulomb_potential(const SpectrumCloud& cloud, cplx omega);

/// Green's-function entries at the two perturbed chain ends.
struct EndpointGreens {
  cplx g11, gLL, g1L, gL1;
};

struct PotentialReport {
  cplx omega = 0.0;
  double phi = 0.0;                    // unperturbed potential, if supplied
  std::array<double, 2> series_terms;  // {dPhi1, dPhi2}
  bool converged = false;
};

/// First- and second-order corrections of Phi under the endpoint perturbation
/// delta (|1><1| + |L><L|):
///   dPhi1 = (delta/L)   Re[G(1,1) + G(L,L)]
///   dPhi2 = (delta^2/2L) Re[G(1,1)^2 + G(L,L)^2 + 2 G(1,L) G(L,1)]
/// converged <=> |dPhi2| <= tolerance * max(1, |dPhi1|).
PotentialReport perturbation_series(const EndpointGreens& g, double delta, int length,
                                    cplx omega, double phi = 0.0, double tolerance = 0.1);

}  // namespace nonbloch
