#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nonbloch/lattice.hpp"
#include "nonbloch/laurent.hpp"
#include "nonbloch/util.hpp"

namespace nonbloch {

/// One symbol per axis (1 entry = 1D chain, 2 entries = separable 2D model).
using SymbolSet = std::vector<LaurentOperator>;

struct WindingOptions {
  int kgrid_1d = 1024;
  int kgrid_2d = 128;
  double max_rounding_gap = 0.2;
};

/// Integer windings W_i of omega - h(k - i mu) along each axis, computed as
/// summed phase increments per transverse line. Every line must round to an
/// integer within the gap and all lines must agree (any disagreement means
/// omega meets the deformed Bloch set between lines). Throws when a grid
/// point lands on a zero of omega - h.
struct WindingResult {
  std::vector<int> w;
  double rounding_gap;   // worst per-line distance to the rounded integer
  bool lines_agree;      // per-line integers identical along each axis
  double grid_min_dist;  // min |omega - h| over the k-grid (unrefined)
};

WindingResult winding(const SymbolSet& symbols, cplx omega, const std::vector<double>& mu,
                      const WindingOptions& opts = {});

/// min_k |omega - h(k - i mu)| refined beyond the grid by multi-seed local
/// zoom (grid resolution alone overestimates the distance badly for omega
/// inside the image set).
double deformed_bloch_distance(const SymbolSet& symbols, cplx omega,
                               const std::vector<double>& mu, const WindingOptions& opts = {});

enum class Zone { outside_bloch, outside_amoeba_inside_bloch, inside_amoeba };

std::string to_string(Zone z);

struct HierarchyVerdict {
  cplx omega;
  std::optional<std::vector<int>> windings_mu0;  // absent when omega sits on the Bloch set
  std::optional<std::vector<double>> mu_star;
  Zone zone = Zone::inside_amoeba;
  double cert_distance = 0.0;  // refined off-spectrum distance backing the verdict
  bool mu_on_search_boundary = false;
};

struct MuSearchConfig {
  double mu_min = -2.0;
  double mu_max = 2.0;
  int points_per_axis = 41;
  int refine_levels = 3;  // local zoom around the best failed candidate
  double refine_factor = 4.0;
  double eps = 1e-3;  // off-spectrum distance threshold
  WindingOptions winding;
};

/// omega is outside the amoebic spectrum iff some mu in the search domain
/// gives all-zero windings while staying at distance > eps from the deformed
/// Bloch set. mu = 0 is tested first (outside_bloch); failure of the whole
/// search is the inside_amoeba verdict, not an error.
HierarchyVerdict amoeba_membership(const SymbolSet& symbols, cplx omega,
                                   const MuSearchConfig& cfg = {});

struct GaugeBoundReport {
  bool bound_holds = false;
  double max_ratio = 0.0;  // max |G(r,r')| / (e^{mu.(r-r')} C)
  double constant = 0.0;   // C = k-grid average of |omega - h(k - i mu)|^{-1}
};

/// Verifies |<r|G|r'>| <= e^{mu.(r-r')} C(omega, mu) over a probe set of site
/// pairs. mu must be a valid certificate (all-zero windings, off-spectrum);
/// invalid certificates are rejected.
GaugeBoundReport gauge_bound_check(const OperatorMatrix& h, const SymbolSet& symbols,
                                   cplx omega, const std::vector<double>& mu,
                                   const MuSearchConfig& cfg = {});

struct FragileModeScan {
  cplx omega;
  std::vector<int> sizes;
  std::vector<double> sigma_min;
  double decay_rate = 0.0;  // slope of ln sigma_min vs L
};

/// sigma_min(omega - H(L)) over increasing sizes (>= 3), with the fitted
/// exponential rate. Exponential decay signals a fragile zero mode of the
/// Hermitized operator.
FragileModeScan fragile_mode_scan(const std::function<OperatorMatrix(int)>& builder, cplx omega,
                                  const std::vector<int>& sizes);

/// Per-omega verdicts over a frequency grid (deterministic order).
std::vector<HierarchyVerdict> hierarchy_classify(const SymbolSet& symbols,
                                                 const std::vector<cplx>& omega_grid,
                                                 const MuSearchConfig& cfg = {}, int threads = 0);

}  // namespace nonbloch
