#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "nonbloch/lattice.hpp"
#include "nonbloch/spectra.hpp"
#include "nonbloch/util.hpp"

namespace nonbloch {

struct Trajectory {
  std::vector<double> times;
  std::vector<cplx> probe_amp;  // <probe|psi(t)>
  int probe_index = 0;
  std::vector<double> norm_trace;
};

struct EvolveOptions {
  double horizon = 60.0;
  double dt = 0.0;          // 0 = auto: 0.08 / ||H||_inf
  int probe_index = -1;     // -1 = initial site
  int target_samples = 1000;
};

/// Fourth-order explicit (classical RK4) integration of i d/dt psi = H psi
/// from a site excitation. dt must satisfy dt <= 0.1 / ||H||_inf.
Trajectory evolve(const OperatorMatrix& h, int initial_site, const EvolveOptions& opts = {});
Trajectory evolve(const OperatorMatrix& h, const Eigen::VectorXcd& psi0,
                  const EvolveOptions& opts = {});

/// Least-squares slope of ln|probe_amp| vs t over [t_lo, t_hi]; needs >= 50
/// samples in the window and no underflowed amplitudes.
double growth_rate(const Trajectory& tr, double t_lo, double t_hi);

struct SweepResult {
  std::vector<double> deltas;    // including the leading 0
  std::vector<double> max_imag;  // max |Im E| per delta
  double noise_floor = 0.0;      // max |Im E| at delta = 0
  std::optional<double> delta_c;
};

/// Dense eig per delta; delta_c = smallest delta with max_imag > 10x floor.
/// `deltas` must start at 0 and ascend.
SweepResult delta_sweep(const std::function<OperatorMatrix(double)>& builder,
                        const std::vector<double>& deltas);

}  // namespace nonbloch
