#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace nonbloch {

using cplx = std::complex<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Least-squares line fit. r2 = 1 for a perfect fit, 0 when the data carry
/// no linear signal (or fewer than 2 points).
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
/// written by index into caller-owned storage; the merge is therefore
/// deterministic regardless of scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Portable uniform double in [0,1) from a 64-bit generator state.
/// (Avoids std::uniform_real_distribution, whose output differs across
/// standard libraries.)
double u64_to_unit_double(std::uint64_t x);

}  // namespace nonbloch
