#pragma once

#include <array>
#include <map>
#include <vector>

#include "nonbloch/util.hpp"

namespace nonbloch {

/// Single-band Bloch symbol h(k) = sum_{s=-n}^{m} t_s e^{iks}, stored as a
/// coefficient table over integer powers. The range is kept tight: exact-zero
/// coefficients at the ends are trimmed so that t_{-n} != 0 and t_m != 0.
class LaurentOperator {
 public:
  explicit LaurentOperator(std::map<int, cplx> coeffs);

  /// Builds from (power, Re t_s, Im t_s) triples, the config-file encoding.
  static LaurentOperator from_triples(const std::vector<std::array<double, 3>>& triples);

  int neg_range() const { return n_; }  // n: |lowest power| (0 for constants)
  int pos_range() const { return m_; }  // m: highest power   (0 for constants)
  const std::map<int, cplx>& coeffs() const { return coeffs_; }
  cplx coeff(int s) const;

  /// h(k) on the real Brillouin zone.
  cplx eval_k(double k) const;

  /// Analytic extension h(beta) = sum t_s beta^s; beta must be nonzero.
  cplx eval_beta(cplx beta) const;

  /// Symbol with t_s -> t_s r^s, the diagonal gauge of the corresponding
  /// real-space chain. Equivalently h(k - i ln r).
  LaurentOperator scaled(double r) const;

  /// True when t_{-s} = conj(t_s) for every s (Hermitian real-space chain).
  bool is_hermitian(double tol = 0.0) const;

 private:
  std::map<int, cplx> coeffs_;
  int n_ = 0;
  int m_ = 0;
};

/// Coefficient convolution; ranges add exactly.
LaurentOperator product(const LaurentOperator& a, const LaurentOperator& b);

/// All m+n roots of beta^n (h(beta) - E), sorted by nondecreasing modulus with
/// ties broken by ascending phase in (-pi, pi]. Multiplicities repeated.
struct RootList {
  std::vector<cplx> roots;
  cplx energy;
};

RootList roots_sorted(const LaurentOperator& op, cplx energy);

/// Radius r* equalizing the magnitudes of the extreme gauged coefficients,
/// (|t_{-n}|/|t_m|)^{1/(m+n)}. Chains gauged by r* are far better conditioned
/// for dense eigensolves; the similarity is exact. Returns 1 for constants.
double balance_radius(const LaurentOperator& op);

}  // namespace nonbloch
