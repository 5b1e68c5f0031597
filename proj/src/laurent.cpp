#include "nonbloch/laurent.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>

#include "nonbloch/errors.hpp"

namespace nonbloch {

LaurentOperator::LaurentOperator(std::map<int, cplx> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (it->second == cplx(0.0, 0.0)) {
      it = coeffs_.erase(it);
    } else {
      ++it;
    }
  }
  if (coeffs_.empty()) throw Error("LaurentOperator: empty coefficient table");
  n_ = std::max(0, -coeffs_.begin()->first);
  m_ = std::max(0, coeffs_.rbegin()->first);
}

LaurentOperator LaurentOperator::from_triples(const std::vector<std::array<double, 3>>& triples) {
  std::map<int, cplx> c;
  for (const auto& t : triples) {
    const double s = t[0];
    if (s != std::floor(s)) throw Error("LaurentOperator: non-integer power in triple");
    c[static_cast<int>(s)] += cplx(t[1], t[2]);
  }
  return LaurentOperator(std::move(c));
}

cplx LaurentOperator::coeff(int s) const {
  auto it = coeffs_.find(s);
  return it == coeffs_.end() ? cplx(0.0, 0.0) : it->second;
}

cplx LaurentOperator::eval_k(double k) const {
  cplx acc(0.0, 0.0);
  for (const auto& [s, t] : coeffs_) acc += t * std::polar(1.0, k * s);
  return acc;
}

cplx LaurentOperator::eval_beta(cplx beta) const {
  if (beta == cplx(0.0, 0.0)) throw Error("eval_beta: beta must be nonzero");
  cplx acc(0.0, 0.0);
  for (const auto& [s, t] : coeffs_) acc += t * std::pow(beta, s);
  return acc;
}

LaurentOperator LaurentOperator::scaled(double r) const {
  std::map<int, cplx> c;
  for (const auto& [s, t] : coeffs_) c[s] = t * std::pow(r, s);
  return LaurentOperator(std::move(c));
}

bool LaurentOperator::is_hermitian(double tol) const {
  for (const auto& [s, t] : coeffs_) {
    if (std::abs(t - std::conj(coeff(-s))) > tol) return false;
  }
  return true;
}

LaurentOperator product(const LaurentOperator& a, const LaurentOperator& b) {
  std::map<int, cplx> c;
  for (const auto& [sa, ta] : a.coeffs())
    for (const auto& [sb, tb] : b.coeffs()) c[sa + sb] += ta * tb;
  return LaurentOperator(std::move(c));
}

RootList roots_sorted(const LaurentOperator& op, cplx energy) {
  const int n = op.neg_range();
  const int m = op.pos_range();
  const int degree = n + m;
  if (degree < 1) throw Error("roots_sorted: constant symbol has no characteristic roots");

  // beta^n (h(beta) - E): coefficient of beta^j is t_{j-n} - E [j == n].
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (int j = 0; j <= degree; ++j) c[j] = op.coeff(j - n);
  c[n] -= energy;
  if (c[degree] == cplx(0.0, 0.0))
    throw Error("roots_sorted: degenerate leading coefficient (malformed operator)");

  // Companion matrix of the monic polynomial.
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(degree, degree);
  for (int j = 0; j < degree - 1; ++j) comp(j + 1, j) = 1.0;
  for (int j = 0; j < degree; ++j) comp(j, degree - 1) = -c[j] / c[degree];

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error("roots_sorted: companion eigensolve failed");

  RootList out;
  out.energy = energy;
  out.roots.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + degree);
  std::sort(out.roots.begin(), out.roots.end(), [](const cplx& a, const cplx& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
  return out;
}

double balance_radius(const LaurentOperator& op) {
  const int n = op.neg_range();
  const int m = op.pos_range();
  if (n + m == 0) return 1.0;
  const double lo = std::abs(op.coeff(-n));
  const double hi = std::abs(op.coeff(m));
  if (lo == 0.0 || hi == 0.0) return 1.0;
  return std::pow(lo / hi, 1.0 / static_cast<double>(n + m));
}

}  // namespace nonbloch
