#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nonbloch/errors.hpp"
#include "nonbloch/greens.hpp"
#include "nonbloch/lattice.hpp"
#include "nonbloch/spectra.hpp"

using namespace nonbloch;

namespace {

LaurentOperator hatano_nelson(double a, double b) {
  return LaurentOperator({{1, a}, {-1, b}});
}

LaurentOperator nnn_symbol(double t, cplx s1, cplx s2) {
  return LaurentOperator({{1, t}, {-1, t}, {2, s1}, {-2, s2}});
}

double max_abs_imag(const SpectrumCloud& c) {
  double m = 0.0;
  for (const cplx& e : c.values) m = std::max(m, std::abs(e.imag()));
  return m;
}

}  // namespace

TEST_CASE("eig: Jordan block and Hermitian input") {
  OperatorMatrix h{Eigen::MatrixXcd::Zero(2, 2), LatticeGeometry::interval(2, 1),
                   BoundaryCondition::open};
  h.entries(0, 1) = 1.0;
  const auto cloud = eig(h);
  REQUIRE(cloud.values.size() == 2);
  CHECK(std::abs(cloud.values[0]) < 1e-12);
  CHECK(std::abs(cloud.values[1]) < 1e-12);

  const auto herm = build_1d(LaurentOperator({{1, cplx(0.4, 0.2)}, {-1, cplx(0.4, -0.2)}}), 40,
                             BoundaryCondition::open);
  CHECK(max_abs_imag(eig(herm)) < 1e-12);
}

TEST_CASE("eig: Hatano-Nelson is real via the Hermitian-gauge oracle") {
  // T H T^{-1} with T = diag(r^i), r = sqrt(b/a), is Hermitian tridiagonal
  // with hopping sqrt(ab); eigenvalues must agree and be real.
  const int length = 30;
  const auto h = build_1d(hatano_nelson(1.2, 1.1), length, BoundaryCondition::open);
  const auto cloud = eig(h);
  CHECK(max_abs_imag(cloud) < 1e-10);

  Eigen::MatrixXd herm = Eigen::MatrixXd::Zero(length, length);
  for (int i = 0; i + 1 < length; ++i)
    herm(i, i + 1) = herm(i + 1, i) = std::sqrt(1.2 * 1.1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(herm);
  std::vector<double> got;
  for (const cplx& e : cloud.values) got.push_back(e.real());
  std::sort(got.begin(), got.end());
  for (int i = 0; i < length; ++i)
    CHECK(std::abs(got[i] - oracle.eigenvalues()(i)) < 1e-10);
}

TEST_CASE("eig: residual witness") {
  const auto h = build_1d(hatano_nelson(1.2, 1.1), 20, BoundaryCondition::open);
  const auto cloud = eig(h);
  double norm = h.entries.cwiseAbs().rowwise().sum().maxCoeff();
  for (int i = 0; i < 20; i += 5)
    CHECK(eig_residual_witness(h, cloud.values[i]) < 1e-8 * norm);

  // larger non-normal 2D case
  const auto hx = build_1d(nnn_symbol(1.0, 0.2, 0.1), 15, BoundaryCondition::open);
  const auto h2 = kron_sum_2d(hx, hx);
  const auto c2 = eig(h2);
  const double norm2 = h2.entries.cwiseAbs().rowwise().sum().maxCoeff();
  for (std::size_t i = 0; i < c2.values.size(); i += 37)
    CHECK(eig_residual_witness(h2, c2.values[i]) < 1e-8 * norm2);
}

TEST_CASE("eig is invariant under mild diagonal gauges") {
  const auto op = nnn_symbol(1.0, 0.2, 0.1);
  const auto base = eig(build_1d(op, 40, BoundaryCondition::open));
  for (const double r : {0.9, 1.1}) {
    const auto gauged = eig(build_1d(op.scaled(r), 40, BoundaryCondition::open));
    CHECK(cloud_metrics(base, gauged).hausdorff < 1e-8);
  }
}

TEST_CASE("separable_spectrum_2d matches the dense Kronecker eigensolve") {
  const auto hx = build_1d(hatano_nelson(1.2, 1.1), 8, BoundaryCondition::open);
  const auto hy = build_1d(nnn_symbol(1.0, 0.2, 0.1), 8, BoundaryCondition::open);
  const auto direct = eig(kron_sum_2d(hx, hy));
  const auto summed = separable_spectrum_2d(eig(hx), eig(hy));
  REQUIRE(summed.values.size() == 64);
  CHECK(cloud_metrics(direct, summed).hausdorff < 1e-8);

  const SpectrumCloud zero{{cplx(0.0, 0.0)}, "z"};
  const auto trivially = separable_spectrum_2d(zero, zero);
  REQUIRE(trivially.values.size() == 1);
  CHECK(std::abs(trivially.values[0]) == 0.0);

  // two real clouds sum to a real cloud
  const auto real_sum = separable_spectrum_2d(eig(hx), eig(hx));
  CHECK(max_abs_imag(real_sum) < 1e-9);
}

TEST_CASE("bloch_spectrum samples and converges") {
  const auto op = nnn_symbol(1.0, 0.5, cplx(0.0, 0.2));
  const auto c1 = bloch_spectrum({op}, 128);
  // contains the k=0 sample
  double best = 1e9;
  for (const cplx& v : c1.values) best = std::min(best, std::abs(v - cplx(2.5, 0.2)));
  CHECK(best < 1e-12);

  // max Im of the 2D grid equals (s1 - s2) per axis summed: 0.1 + 0.1
  const auto fig2 = nnn_symbol(1.0, 0.2, 0.1);
  const auto c2 = bloch_spectrum({fig2, fig2}, 128);
  double max_im = -1e9;
  for (const cplx& v : c2.values) max_im = std::max(max_im, v.imag());
  CHECK(max_im == doctest::Approx(0.2).epsilon(1e-3));

  const auto c3 = bloch_spectrum({fig2, fig2}, 256);
  double max_im3 = -1e9;
  for (const cplx& v : c3.values) max_im3 = std::max(max_im3, v.imag());
  CHECK(std::abs(max_im3 - max_im) < 1e-3);

  CHECK_THROWS_AS((void)bloch_spectrum({op}, 32), Error);
}

TEST_CASE("cloud_metrics basics") {
  SpectrumCloud a{{cplx(0, 0), cplx(1, 0), cplx(0.5, 0)}, "a"};
  const auto self = cloud_metrics(a, a);
  CHECK(self.hausdorff == 0.0);
  CHECK(self.max_imag_a == 0.0);
  CHECK(self.centroid_shift == 0.0);

  SpectrumCloud b = a;
  for (cplx& z : b.values) z += cplx(0.0, 0.3);
  const auto shifted = cloud_metrics(b, a);
  CHECK(shifted.hausdorff == doctest::Approx(0.3));
  CHECK(shifted.max_imag_a == doctest::Approx(0.3));
  CHECK(shifted.centroid_shift == doctest::Approx(0.3));

  CHECK_THROWS_AS((void)cloud_metrics(SpectrumCloud{}, a), Error);
}

TEST_CASE("coulomb_potential values and harmonicity") {
  SpectrumCloud single{{cplx(0.4, -0.3)}, "s"};
  const cplx omega(1.0, 1.0);
  CHECK(coulomb_potential(single, omega) ==
        doctest::Approx(std::log(std::abs(omega - cplx(0.4, -0.3)))));

  SpectrumCloud pair{{cplx(-1, 0), cplx(1, 0)}, "p"};
  CHECK(std::abs(coulomb_potential(pair, cplx(0, 0))) < 1e-15);

  // omega -> infinity: Phi - ln|omega| -> 0
  CHECK(std::abs(coulomb_potential(pair, cplx(1e6, 0)) - std::log(1e6)) < 1e-6);

  CHECK_THROWS_AS((void)coulomb_potential(pair, cplx(1.0, 0.0)), SingularPotentialError);

  // discrete harmonicity off the spectrum (5-point stencil)
  const auto h = build_1d(nnn_symbol(1.0, 0.5, cplx(0, 0.2)), 60, BoundaryCondition::open);
  const auto cloud = eig(h);
  const cplx center(3.4, 1.9);  // > 0.2 away from the spectrum by construction
  double dmin = 1e9;
  for (const cplx& e : cloud.values) dmin = std::min(dmin, std::abs(center - e));
  REQUIRE(dmin > 0.2);
  const double s = 1e-2;
  const double lap = (coulomb_potential(cloud, center + s) + coulomb_potential(cloud, center - s) +
                      coulomb_potential(cloud, center + cplx(0, s)) +
                      coulomb_potential(cloud, center - cplx(0, s)) -
                      4.0 * coulomb_potential(cloud, center)) /
                     (s * s);
  CHECK(std::abs(lap) < 1e-3);
}

TEST_CASE("perturbation_series: zero strength and endpoint formulas") {
  EndpointGreens g{cplx(0.3, 0.1), cplx(-0.2, 0.4), cplx(2.0, 0), cplx(3.0, 0)};
  const auto zero = perturbation_series(g, 0.0, 100, cplx(1, 1));
  CHECK(zero.series_terms[0] == 0.0);
  CHECK(zero.series_terms[1] == 0.0);
  CHECK(zero.converged);

  const double delta = 1e-2;
  const auto r = perturbation_series(g, delta, 100, cplx(1, 1));
  CHECK(r.series_terms[0] == doctest::Approx(delta / 100.0 * (0.3 - 0.2)));
  const double expected2 =
      delta * delta / 200.0 * (g.g11 * g.g11 + g.gLL * g.gLL + 2.0 * g.g1L * g.gL1).real();
  CHECK(r.series_terms[1] == doctest::Approx(expected2));
}

TEST_CASE("perturbation_series vs direct potential recomputation (Lambda-shape omega)") {
  // Lambda-shape frequency for the squared chain: corrections are tiny and
  // the first order dominates; direct recomputation of Phi is the oracle.
  const int length = 150;
  const auto op = nnn_symbol(1.0, 0.5, cplx(0.0, 0.2));
  const auto h = build_1d(op, length, BoundaryCondition::open);
  OperatorMatrix h2{h.entries * h.entries, h.geometry, h.bc, h.gauge_log, std::nullopt};
  const cplx omega(1.0, 2.0);  // far from the squared spectrum, Lambda side

  const Eigen::VectorXcd g_first = greens_column(h2, 0, omega);
  const Eigen::VectorXcd g_last = greens_column(h2, length - 1, omega);
  const EndpointGreens eg{g_first(0), g_last(length - 1), g_last(0), g_first(length - 1)};

  const double delta = 1e-3;
  const auto series = perturbation_series(eg, delta, length, omega);

  const auto phi0 = coulomb_potential(eig(h2), omega);
  OperatorMatrix perturbed = h2;
  perturbed.entries(0, 0) -= delta;
  perturbed.entries(length - 1, length - 1) -= delta;
  const auto phi1 = coulomb_potential(eig(perturbed), omega);

  const double direct = phi1 - phi0;
  const double predicted = series.series_terms[0] + series.series_terms[1];
  CHECK(std::abs(direct - predicted) <= 0.1 * std::abs(direct));
  CHECK(series.converged);
}

TEST_CASE("perturbation_series diverges at a V-shape frequency") {
  const int length = 150;
  const auto op = nnn_symbol(1.0, 0.5, cplx(0.0, 0.2));
  const auto h = build_1d(op, length, BoundaryCondition::open);
  OperatorMatrix h2{h.entries * h.entries, h.geometry, h.bc, h.gauge_log, std::nullopt};
  const cplx omega(0.67, 0.28);  // V-shape region of the squared chain

  const Eigen::VectorXcd g_first = greens_column(h2, 0, omega);
  const Eigen::VectorXcd g_last = greens_column(h2, length - 1, omega);
  const EndpointGreens eg{g_first(0), g_last(length - 1), g_last(0), g_first(length - 1)};
  const auto series = perturbation_series(eg, 1e-3, length, omega, 0.0, /*tolerance=*/1e-4);
  CHECK(std::abs(series.series_terms[1]) >= 1e3 * std::abs(series.series_terms[0]));
  CHECK_FALSE(series.converged);
}
