#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nonbloch/errors.hpp"
#include "nonbloch/gbz.hpp"
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

std::vector<cplx> obc_energies(const LaurentOperator& op, int length) {
  return eig(build_1d(op, length, BoundaryCondition::open)).values;
}

}  // namespace

TEST_CASE("gbz_1d: Hatano-Nelson radius oracle") {
  const auto op = hatano_nelson(1.2, 1.1);
  const auto cloud = gbz_1d(op, obc_energies(op, 150), 0.05);
  REQUIRE(!cloud.points.empty());
  const double radius = std::sqrt(1.1 / 1.2);
  for (const auto& p : cloud.points) CHECK(std::abs(std::abs(p.beta) - radius) < 1e-3);
}

TEST_CASE("gbz_1d: Hermitian symbol lives on the unit circle") {
  const auto op = LaurentOperator({{1, 1.0}, {-1, 1.0}, {2, 0.3}, {-2, 0.3}});
  const auto cloud = gbz_1d(op, obc_energies(op, 150), 0.05);
  REQUIRE(!cloud.points.empty());
  for (const auto& p : cloud.points) CHECK(std::abs(std::abs(p.beta) - 1.0) < 1e-3);
}

TEST_CASE("gbz_1d: reference symbol gives a closed non-circular curve") {
  const auto op = nnn_symbol(1.0, 0.5, cplx(0.0, 0.2));
  const auto cloud = gbz_1d(op, obc_energies(op, 150), 0.05);
  REQUIRE(cloud.points.size() > 200);
  double lo = 1e9, hi = 0.0;
  for (const auto& p : cloud.points) {
    lo = std::min(lo, std::abs(p.beta));
    hi = std::max(hi, std::abs(p.beta));
  }
  CHECK(hi - lo > 0.05);  // non-circular
  // moduli certificate re-verified from (symbol, E)
  for (std::size_t i = 0; i < cloud.points.size(); i += 37) {
    const auto rl = roots_sorted(op, cloud.points[i].energy);
    const double m_lo = std::abs(rl.roots[op.neg_range() - 1]);
    const double m_hi = std::abs(rl.roots[op.neg_range()]);
    CHECK(std::abs(m_lo - m_hi) / m_hi <= 0.05);
  }
}

TEST_CASE("gbz_1d: empty result is a warning, not an error") {
  const auto op = hatano_nelson(1.2, 1.1);
  // far-out energies never satisfy the middle-moduli condition
  const auto cloud = gbz_1d(op, {cplx(50.0, 50.0)}, 1e-6);
  CHECK(cloud.points.empty());
  CHECK_THROWS_AS((void)gbz_1d(LaurentOperator({{1, 1.0}}), {cplx(0, 0)}, 0.05), Error);
}

TEST_CASE("nonbloch_spectrum: Hatano-Nelson real interval") {
  const auto op = hatano_nelson(1.2, 1.1);
  // cos-distributed eigenvalues are sparsest mid-interval; L=500 brings the
  // central gap under the 1e-2 Hausdorff budget
  const auto cloud = gbz_1d(op, obc_energies(op, 500), 0.05);
  const auto nb = nonbloch_spectrum(op, cloud);
  const double edge = 2.0 * std::sqrt(1.32);
  // oracle: similarity transform to the Hermitian chain -> [-2 sqrt(ab), 2 sqrt(ab)]
  SpectrumCloud interval;
  for (int i = 0; i <= 400; ++i)
    interval.values.push_back(cplx(-edge + 2 * edge * i / 400.0, 0.0));
  CHECK(cloud_metrics(nb, interval).hausdorff < 1e-2);
}

TEST_CASE("nonbloch_spectrum consistency with finite-size diagonalization") {
  const auto op = nnn_symbol(1.0, 0.5, cplx(0.0, 0.2));
  const auto cloud = gbz_1d(op, obc_energies(op, 150), 0.05);
  const auto nb = nonbloch_spectrum(op, cloud);
  const SpectrumCloud reference{obc_energies(op, 200), "obc200"};
  CHECK(cloud_metrics(nb, reference).hausdorff < 0.05);
}

TEST_CASE("h^2 on GBZ(h) differs from h^2 on GBZ(h^2)") {
  const auto op = nnn_symbol(1.0, 0.5, cplx(0.0, 0.2));
  const auto sq = product(op, op);
  const auto gbz_h = gbz_1d(op, obc_energies(op, 150), 0.05);
  const auto gbz_h2 = gbz_1d(sq, obc_energies(sq, 150), 0.05);
  const auto spec_a = nonbloch_spectrum(sq, gbz_h);
  const auto spec_b = nonbloch_spectrum(sq, gbz_h2);
  const double d = cloud_metrics(spec_a, spec_b).hausdorff;
  CHECK(d > 0.05);  // genuinely different clouds (partial overlap)
}

TEST_CASE("lambda_pm_predict: plain mechanism never allows V") {
  const auto op = nnn_symbol(1.0, 0.5, cplx(0.0, 0.2));
  for (int i = 0; i < 40; ++i) {
    const cplx omega = std::polar(3.5, kTwoPi * i / 40.0);
    const auto p = lambda_pm_predict(op, omega, LambdaMechanism::plain_middle_roots);
    CHECK(p.lambda_plus <= p.lambda_minus + 1e-12);
  }
}

TEST_CASE("lambda_pm_predict: squared mechanism and the interleaving condition") {
  const auto op = nnn_symbol(1.0, 0.5, cplx(0.0, 0.2));
  int v_count = 0;
  for (const cplx omega : {cplx(0.49, 0.18), cplx(0.67, 0.28), cplx(4, 1), cplx(1, 2)}) {
    const auto p = lambda_pm_predict(op, omega, LambdaMechanism::squared_factorization);
    // V-shape <=> interleaving of the middle-root moduli at +-sqrt(omega)
    const cplx root = std::sqrt(omega);
    const auto ra = roots_sorted(op, root);
    const auto rb = roots_sorted(op, -root);
    const int n = op.neg_range();
    const double a2 = std::abs(ra.roots[n - 1]), a3 = std::abs(ra.roots[n]);
    const double b2 = std::abs(rb.roots[n - 1]), b3 = std::abs(rb.roots[n]);
    const bool interleaved = (b3 < a2) || (a3 < b2);
    const bool is_v = p.lambda_plus > p.lambda_minus;
    CHECK(is_v == interleaved);
    if (is_v) ++v_count;
  }
  CHECK(v_count >= 2);  // both examples near the spectrum are V points
  CHECK_THROWS_AS(
      (void)lambda_pm_predict(op, cplx(0, 0), LambdaMechanism::squared_factorization), Error);
}

TEST_CASE("lambda_pm_predict: Hatano-Nelson far outside") {
  const auto p =
      lambda_pm_predict(hatano_nelson(1.2, 1.1), cplx(10.0, 0.0), LambdaMechanism::plain_middle_roots);
  // large omega: beta_1 ~ b/omega (small), beta_2 ~ omega/a (large)
  CHECK(p.lambda_plus < 0.0);
  CHECK(p.lambda_minus > 0.0);
  CHECK(p.lambda_plus == doctest::Approx(std::log(1.1 / 10.0)).epsilon(0.05));
  CHECK(p.lambda_minus == doctest::Approx(std::log(10.0 / 1.2)).epsilon(0.05));
}

TEST_CASE("gauge covariance of the GBZ") {
  const auto op = nnn_symbol(1.0, 0.5, cplx(0.0, 0.2));
  const auto energies = obc_energies(op, 120);
  const auto base = gbz_1d(op, energies, 0.05);
  const auto nb_base = nonbloch_spectrum(op, base);
  for (const double r : {0.9, 1.1}) {
    const auto scaled_op = op.scaled(r);
    const auto scaled = gbz_1d(scaled_op, energies, 0.05);
    REQUIRE(scaled.points.size() == base.points.size());
    for (std::size_t i = 0; i < base.points.size(); ++i)
      CHECK(std::abs(scaled.points[i].beta) ==
            doctest::Approx(std::abs(base.points[i].beta) / r).epsilon(1e-9));
    CHECK(cloud_metrics(nonbloch_spectrum(scaled_op, scaled), nb_base).hausdorff < 1e-6);
  }
}

TEST_CASE("equienergy_growth_rate") {
  // two identical Hatano-Nelson axes: circular GBZ of radius r, so the
  // antidiagonal direction cancels exactly
  const auto hn = hatano_nelson(1.2, 1.1);
  const auto cloud = gbz_1d(hn, obc_energies(hn, 100), 0.05);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double rate =
      equienergy_growth_rate(cloud, cloud, cplx(0.5, 0.0), inv_sqrt2, -inv_sqrt2);
  CHECK(std::abs(rate) < 1e-6);

  // Hermitian symbols: all |beta| = 1, lambda = 0 in any direction
  const auto herm = LaurentOperator({{1, 1.0}, {-1, 1.0}, {2, 0.3}, {-2, 0.3}});
  const auto hcloud = gbz_1d(herm, obc_energies(herm, 100), 0.05);
  for (const auto dir : {std::pair{1.0, 0.0}, {0.0, 1.0}, {inv_sqrt2, inv_sqrt2}}) {
    const double lam =
        equienergy_growth_rate(hcloud, hcloud, cplx(0.5, 0.0), dir.first, dir.second);
    CHECK(std::abs(lam) < 5e-3);
  }

  // non-circular GBZ (next-nearest anisotropy): positive in both antidiagonal
  // directions
  const auto aniso = nnn_symbol(1.0, 0.2, 0.1);
  const auto acloud = gbz_1d(aniso, obc_energies(aniso, 150), 0.05);
  const double lp = equienergy_growth_rate(acloud, acloud, cplx(0.7, 0.0), inv_sqrt2, -inv_sqrt2);
  const double lm = equienergy_growth_rate(acloud, acloud, cplx(0.7, 0.0), -inv_sqrt2, inv_sqrt2);
  CHECK(lp > 0.0);
  CHECK(lm > 0.0);

  CHECK_THROWS_AS(
      (void)equienergy_growth_rate(cloud, cloud, cplx(100.0, 0.0), inv_sqrt2, -inv_sqrt2), Error);
  CHECK_THROWS_AS((void)equienergy_growth_rate(cloud, cloud, cplx(0.5, 0.0), 1.0, 1.0), Error);
}
