#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nonbloch/errors.hpp"
#include "nonbloch/lattice.hpp"

using namespace nonbloch;

namespace {

LaurentOperator hatano_nelson(double a, double b) {
  return LaurentOperator({{1, a}, {-1, b}});
}

LaurentOperator nnn_symbol(double t, cplx s1, cplx s2) {
  return LaurentOperator({{1, t}, {-1, t}, {2, s1}, {-2, s2}});
}

}  // namespace

TEST_CASE("build_1d places coefficients on the j - i = s diagonals") {
  // (t+s1) e^{ik} + (t+s2) e^{-ik}: the Fourier integral picks s = j - i
  const auto hn = hatano_nelson(1.2, 1.1);
  const auto h = build_1d(hn, 8, BoundaryCondition::open);
  for (int i = 0; i + 1 < 8; ++i) {
    CHECK(h.entries(i, i + 1) == cplx(1.2, 0.0));
    CHECK(h.entries(i + 1, i) == cplx(1.1, 0.0));
  }
  CHECK(h.entries(0, 7) == cplx(0.0, 0.0));

  const auto band = build_1d(nnn_symbol(1.0, 0.5, cplx(0, 0.2)), 10, BoundaryCondition::open);
  CHECK(band.entries(0, 2) == cplx(0.5, 0.0));
  CHECK(band.entries(2, 0) == cplx(0.0, 0.2));
  CHECK(band.entries(0, 3) == cplx(0.0, 0.0));  // pentadiagonal, half-bandwidth 2
}

TEST_CASE("build_1d periodic wrap and Bloch row sum at k=0") {
  const auto op = nnn_symbol(1.0, 0.5, cplx(0, 0.2));
  const int length = 12;
  const auto h = build_1d(op, length, BoundaryCondition::periodic);
  CHECK(h.entries(0, length - 1) == op.coeff(-1));
  CHECK(h.entries(0, length - 2) == op.coeff(-2));
  CHECK(h.entries(length - 1, 0) == op.coeff(1));
  // uniform vector is the k=0 Bloch state
  const cplx expected = op.eval_k(0.0);
  for (int i = 0; i < length; ++i) {
    cplx row_sum = 0.0;
    for (int j = 0; j < length; ++j) row_sum += h.entries(i, j);
    CHECK(std::abs(row_sum - expected) < 1e-14);
  }
}

TEST_CASE("build_1d rejects chains shorter than the hopping range") {
  CHECK_THROWS_AS((void)build_1d(nnn_symbol(1, 0.5, 0.2), 4, BoundaryCondition::open), Error);
  CHECK_NOTHROW((void)build_1d(nnn_symbol(1, 0.5, 0.2), 5, BoundaryCondition::open));
}

TEST_CASE("build_1d Hermitian iff t_{-s} = conj(t_s)") {
  const auto herm = build_1d(LaurentOperator({{1, cplx(0.5, 0.3)}, {-1, cplx(0.5, -0.3)}}), 10,
                             BoundaryCondition::open);
  CHECK((herm.entries - herm.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  const auto non = build_1d(hatano_nelson(1.2, 1.1), 10, BoundaryCondition::open);
  CHECK((non.entries - non.entries.adjoint()).cwiseAbs().maxCoeff() > 0.05);
}

TEST_CASE("kron_sum_2d structure") {
  const auto hx = build_1d(hatano_nelson(1.2, 1.1), 5, BoundaryCondition::open);
  const auto hy = build_1d(hatano_nelson(0.9, 1.3), 4, BoundaryCondition::open);
  const auto h2 = kron_sum_2d(hx, hy);
  CHECK(h2.dim() == 20);
  const int ly = 4;
  auto idx = [&](int x, int y) { return x * ly + y; };  // 0-based row-major
  // x-hoppings act at fixed y, y-hoppings at fixed x
  CHECK(h2.entries(idx(1, 2), idx(2, 2)) == hx.entries(1, 2));
  CHECK(h2.entries(idx(1, 2), idx(1, 3)) == hy.entries(2, 3));
  CHECK(h2.entries(idx(1, 2), idx(2, 3)) == cplx(0.0, 0.0));
  // diagonal adds both
  CHECK(h2.entries(idx(3, 1), idx(3, 1)) == hx.entries(3, 3) + hy.entries(1, 1));
}

TEST_CASE("restrict_geometry: corner cut and disk") {
  const int length = 12;
  const auto hx = build_1d(nnn_symbol(1.0, 0.2, 0.1), length, BoundaryCondition::open);
  const auto h2 = kron_sum_2d(hx, hx);

  const auto cut = LatticeGeometry::corner_cut(length, 1, 2);
  CHECK(cut.size() == length * length - 4);
  const auto hc = restrict_geometry(h2, cut);
  CHECK(hc.dim() == length * length - 4);

  // bulk rows are identical to parent rows
  const auto center = cut.index_of({6, 6});
  REQUIRE(center.has_value());
  const auto parent_center = h2.geometry.index_of({6, 6});
  for (int j = 0; j < cut.size(); ++j) {
    const auto pj = h2.geometry.index_of(cut.sites()[j]);
    REQUIRE(pj.has_value());
    CHECK(hc.entries(*center, j) == h2.entries(*parent_center, *pj));
  }

  const auto disk = LatticeGeometry::disk(41, 20.0, 1);
  const double area = std::numbers::pi * 400.0;
  CHECK(std::abs(disk.size() - area) / area < 0.05);

  CHECK_THROWS_AS((void)restrict_geometry(hc, LatticeGeometry::rectangle(12, 12, 2)), Error);
}

TEST_CASE("restrict_geometry is idempotent and commutes with interior onsite") {
  const int length = 10;
  const auto h2 = kron_sum_2d(build_1d(hatano_nelson(1.2, 1.1), length, BoundaryCondition::open),
                              build_1d(hatano_nelson(1.2, 1.1), length, BoundaryCondition::open));
  const auto g = LatticeGeometry::corner_cut(length, 1, 1);
  const auto once = restrict_geometry(h2, g);
  const auto twice = restrict_geometry(once, g);
  CHECK((once.entries - twice.entries).cwiseAbs().maxCoeff() == 0.0);

  // interior perturbation: restrict(add) == add(restrict)
  const auto interior = *h2.geometry.index_of({5, 5});
  const auto p_parent = Perturbation::custom_onsite({interior}, 0.7);
  const auto lhs = restrict_geometry(add_onsite(h2, p_parent), g);
  const auto p_sub = Perturbation::custom_onsite({*g.index_of({5, 5})}, 0.7);
  const auto rhs = add_onsite(restrict_geometry(h2, g), p_sub);
  CHECK((lhs.entries - rhs.entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("add_onsite: corners, determinism, zero strength") {
  const int length = 50;
  const auto hx = build_1d(nnn_symbol(1.0, 0.2, 0.1), length, BoundaryCondition::open);
  const auto h2 = kron_sum_2d(hx, hx);

  const auto zero = add_onsite(h2, Perturbation::corner_onsite(h2.geometry, 0.0));
  CHECK((zero.entries - h2.entries).cwiseAbs().maxCoeff() == 0.0);

  const auto bumped = add_onsite(h2, Perturbation::corner_onsite(h2.geometry, 1.0));
  int changed = 0;
  for (int i = 0; i < h2.dim(); ++i)
    if (bumped.entries(i, i) != h2.entries(i, i)) ++changed;
  CHECK(changed == 4);
  CHECK((bumped.entries - h2.entries).cwiseAbs().sum() == doctest::Approx(4.0));

  const auto d1 = Perturbation::boundary_disorder(h2.geometry, 1.0, 7);
  const auto d2 = Perturbation::boundary_disorder(h2.geometry, 1.0, 7);
  const auto d3 = Perturbation::boundary_disorder(h2.geometry, 1.0, 8);
  CHECK(onsite_values(d1) == onsite_values(d2));
  CHECK(onsite_values(d1) != onsite_values(d3));
  for (const cplx& v : onsite_values(d1)) {
    CHECK(std::abs(v.real()) <= 0.5);
    CHECK(v.imag() == 0.0);
  }
}

TEST_CASE("boundary_sites") {
  const auto interval = LatticeGeometry::interval(9, 1);
  const auto ends = boundary_sites(interval);
  REQUIRE(ends.size() == 2);
  CHECK(interval.sites()[ends[0]][0] == 1);
  CHECK(interval.sites()[ends[1]][0] == 9);

  const auto square = LatticeGeometry::rectangle(50, 50, 1);
  CHECK(boundary_sites(square).size() == 4 * 50 - 4);

  // disk boundary forms a closed discrete ring
  const auto disk = LatticeGeometry::disk(25, 12.0, 1);
  const auto ring = boundary_sites(disk);
  REQUIRE(ring.size() > 8);
  for (int idx : ring) {
    const auto& s = disk.sites()[idx];
    int neighbors = 0;
    for (int other : ring) {
      if (other == idx) continue;
      const auto& q = disk.sites()[other];
      if (std::max(std::abs(q[0] - s[0]), std::abs(q[1] - s[1])) <= 1) ++neighbors;
    }
    CHECK(neighbors >= 2);
  }
}
