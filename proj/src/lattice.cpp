#include "nonbloch/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nonbloch/errors.hpp"

namespace nonbloch {

namespace {
std::int64_t site_key(const std::array<int, 2>& s) {
  return (static_cast<std::int64_t>(s[0]) << 32) ^ static_cast<std::int64_t>(s[1] + (1 << 30));
}
}  // namespace

std::string to_string(GeometryKind k) {
  switch (k) {
    case GeometryKind::interval: return "interval";
    case GeometryKind::square: return "square";
    case GeometryKind::corner_cut: return "corner_cut";
    case GeometryKind::disk: return "disk";
    case GeometryKind::custom: return "custom";
  }
  return "?";
}

LatticeGeometry::LatticeGeometry(std::vector<std::array<int, 2>> sites, int dims,
                                 GeometryKind kind, int hop_range)
    : sites_(std::move(sites)), dims_(dims), kind_(kind), hop_range_(hop_range) {
  index_.reserve(sites_.size());
  for (int i = 0; i < static_cast<int>(sites_.size()); ++i) {
    if (!index_.emplace(site_key(sites_[i]), i).second)
      throw Error("LatticeGeometry: duplicate site");
  }
}

LatticeGeometry LatticeGeometry::interval(int length, int hop_range) {
  if (length < 1) throw Error("interval: length must be positive");
  std::vector<std::array<int, 2>> s;
  s.reserve(length);
  for (int x = 1; x <= length; ++x) s.push_back({x, 0});
  return LatticeGeometry(std::move(s), 1, GeometryKind::interval, hop_range);
}

LatticeGeometry LatticeGeometry::rectangle(int lx, int ly, int hop_range) {
  if (lx < 1 || ly < 1) throw Error("rectangle: sides must be positive");
  std::vector<std::array<int, 2>> s;
  s.reserve(static_cast<std::size_t>(lx) * ly);
  for (int x = 1; x <= lx; ++x)
    for (int y = 1; y <= ly; ++y) s.push_back({x, y});
  return LatticeGeometry(std::move(s), 2, GeometryKind::square, hop_range);
}

LatticeGeometry LatticeGeometry::corner_cut(int length, int cut, int hop_range) {
  if (cut < 1 || 2 * cut >= length) throw Error("corner_cut: cut out of range");
  std::vector<std::array<int, 2>> s;
  for (int x = 1; x <= length; ++x)
    for (int y = 1; y <= length; ++y) {
      const bool low_x = x <= cut, high_x = x > length - cut;
      const bool low_y = y <= cut, high_y = y > length - cut;
      if ((low_x || high_x) && (low_y || high_y)) continue;
      s.push_back({x, y});
    }
  return LatticeGeometry(std::move(s), 2, GeometryKind::corner_cut, hop_range);
}

LatticeGeometry LatticeGeometry::disk(int length, double radius, int hop_range) {
  const double c = 0.5 * (length + 1);
  std::vector<std::array<int, 2>> s;
  for (int x = 1; x <= length; ++x)
    for (int y = 1; y <= length; ++y) {
      const double dx = x - c, dy = y - c;
      if (dx * dx + dy * dy <= radius * radius) s.push_back({x, y});
    }
  if (s.empty()) throw Error("disk: no sites inside radius");
  return LatticeGeometry(std::move(s), 2, GeometryKind::disk, hop_range);
}

std::optional<int> LatticeGeometry::index_of(const std::array<int, 2>& site) const {
  auto it = index_.find(site_key(site));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> LatticeGeometry::corner_indices() const {
  int min_x = sites_[0][0], max_x = sites_[0][0];
  int min_y = sites_[0][1], max_y = sites_[0][1];
  for (const auto& s : sites_) {
    min_x = std::min(min_x, s[0]);
    max_x = std::max(max_x, s[0]);
    min_y = std::min(min_y, s[1]);
    max_y = std::max(max_y, s[1]);
  }
  std::vector<int> out;
  for (const auto& corner : {std::array<int, 2>{min_x, min_y}, {min_x, max_y},
                             {max_x, min_y}, {max_x, max_y}}) {
    if (auto idx = index_of(corner)) out.push_back(*idx);
  }
  return out;
}

std::vector<int> boundary_sites(const LatticeGeometry& g) {
  const int r = g.hop_range();
  const int full = g.dims() == 1 ? 2 * r : (2 * r + 1) * (2 * r + 1) - 1;
  std::vector<int> out;
  for (int i = 0; i < g.size(); ++i) {
    const auto& s = g.sites()[i];
    int count = 0;
    for (int dx = -r; dx <= r; ++dx) {
      if (g.dims() == 1) {
        if (dx != 0 && g.index_of({s[0] + dx, 0})) ++count;
      } else {
        for (int dy = -r; dy <= r; ++dy) {
          if ((dx != 0 || dy != 0) && g.index_of({s[0] + dx, s[1] + dy})) ++count;
        }
      }
    }
    if (count < full) out.push_back(i);
  }
  return out;
}

OperatorMatrix build_1d(const LaurentOperator& op, int length, BoundaryCondition bc) {
  const int range = std::max(op.neg_range(), op.pos_range());
  if (length <= op.neg_range() + op.pos_range())
    throw Error("build_1d: chain shorter than hopping range (need L > m + n)");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(length, length);
  for (const auto& [s, t] : op.coeffs()) {
    for (int i = 0; i < length; ++i) {
      const int j = i + s;
      if (j >= 0 && j < length) {
        h(i, j) += t;
      } else if (bc == BoundaryCondition::periodic) {
        h(i, ((j % length) + length) % length) += t;
      }
    }
  }
  OperatorMatrix out{std::move(h), LatticeGeometry::interval(length, range), bc,
                     {std::log(balance_radius(op)), 0.0}, std::nullopt, op};
  return out;
}

OperatorMatrix kron_sum_2d(const OperatorMatrix& hx, const OperatorMatrix& hy) {
  if (hx.geometry.dims() != 1 || hy.geometry.dims() != 1 || hx.bc != hy.bc)
    throw Error("kron_sum_2d: operands must be 1D chains with matching bc");
  const int lx = hx.dim(), ly = hy.dim();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(lx * ly, lx * ly);
  for (int x = 0; x < lx; ++x)
    for (int xp = 0; xp < lx; ++xp) {
      if (hx.entries(x, xp) == cplx(0.0, 0.0)) continue;
      for (int y = 0; y < ly; ++y) h(x * ly + y, xp * ly + y) += hx.entries(x, xp);
    }
  for (int y = 0; y < ly; ++y)
    for (int yp = 0; yp < ly; ++yp) {
      if (hy.entries(y, yp) == cplx(0.0, 0.0)) continue;
      for (int x = 0; x < lx; ++x) h(x * ly + y, x * ly + yp) += hy.entries(y, yp);
    }
  const int range =
      std::max(hx.geometry.hop_range(), hy.geometry.hop_range());
  OperatorMatrix out{std::move(h), LatticeGeometry::rectangle(lx, ly, range), hx.bc,
                     {hx.gauge_log[0], hy.gauge_log[0]},
                     KronFactors{hx.entries, hy.entries, Eigen::VectorXcd::Zero(lx * ly)},
                     std::nullopt};
  return out;
}

OperatorMatrix restrict_geometry(const OperatorMatrix& h, const LatticeGeometry& g) {
  std::vector<int> rows(g.size());
  for (int i = 0; i < g.size(); ++i) {
    auto idx = h.geometry.index_of(g.sites()[i]);
    if (!idx) throw Error("restrict_geometry: site not in parent geometry");
    rows[i] = *idx;
  }
  Eigen::MatrixXcd sub(g.size(), g.size());
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j) sub(i, j) = h.entries(rows[i], rows[j]);
  return OperatorMatrix{std::move(sub), g, h.bc, h.gauge_log, std::nullopt, h.symbol};
}

Perturbation Perturbation::corner_onsite(const LatticeGeometry& g, cplx delta) {
  Perturbation p;
  p.kind = PerturbationKind::corner_onsite;
  p.strength = delta;
  p.site_indices = g.corner_indices();
  return p;
}

Perturbation Perturbation::boundary_disorder(const LatticeGeometry& g, double width,
                                             std::uint64_t seed) {
  Perturbation p;
  p.kind = PerturbationKind::boundary_disorder;
  p.disorder_width = width;
  p.seed = seed;
  p.site_indices = boundary_sites(g);  // canonical order
  return p;
}

Perturbation Perturbation::custom_onsite(std::vector<int> site_indices, cplx delta) {
  Perturbation p;
  p.kind = PerturbationKind::custom_onsite;
  p.strength = delta;
  p.site_indices = std::move(site_indices);
  return p;
}

std::vector<cplx> onsite_values(const Perturbation& p) {
  std::vector<cplx> v(p.site_indices.size());
  if (p.kind == PerturbationKind::boundary_disorder) {
    std::mt19937_64 rng(p.seed);
    for (auto& x : v) x = p.disorder_width * (u64_to_unit_double(rng()) - 0.5);
  } else {
    std::fill(v.begin(), v.end(), p.strength);
  }
  return v;
}

OperatorMatrix add_onsite(const OperatorMatrix& h, const Perturbation& p) {
  OperatorMatrix out = h;
  const auto values = onsite_values(p);
  for (std::size_t k = 0; k < p.site_indices.size(); ++k) {
    const int i = p.site_indices[k];
    if (i < 0 || i >= out.dim()) throw Error("add_onsite: site index out of range");
    out.entries(i, i) += values[k];
    if (out.kron) out.kron->diag_extra(i) += values[k];
  }
  return out;
}

}  // namespace nonbloch
