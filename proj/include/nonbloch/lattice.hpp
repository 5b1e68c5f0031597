#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nonbloch/laurent.hpp"
#include "nonbloch/util.hpp"

namespace nonbloch {

enum class GeometryKind { interval, square, corner_cut, disk, custom };
enum class BoundaryCondition { open, periodic };

std::string to_string(GeometryKind k);

/// Site set with integer coordinates (1-based along each axis) and the
/// canonical site -> row-index bijection given by the order of `sites`.
/// 2D squares are stored row-major: x outer, y inner.
class LatticeGeometry {
 public:
  LatticeGeometry(std::vector<std::array<int, 2>> sites, int dims, GeometryKind kind,
                  int hop_range);

  static LatticeGeometry interval(int length, int hop_range);
  static LatticeGeometry rectangle(int lx, int ly, int hop_range);  // kind=square
  /// Square with the four cut x cut corner blocks removed.
  static LatticeGeometry corner_cut(int length, int cut, int hop_range);
  /// Sites of the L x L square with (x-c)^2 + (y-c)^2 <= R^2, c = (L+1)/2.
  static LatticeGeometry disk(int length, double radius, int hop_range);

  const std::vector<std::array<int, 2>>& sites() const { return sites_; }
  int dims() const { return dims_; }
  GeometryKind kind() const { return kind_; }
  int hop_range() const { return hop_range_; }
  int size() const { return static_cast<int>(sites_.size()); }

  std::optional<int> index_of(const std::array<int, 2>& site) const;

  /// Row indices of the four corner sites (square-family geometries).
  std::vector<int> corner_indices() const;

 private:
  std::vector<std::array<int, 2>> sites_;
  int dims_;
  GeometryKind kind_;
  int hop_range_;
  std::unordered_map<std::int64_t, int> index_;
};

/// Sites with an incomplete Chebyshev-hop_range neighborhood.
std::vector<int> boundary_sites(const LatticeGeometry& g);

/// Kronecker-sum factors kept alongside a 2D matrix for structured matvecs;
/// diag_extra accumulates onsite perturbations.
struct KronFactors {
  Eigen::MatrixXcd hx;
  Eigen::MatrixXcd hy;
  Eigen::VectorXcd diag_extra;
};

/// Dense complex real-space Hamiltonian on a geometry. gauge_log holds the
/// per-axis log of the balance radius of the generating symbols ({0,0} when
/// unknown); eig() may use it for an exact similarity rescale. symbol keeps
/// the generating 1D symbol so the eigensolver can refine that gauge.
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  LatticeGeometry geometry;
  BoundaryCondition bc = BoundaryCondition::open;
  std::array<double, 2> gauge_log{0.0, 0.0};
  std::optional<KronFactors> kron;
  std::optional<LaurentOperator> symbol;

  int dim() const { return static_cast<int>(entries.rows()); }
};

/// Toeplitz chain with (H)_{ij} = t_{j-i}, truncated to the open chain or
/// wrapped under periodic bc. Requires L > m + n.
OperatorMatrix build_1d(const LaurentOperator& op, int length, BoundaryCondition bc);

/// Hx (x) I + I (x) Hy on the rectangle, basis |x> (x) |y>, row-major.
OperatorMatrix kron_sum_2d(const OperatorMatrix& hx, const OperatorMatrix& hy);

/// Principal submatrix on g's sites; hoppings leaving g are deleted.
OperatorMatrix restrict_geometry(const OperatorMatrix& h, const LatticeGeometry& g);

enum class PerturbationKind { corner_onsite, boundary_disorder, custom_onsite };

struct Perturbation {
  PerturbationKind kind;
  cplx strength = 0.0;           // delta (corner/custom)
  double disorder_width = 0.0;   // W (disorder)
  std::uint64_t seed = 0;        // disorder only
  std::vector<int> site_indices;

  static Perturbation corner_onsite(const LatticeGeometry& g, cplx delta);
  static Perturbation boundary_disorder(const LatticeGeometry& g, double width,
                                        std::uint64_t seed);
  static Perturbation custom_onsite(std::vector<int> site_indices, cplx delta);
};

/// Diagonal values the perturbation adds, in site_indices order.
std::vector<cplx> onsite_values(const Perturbation& p);

OperatorMatrix add_onsite(const OperatorMatrix& h, const Perturbation& p);

}  // namespace nonbloch
