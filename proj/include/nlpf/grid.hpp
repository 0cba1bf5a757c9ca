#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>

namespace nlpf {

/// Nodal values on a Grid; index = i + nx * j.
using GridFunction = Eigen::VectorXd;

/// Uniform vertex-centred grid on the box (0, lx) x (0, ly) with Neumann
/// boundary handling. Quadrature uses midpoint cells, so boundary nodes carry
/// half a cell per boundary axis.
class Grid {
 public:
  /// 1D grid on (0, length). Requires nodes >= 2.
  Grid(int nodes, double length);
  /// 2D tensor grid. Requires nodes >= 2 per axis.
  Grid(int nx, int ny, double lx, double ly);

  int dim() const { return dim_; }
  int extent(int axis) const { return extents_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double length(int axis) const { return lengths_[axis]; }
  std::size_t size() const { return static_cast<std::size_t>(cell_volumes_.size()); }
  double measure() const { return measure_; }

  /// Quadrature weight of every node; sums to measure().
  const Eigen::VectorXd& cell_volumes() const { return cell_volumes_; }

  std::array<double, 2> coords(std::size_t node) const;
  std::size_t index(int i, int j = 0) const { return static_cast<std::size_t>(i + extents_[0] * j); }

  GridFunction zeros() const { return GridFunction::Zero(static_cast<Eigen::Index>(size())); }
  GridFunction constant(double c) const { return GridFunction::Constant(static_cast<Eigen::Index>(size()), c); }

  bool operator==(const Grid& other) const;

 private:
  void finish();

  int dim_;
  std::array<int, 2> extents_;
  std::array<double, 2> lengths_;
  std::array<double, 2> spacing_;
  double measure_ = 0.0;
  Eigen::VectorXd cell_volumes_;
};

double inner_H(const Grid& grid, const GridFunction& a, const GridFunction& b);
double norm_H(const Grid& grid, const GridFunction& u);
/// Integral of u over the domain with the same cell volumes as norm_H.
double integrate(const Grid& grid, const GridFunction& u);
/// Squared gradient norm from forward differences over every grid edge.
double grad_norm_sq(const Grid& grid, const GridFunction& u);
double norm_V(const Grid& grid, const GridFunction& u);
double norm_Linf(const GridFunction& u);
bool all_finite(const GridFunction& u);

}  // namespace nlpf
