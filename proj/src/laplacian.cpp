#include "nlpf/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace nlpf {

namespace {

using Triplet = Eigen::Triplet<double>;

// 1D mirror-ghost stencil along one axis: row p gets (u_q - u_p) * 2/h^2 at
// the boundary and (u_{p-1} - 2u_p + u_{p+1})/h^2 inside.
void add_axis(const Grid& grid, int axis, std::vector<Triplet>& out) {
  const int nx = grid.extent(0);
  const int ny = grid.dim() == 2 ? grid.extent(1) : 1;
  const int n = grid.extent(axis);
  const double inv = 1.0 / (grid.spacing(axis) * grid.spacing(axis));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int k = axis == 0 ? i : j;
      const auto row = static_cast<int>(grid.index(i, j));
      auto neighbour = [&](int step) {
        return axis == 0 ? static_cast<int>(grid.index(i + step, j)) : static_cast<int>(grid.index(i, j + step));
      };
      if (k == 0) {
        out.emplace_back(row, row, -2.0 * inv);
        out.emplace_back(row, neighbour(1), 2.0 * inv);
      } else if (k == n - 1) {
        out.emplace_back(row, row, -2.0 * inv);
        out.emplace_back(row, neighbour(-1), 2.0 * inv);
      } else {
        out.emplace_back(row, row, -2.0 * inv);
        out.emplace_back(row, neighbour(-1), inv);
        out.emplace_back(row, neighbour(1), inv);
      }
    }
  }
}

}  // namespace

NeumannLaplacian::NeumannLaplacian(const Grid& grid) : grid_(grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  std::vector<Triplet> trip;
  for (int a = 0; a < grid.dim(); ++a) add_axis(grid, a, trip);
  laplacian_.resize(n, n);
  laplacian_.setFromTriplets(trip.begin(), trip.end());
  stiffness_ = -(grid.cell_volumes().asDiagonal() * laplacian_);
  // Symmetrize away rounding so Cholesky sees an exactly symmetric matrix.
  SparseMatrix t = stiffness_.transpose();
  stiffness_ = 0.5 * (stiffness_ + t);
  stiffness_.makeCompressed();
}

GridFunction NeumannLaplacian::apply(const GridFunction& u) const { return laplacian_ * u; }

DualNorm::DualNorm(const Grid& grid) : grid_(grid) {
  NeumannLaplacian lap(grid);
  SparseMatrix mass(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(grid.size()));
  mass.setIdentity();
  mass = grid.cell_volumes().asDiagonal() * mass;
  SparseMatrix m = mass + lap.stiffness();
  factor_.compute(m);
  if (factor_.info() != Eigen::Success) throw std::runtime_error("DualNorm: factorization failed");
}

GridFunction DualNorm::riesz(const GridFunction& u) const {
  const GridFunction rhs = grid_.cell_volumes().cwiseProduct(u);
  return factor_.solve(rhs);
}

double DualNorm::inner(const GridFunction& a, const GridFunction& b) const {
  // (a, b)_{V*} = (Wa)^T M^{-1} (Wb) with M = W (I - Delta_h).
  const GridFunction wb = grid_.cell_volumes().cwiseProduct(b);
  return riesz(a).dot(wb);
}

double DualNorm::norm(const GridFunction& u) const { return std::sqrt(std::max(0.0, inner(u, u))); }

double norm_Vstar(const Grid& grid, const GridFunction& u) {
  DualNorm dual(grid);
  return norm_V(grid, dual.riesz(u));
}

}  // namespace nlpf
