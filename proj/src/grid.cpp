#include "nlpf/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace nlpf {

namespace {

Eigen::VectorXd axis_weights(int n, double h) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  w[0] = 0.5 * h;
  w[n - 1] = 0.5 * h;
  return w;
}

}  // namespace

Grid::Grid(int nodes, double length)
    : dim_(1), extents_{nodes, 1}, lengths_{length, 0.0}, spacing_{0.0, 0.0} {
  finish();
}

Grid::Grid(int nx, int ny, double lx, double ly)
    : dim_(2), extents_{nx, ny}, lengths_{lx, ly}, spacing_{0.0, 0.0} {
  finish();
}

void Grid::finish() {
  for (int a = 0; a < dim_; ++a) {
    if (extents_[a] < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");
    if (!(lengths_[a] > 0.0) || !std::isfinite(lengths_[a]))
      throw std::invalid_argument("grid side length must be positive");
    spacing_[a] = lengths_[a] / (extents_[a] - 1);
  }
  const Eigen::VectorXd wx = axis_weights(extents_[0], spacing_[0]);
  if (dim_ == 1) {
    cell_volumes_ = wx;
    measure_ = lengths_[0];
  } else {
    const Eigen::VectorXd wy = axis_weights(extents_[1], spacing_[1]);
    cell_volumes_.resize(static_cast<Eigen::Index>(extents_[0]) * extents_[1]);
    for (int j = 0; j < extents_[1]; ++j)
      for (int i = 0; i < extents_[0]; ++i) cell_volumes_[static_cast<Eigen::Index>(index(i, j))] = wx[i] * wy[j];
    measure_ = lengths_[0] * lengths_[1];
  }
}

std::array<double, 2> Grid::coords(std::size_t node) const {
  const auto n = static_cast<int>(node);
  const int i = n % extents_[0];
  const int j = n / extents_[0];
  return {i * spacing_[0], dim_ == 2 ? j * spacing_[1] : 0.0};
}

bool Grid::operator==(const Grid& other) const {
  return dim_ == other.dim_ && extents_ == other.extents_ && lengths_ == other.lengths_;
}

double inner_H(const Grid& grid, const GridFunction& a, const GridFunction& b) {
  return (grid.cell_volumes().array() * a.array() * b.array()).sum();
}

double norm_H(const Grid& grid, const GridFunction& u) { return std::sqrt(inner_H(grid, u, u)); }

double integrate(const Grid& grid, const GridFunction& u) { return grid.cell_volumes().dot(u); }

double grad_norm_sq(const Grid& grid, const GridFunction& u) {
  const int nx = grid.extent(0);
  const int ny = grid.dim() == 2 ? grid.extent(1) : 1;
  const double hx = grid.spacing(0);
  double sum = 0.0;
  // x-edges carry hx times the transverse weight; y-edges symmetric.
  for (int j = 0; j < ny; ++j) {
    double wy = 1.0;
    if (grid.dim() == 2) wy = (j == 0 || j == ny - 1) ? 0.5 * grid.spacing(1) : grid.spacing(1);
    for (int i = 0; i + 1 < nx; ++i) {
      const double d = (u[static_cast<Eigen::Index>(grid.index(i + 1, j))] - u[static_cast<Eigen::Index>(grid.index(i, j))]) / hx;
      sum += hx * wy * d * d;
    }
  }
  if (grid.dim() == 2) {
    const double hy = grid.spacing(1);
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double wx = (i == 0 || i == nx - 1) ? 0.5 * hx : hx;
        const double d = (u[static_cast<Eigen::Index>(grid.index(i, j + 1))] - u[static_cast<Eigen::Index>(grid.index(i, j))]) / hy;
        sum += wx * hy * d * d;
      }
    }
  }
  return sum;
}

double norm_V(const Grid& grid, const GridFunction& u) {
  return std::sqrt(grad_norm_sq(grid, u) + inner_H(grid, u, u));
}

double norm_Linf(const GridFunction& u) { return u.size() == 0 ? 0.0 : u.cwiseAbs().maxCoeff(); }

bool all_finite(const GridFunction& u) { return u.allFinite(); }

}  // namespace nlpf
