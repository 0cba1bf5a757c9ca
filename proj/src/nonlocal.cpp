#include "nlpf/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nlpf {

namespace kernels {

Kernel gaussian(double sigma, double radius, double amplitude) {
  if (!(sigma > 0.0) || !(radius > 0.0)) throw std::invalid_argument("gaussian kernel needs sigma, radius > 0");
  const double inv = 1.0 / (2.0 * sigma * sigma);
  return Kernel{"gaussian",
                [=](double dx, double dy) {
                  const double r2 = dx * dx + dy * dy;
                  return r2 <= radius * radius ? amplitude * std::exp(-r2 * inv) : 0.0;
                },
                radius};
}

Kernel hat(double radius, double amplitude) {
  if (!(radius > 0.0)) throw std::invalid_argument("hat kernel needs radius > 0");
  return Kernel{"hat",
                [=](double dx, double dy) {
                  const double r = std::sqrt(dx * dx + dy * dy);
                  return r < radius ? amplitude * (1.0 - r / radius) : 0.0;
                },
                radius};
}

Kernel zero() {
  return Kernel{"zero", [](double, double) { return 0.0; }, 0.0};
}

}  // namespace kernels

double evenness_defect(const Kernel& kernel, const Grid& grid) {
  const int nx = grid.extent(0);
  const int ny = grid.dim() == 2 ? grid.extent(1) : 1;
  double worst = 0.0;
  for (int oy = -(ny - 1); oy <= ny - 1; ++oy) {
    for (int ox = -(nx - 1); ox <= nx - 1; ++ox) {
      const double dx = ox * grid.spacing(0);
      const double dy = grid.dim() == 2 ? oy * grid.spacing(1) : 0.0;
      worst = std::max(worst, std::abs(kernel(dx, dy) - kernel(-dx, -dy)));
    }
  }
  return worst;
}

ConvolutionPlan::ConvolutionPlan(const Grid& grid, Kernel kernel) : grid_(grid), kernel_(std::move(kernel)) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  std::vector<Eigen::Triplet<double>> trip;
  const double radius = kernel_.support_radius;
  if (radius > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto xi = grid.coords(static_cast<std::size_t>(i));
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto xj = grid.coords(static_cast<std::size_t>(j));
        const double dx = xi[0] - xj[0];
        const double dy = xi[1] - xj[1];
        if (dx * dx + dy * dy > radius * radius) continue;
        const double value = kernel_(dx, dy);
        if (value != 0.0) trip.emplace_back(i, j, value);
      }
    }
  }
  pairs_.resize(n, n);
  pairs_.setFromTriplets(trip.begin(), trip.end());
  pairs_.makeCompressed();
  weights_ = pairs_ * grid.cell_volumes().asDiagonal();
  weights_.makeCompressed();
  a_ = weights_ * GridFunction::Ones(n);
  GridFunction abs_rows = GridFunction::Zero(n);
  for (Eigen::Index k = 0; k < weights_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(weights_, k); it; ++it) abs_rows[it.row()] += std::abs(it.value());
  kernel_bound_ = n > 0 ? abs_rows.maxCoeff() : 0.0;
}

GridFunction ConvolutionPlan::convolve(const GridFunction& phi) const { return weights_ * phi; }

GridFunction ConvolutionPlan::nonlocal_term(const GridFunction& phi) const {
  return a_.cwiseProduct(phi) - convolve(phi);
}

}  // namespace nlpf
