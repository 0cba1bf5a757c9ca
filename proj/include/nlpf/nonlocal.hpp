#pragma once

#include "nlpf/grid.hpp"
#include "nlpf/laplacian.hpp"

#include <functional>
#include <string>

namespace nlpf {

/// Interaction kernel J, truncated to |x| <= support_radius.
struct Kernel {
  std::string name;
  std::function<double(double dx, double dy)> profile;
  double support_radius = 0.0;

  double operator()(double dx, double dy) const { return profile ? profile(dx, dy) : 0.0; }
};

namespace kernels {
/// amplitude * exp(-|x|^2 / (2 sigma^2)) for |x| <= radius.
Kernel gaussian(double sigma, double radius, double amplitude = 1.0);
/// amplitude * max(0, 1 - |x| / radius).
Kernel hat(double radius, double amplitude = 1.0);
Kernel zero();
}  // namespace kernels

/// Largest |J(x) - J(-x)| over every node displacement on the grid.
double evenness_defect(const Kernel& kernel, const Grid& grid);

/// Precomputed quadrature for (J*phi)(x_i) = sum_j J(x_i - x_j) phi_j |cell_j|.
class ConvolutionPlan {
 public:
  ConvolutionPlan(const Grid& grid, Kernel kernel);

  const Grid& grid() const { return grid_; }
  const Kernel& kernel() const { return kernel_; }
  /// Symmetric pair values J(x_i - x_j) inside the support.
  const SparseMatrix& pair_values() const { return pairs_; }
  /// Row-applied weights: pair value times the column's cell volume.
  const SparseMatrix& weights() const { return weights_; }
  /// a(x_i) = sum_j weights_ij.
  const GridFunction& a_field() const { return a_; }
  /// max_i sum_j |weights_ij|.
  double kernel_bound() const { return kernel_bound_; }

  GridFunction convolve(const GridFunction& phi) const;
  /// a * phi - J*phi.
  GridFunction nonlocal_term(const GridFunction& phi) const;

 private:
  Grid grid_;
  Kernel kernel_;
  SparseMatrix pairs_;
  SparseMatrix weights_;
  GridFunction a_;
  double kernel_bound_ = 0.0;
};

}  // namespace nlpf
