#pragma once

#include "nlpf/grid.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace nlpf {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Second-order Neumann Laplacian with mirror ghost nodes.
///
/// The weighted stiffness matrix `stiffness() = diag(cell_volumes) * (-Delta_h)`
/// is symmetric positive semidefinite, which gives exact summation by parts:
/// (-Delta_h u, v)_H = u^T K v and (-Delta_h u, u)_H = grad_norm_sq(u).
class NeumannLaplacian {
 public:
  explicit NeumannLaplacian(const Grid& grid);

  const Grid& grid() const { return grid_; }
  /// Delta_h u.
  GridFunction apply(const GridFunction& u) const;
  const SparseMatrix& stiffness() const { return stiffness_; }
  /// Delta_h as a sparse matrix (not symmetric at boundary rows).
  const SparseMatrix& matrix() const { return laplacian_; }

 private:
  Grid grid_;
  SparseMatrix laplacian_;
  SparseMatrix stiffness_;
};

/// Dual norm of V = H^1 realized through w = (I - Delta_h)^{-1} u.
class DualNorm {
 public:
  explicit DualNorm(const Grid& grid);

  /// w solving (I - Delta_h) w = u.
  GridFunction riesz(const GridFunction& u) const;
  double inner(const GridFunction& a, const GridFunction& b) const;
  double norm(const GridFunction& u) const;
  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  Eigen::SimplicialLDLT<SparseMatrix> factor_;
};

double norm_Vstar(const Grid& grid, const GridFunction& u);

}  // namespace nlpf
