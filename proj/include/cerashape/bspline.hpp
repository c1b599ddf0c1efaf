#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "cerashape/geometry.hpp"

namespace cerashape {

/// Clamped B-spline basis with uniformly spaced interior knots on
/// [x_begin, x_end].
class BSplineBasis {
 public:
  BSplineBasis(int n_basis, int degree, double x_begin, double x_end);

  int size() const { return n_basis_; }
  int degree() const { return degree_; }
  const std::vector<double>& knots() const { return knots_; }
  double x_begin() const { return knots_.front(); }
  double x_end() const { return knots_.back(); }

  /// Values of all basis functions at x (Cox-de Boor recursion).
  Eigen::VectorXd evaluate(double x) const;

 private:
  int find_span(double x) const;

  int n_basis_;
  int degree_;
  std::vector<double> knots_;
};

/// Design coefficients for meanline and thickness.
struct BSplineCoeffs {
  Eigen::VectorXd ml;
  Eigen::VectorXd th;

  /// Flat (ml, th) layout used by the optimizers.
  Eigen::VectorXd stacked() const;
  static BSplineCoeffs from_stacked(const Eigen::VectorXd& gamma);
};

/// B(i, j) = basis function j evaluated at x_i.
Eigen::MatrixXd basis_matrix(const BSplineBasis& basis, std::span<const double> x_coords);

/// rho = B gamma for both curves. Throws NonPositiveThickness when the
/// induced thickness drops to kMinThickness or below.
ShapeParams gamma_to_rho(const BSplineCoeffs& gamma, const Eigen::MatrixXd& basis_mat);
ShapeParams gamma_to_rho(const BSplineCoeffs& gamma, const BSplineBasis& basis,
                         std::span<const double> x_coords);

/// d rho / d gamma: block diagonal with two copies of B, (2 n_x) x (2 n_B).
Eigen::MatrixXd rho_jacobian(const Eigen::MatrixXd& basis_mat);

/// Least-squares coefficients reproducing rho on the grid.
BSplineCoeffs fit_gamma(const ShapeParams& rho, const Eigen::MatrixXd& basis_mat);

}  // namespace cerashape
