#include "cerashape/bspline.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Dense>

#include "cerashape/error.hpp"
#include "format.hpp"

namespace cerashape {

BSplineBasis::BSplineBasis(int n_basis, int degree, double x_begin, double x_end)
    : n_basis_(n_basis), degree_(degree) {
  if (degree < 0 || n_basis < degree + 1) {
    throw Error(ErrorCode::InvalidArgument, "B-spline basis needs n_basis >= degree + 1");
  }
  if (!(x_end > x_begin)) {
    throw Error(ErrorCode::InvalidArgument, "B-spline domain must be increasing");
  }
  const int n_interior = n_basis - degree - 1;
  knots_.reserve(static_cast<std::size_t>(n_basis + degree + 1));
  for (int k = 0; k <= degree; ++k) knots_.push_back(x_begin);
  for (int k = 1; k <= n_interior; ++k) {
    knots_.push_back(x_begin + (x_end - x_begin) * k / (n_interior + 1));
  }
  for (int k = 0; k <= degree; ++k) knots_.push_back(x_end);
}

int BSplineBasis::find_span(double x) const {
  // last non-empty span owns the right end point
  if (x >= knots_[n_basis_]) return n_basis_ - 1;
  const auto it = std::upper_bound(knots_.begin() + degree_, knots_.begin() + n_basis_ + 1, x);
  return static_cast<int>(it - knots_.begin()) - 1;
}

Eigen::VectorXd BSplineBasis::evaluate(double x) const {
  const double tol = 1e-12 * (x_end() - x_begin());
  if (x < x_begin() - tol || x > x_end() + tol) {
    throw Error(ErrorCode::OutOfDomain, "x = " + format_double(x) + " outside the knot span");
  }
  x = std::clamp(x, x_begin(), x_end());

  const int span = find_span(x);
  const int p = degree_;
  // nonzero functions N_{span-p..span}, triangular Cox-de Boor scheme
  std::vector<double> n(static_cast<std::size_t>(p + 1), 0.0);
  std::vector<double> left(static_cast<std::size_t>(p + 1), 0.0);
  std::vector<double> right(static_cast<std::size_t>(p + 1), 0.0);
  n[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - knots_[span + 1 - j];
    right[j] = knots_[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    n[j] = saved;
  }

  Eigen::VectorXd values = Eigen::VectorXd::Zero(n_basis_);
  for (int r = 0; r <= p; ++r) values[span - p + r] = n[r];
  return values;
}

Eigen::VectorXd BSplineCoeffs::stacked() const {
  Eigen::VectorXd gamma(ml.size() + th.size());
  gamma << ml, th;
  return gamma;
}

BSplineCoeffs BSplineCoeffs::from_stacked(const Eigen::VectorXd& gamma) {
  if (gamma.size() % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "stacked coefficient vector has odd length");
  }
  const Eigen::Index n = gamma.size() / 2;
  return {gamma.head(n), gamma.tail(n)};
}

Eigen::MatrixXd basis_matrix(const BSplineBasis& basis, std::span<const double> x_coords) {
  Eigen::MatrixXd b(static_cast<Eigen::Index>(x_coords.size()), basis.size());
  for (std::size_t i = 0; i < x_coords.size(); ++i) {
    b.row(static_cast<Eigen::Index>(i)) = basis.evaluate(x_coords[i]).transpose();
  }
  return b;
}

ShapeParams gamma_to_rho(const BSplineCoeffs& gamma, const Eigen::MatrixXd& basis_mat) {
  if (gamma.ml.size() != basis_mat.cols() || gamma.th.size() != basis_mat.cols()) {
    throw Error(ErrorCode::InvalidArgument, "coefficient count differs from basis size");
  }
  ShapeParams rho{basis_mat * gamma.ml, basis_mat * gamma.th};
  for (Eigen::Index i = 0; i < rho.th.size(); ++i) {
    if (!(rho.th[i] > kMinThickness)) {
      throw Error(ErrorCode::NonPositiveThickness,
                  "thickness " + format_double(rho.th[i]) + " at station " + std::to_string(i));
    }
  }
  return rho;
}

ShapeParams gamma_to_rho(const BSplineCoeffs& gamma, const BSplineBasis& basis,
                         std::span<const double> x_coords) {
  return gamma_to_rho(gamma, basis_matrix(basis, x_coords));
}

Eigen::MatrixXd rho_jacobian(const Eigen::MatrixXd& basis_mat) {
  const Eigen::Index nx = basis_mat.rows();
  const Eigen::Index nb = basis_mat.cols();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * nx, 2 * nb);
  jac.topLeftCorner(nx, nb) = basis_mat;
  jac.bottomRightCorner(nx, nb) = basis_mat;
  return jac;
}

BSplineCoeffs fit_gamma(const ShapeParams& rho, const Eigen::MatrixXd& basis_mat) {
  if (rho.ml.size() != basis_mat.rows() || rho.th.size() != basis_mat.rows()) {
    throw Error(ErrorCode::InvalidArgument, "shape parameter length differs from basis rows");
  }
  const Eigen::MatrixXd normal = basis_mat.transpose() * basis_mat;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  const double scale = normal.diagonal().cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-13 * scale) {
    throw Error(ErrorCode::RankDeficient, "basis matrix lacks full column rank");
  }
  return {ldlt.solve(basis_mat.transpose() * rho.ml), ldlt.solve(basis_mat.transpose() * rho.th)};
}

}  // namespace cerashape
