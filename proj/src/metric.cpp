#include "cerashape/metric.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cerashape/error.hpp"

namespace cerashape {

Eigen::VectorXd discrete_curvature(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  if (y.size() != x.size()) throw Error(ErrorCode::InvalidArgument, "polyline coordinate lengths differ");
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "curvature needs at least three points");

  std::vector<Eigen::Vector2d> normals;
  std::vector<double> lengths;
  normals.reserve(static_cast<std::size_t>(n - 1));
  lengths.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Eigen::Vector2d facet(x[k + 1] - x[k], y[k + 1] - y[k]);
    const double len = facet.norm();
    if (len < 1e-14) throw Error(ErrorCode::DegenerateFacet, "facet " + std::to_string(k) + " has zero length");
    lengths.push_back(len);
    normals.emplace_back(-facet.y() / len, facet.x() / len);
  }

  Eigen::VectorXd kappa(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    kappa[i] = 2.0 * (normals[i - 1] - normals[i]).norm() / (lengths[i - 1] + lengths[i]);
  }
  kappa[0] = kappa[1];
  kappa[n - 1] = kappa[n - 2];
  return kappa;
}

CurvatureField boundary_curvature(const ShapeParams& rho, std::span<const double> x_coords, double xi) {
  const auto [upper, lower] = ml_th_to_ul(rho);
  return {discrete_curvature(x_coords, {upper.data(), static_cast<std::size_t>(upper.size())}),
          discrete_curvature(x_coords, {lower.data(), static_cast<std::size_t>(lower.size())}), xi};
}

Eigen::VectorXd curvature_adapt(const Eigen::VectorXd& grad_rho, const ShapeParams& rho,
                                std::span<const double> x_coords, double xi) {
  if (xi < 0.0) throw Error(ErrorCode::InvalidArgument, "xi must be nonnegative");
  if (xi == 0.0) return grad_rho;

  const auto nx = static_cast<Eigen::Index>(x_coords.size());
  if (grad_rho.size() != 2 * nx) throw Error(ErrorCode::InvalidArgument, "rho gradient length differs from 2 n_x");

  const CurvatureField field = boundary_curvature(rho, x_coords, xi);
  Eigen::VectorXd adapted = grad_rho;
  for (Eigen::Index i = 0; i < nx; ++i) {
    const double du = 1.0 / (1.0 + xi * field.kappa_upper[i] * field.kappa_upper[i]);
    const double dl = 1.0 / (1.0 + xi * field.kappa_lower[i] * field.kappa_lower[i]);
    if (du == 1.0 && dl == 1.0) continue;
    const double g_ml = grad_rho[i];
    const double g_th = grad_rho[nx + i];
    const double up = du * (g_ml + 0.5 * g_th);
    const double lo = dl * (g_ml - 0.5 * g_th);
    adapted[i] = 0.5 * (up + lo);
    adapted[nx + i] = up - lo;
  }
  return adapted;
}

}  // namespace cerashape
