#pragma once

#include <span>

#include <Eigen/Core>

#include "cerashape/geometry.hpp"

namespace cerashape {

struct CurvatureField {
  Eigen::VectorXd kappa_upper;
  Eigen::VectorXd kappa_lower;
  double xi = 0.0;
};

/// Normal-jump curvature estimate at every vertex of an open polyline.
/// Interior vertex i uses its two adjacent facets; the end vertices copy
/// their neighbour's value.
Eigen::VectorXd discrete_curvature(std::span<const double> x, std::span<const double> y);

CurvatureField boundary_curvature(const ShapeParams& rho, std::span<const double> x_coords, double xi);

/// Applies M^{-1} D_xi M to a (d/d ml, d/d th) gradient of length 2 n_x,
/// where D_xi scales the upper/lower boundary entries by 1 / (1 + xi kappa^2).
/// xi = 0 returns the input unchanged.
Eigen::VectorXd curvature_adapt(const Eigen::VectorXd& grad_rho, const ShapeParams& rho,
                                std::span<const double> x_coords, double xi);

}  // namespace cerashape
