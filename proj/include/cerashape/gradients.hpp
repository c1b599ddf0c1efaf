#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "cerashape/fem.hpp"
#include "cerashape/geometry.hpp"
#include "cerashape/objectives.hpp"

namespace cerashape {

/// d(objective)/d(node coordinates), one 2-vector per mesh node.
using NodeGradient = std::vector<Eigen::Vector2d>;

struct GradientPair {
  Eigen::VectorXd g1;
  Eigen::VectorXd g2;
};

/// Discrete adjoint gradient of the intensity measure with respect to all
/// node coordinates. `state` must be problem.solve_state().
NodeGradient grad_f1_nodes(const ElasticityProblem& problem, const StateSolution& state,
                           const AngularRule& rule);

/// Exact derivative of the total triangle area.
NodeGradient grad_f2_nodes(const Mesh& mesh);

/// Collapses node y-derivatives onto (meanline, thickness) per station;
/// x-derivatives are dropped. Result layout: (d/d ml, d/d th), length 2 n_x.
Eigen::VectorXd chain_to_rho(const NodeGradient& grad_x, const GridSpec& spec);

/// Maps a (ml, th) gradient to coefficient space using the basis matrix.
Eigen::VectorXd chain_rho_to_gamma(const Eigen::VectorXd& grad_rho, const Eigen::MatrixXd& basis_mat);

Eigen::VectorXd chain_to_gamma(const NodeGradient& grad_x, const GridSpec& spec,
                               const Eigen::MatrixXd& basis_mat);

using ScalarFunction = std::function<double(const Eigen::VectorXd&)>;

/// Central differences (f(x + eps e_j) - f(x - eps e_j)) / (2 eps).
Eigen::VectorXd fd_gradient(const ScalarFunction& f, const Eigen::VectorXd& x, double eps);

}  // namespace cerashape
