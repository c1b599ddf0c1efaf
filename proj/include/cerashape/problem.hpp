#pragma once

#include <utility>

#include <Eigen/Core>

#include "cerashape/bspline.hpp"
#include "cerashape/fem.hpp"
#include "cerashape/geometry.hpp"
#include "cerashape/gradients.hpp"
#include "cerashape/objectives.hpp"

namespace cerashape {

/// What the Pareto drivers need from a problem: objective values and the
/// gradients used to build search directions. evaluate() throws
/// cerashape::Error for infeasible points.
class BiobjectiveProblem {
 public:
  virtual ~BiobjectiveProblem() = default;
  virtual ObjectivePair evaluate(const Eigen::VectorXd& x) const = 0;
  virtual std::pair<ObjectivePair, GradientPair> evaluate_with_gradients(const Eigen::VectorXd& x) const = 0;
};

enum class GradientMode { Adjoint, FiniteDifference };

struct ProblemSettings {
  GridSpec grid = GridSpec::equidistant(41, 7, 0.0, 1.0);
  int n_basis = 5;
  int degree = 3;
  Material material = Material::from_engineering(320e9, 0.25, 5.0, 2.4e7);
  BoundaryConditions bc;
  int n_phi = 256;
  double xi = 1e-4;
  GradientMode gradient_mode = GradientMode::Adjoint;
  double fd_eps = 1e-6;
  SolverOptions solver;
};

/// Ceramic joint shape problem over B-spline coefficients
/// gamma = (gamma_ml, gamma_th).
class ShapeProblem : public BiobjectiveProblem {
 public:
  explicit ShapeProblem(ProblemSettings settings);

  const ProblemSettings& settings() const { return settings_; }
  const GridSpec& grid() const { return settings_.grid; }
  const BSplineBasis& basis() const { return basis_; }
  const Eigen::MatrixXd& basis_matrix() const { return basis_mat_; }
  const AngularRule& angular_rule() const { return rule_; }
  int n_coefficients() const { return 2 * basis_.size(); }

  ShapeParams shape(const Eigen::VectorXd& gamma) const;
  Eigen::VectorXd fit(const ShapeParams& rho) const;

  ObjectivePair evaluate_shape(const ShapeParams& rho) const;
  ObjectivePair evaluate(const Eigen::VectorXd& gamma) const override;

  struct Analysis {
    ShapeParams rho;
    ObjectivePair f;
    GradientPair grad_rho;    // d f / d (ml, th), length 2 n_x each
    GradientPair grad_gamma;  // plain chain rule, length 2 n_B each
    GradientPair adapted;     // curvature-adapted, length 2 n_B each
  };

  /// Objectives and all gradient variants; gradients follow gradient_mode.
  Analysis analyze(const Eigen::VectorXd& gamma) const;

  /// Objectives and curvature-adapted coefficient gradients.
  std::pair<ObjectivePair, GradientPair> evaluate_with_gradients(const Eigen::VectorXd& gamma) const override;

  /// Node-level stress state of the shape given by gamma.
  std::pair<Mesh, StateSolution> solve(const Eigen::VectorXd& gamma) const;

 private:
  GradientPair rho_gradients_adjoint(const ShapeParams& rho, ObjectivePair& f) const;
  GradientPair rho_gradients_fd(const ShapeParams& rho) const;

  ProblemSettings settings_;
  BSplineBasis basis_;
  Eigen::MatrixXd basis_mat_;
  AngularRule rule_;
};

}  // namespace cerashape
