#include "cerashape/problem.hpp"

#include "cerashape/error.hpp"
#include "cerashape/metric.hpp"

namespace cerashape {

namespace {

ProblemSettings validated(ProblemSettings s) {
  s.grid.validate();
  s.material.validate();
  if (s.n_basis >= s.grid.n_x) throw Error(ErrorCode::InvalidArgument, "n_B must be smaller than n_x");
  if (s.xi < 0.0) throw Error(ErrorCode::InvalidArgument, "xi must be nonnegative");
  return s;
}

}  // namespace

ShapeProblem::ShapeProblem(ProblemSettings settings)
    : settings_(validated(std::move(settings))),
      basis_(settings_.n_basis, settings_.degree, settings_.grid.x_coords.front(),
             settings_.grid.x_coords.back()),
      basis_mat_(cerashape::basis_matrix(basis_, settings_.grid.x_coords)),
      rule_(settings_.n_phi) {}

ShapeParams ShapeProblem::shape(const Eigen::VectorXd& gamma) const {
  if (gamma.size() != n_coefficients()) {
    throw Error(ErrorCode::InvalidArgument, "coefficient vector has the wrong length");
  }
  return gamma_to_rho(BSplineCoeffs::from_stacked(gamma), basis_mat_);
}

Eigen::VectorXd ShapeProblem::fit(const ShapeParams& rho) const {
  return fit_gamma(rho, basis_mat_).stacked();
}

ObjectivePair ShapeProblem::evaluate_shape(const ShapeParams& rho) const {
  const ElasticityProblem fem(build_grid(rho, settings_.grid), settings_.material, settings_.bc,
                              settings_.solver);
  const StateSolution state = fem.solve_state();
  return {intensity_measure(state, settings_.material, rule_), volume(fem.mesh())};
}

ObjectivePair ShapeProblem::evaluate(const Eigen::VectorXd& gamma) const {
  return evaluate_shape(shape(gamma));
}

std::pair<Mesh, StateSolution> ShapeProblem::solve(const Eigen::VectorXd& gamma) const {
  ElasticityProblem fem(build_grid(shape(gamma), settings_.grid), settings_.material, settings_.bc,
                        settings_.solver);
  StateSolution state = fem.solve_state();
  return {fem.mesh(), std::move(state)};
}

GradientPair ShapeProblem::rho_gradients_adjoint(const ShapeParams& rho, ObjectivePair& f) const {
  const ElasticityProblem fem(build_grid(rho, settings_.grid), settings_.material, settings_.bc,
                              settings_.solver);
  const StateSolution state = fem.solve_state();
  f = {intensity_measure(state, settings_.material, rule_), volume(fem.mesh())};
  return {chain_to_rho(grad_f1_nodes(fem, state, rule_), settings_.grid),
          chain_to_rho(grad_f2_nodes(fem.mesh()), settings_.grid)};
}

GradientPair ShapeProblem::rho_gradients_fd(const ShapeParams& rho) const {
  const Eigen::Index nx = rho.ml.size();
  Eigen::VectorXd flat(2 * nx);
  flat << rho.ml, rho.th;
  auto unpack = [nx](const Eigen::VectorXd& v) { return ShapeParams{v.head(nx), v.tail(nx)}; };
  const ScalarFunction f1 = [&](const Eigen::VectorXd& v) { return evaluate_shape(unpack(v)).f1; };
  const ScalarFunction f2 = [&](const Eigen::VectorXd& v) { return volume(build_grid(unpack(v), settings_.grid)); };
  return {fd_gradient(f1, flat, settings_.fd_eps), fd_gradient(f2, flat, settings_.fd_eps)};
}

ShapeProblem::Analysis ShapeProblem::analyze(const Eigen::VectorXd& gamma) const {
  Analysis out;
  out.rho = shape(gamma);
  if (settings_.gradient_mode == GradientMode::Adjoint) {
    out.grad_rho = rho_gradients_adjoint(out.rho, out.f);
  } else {
    out.f = evaluate_shape(out.rho);
    out.grad_rho = rho_gradients_fd(out.rho);
  }
  const auto& x = settings_.grid.x_coords;
  out.grad_gamma = {chain_rho_to_gamma(out.grad_rho.g1, basis_mat_),
                    chain_rho_to_gamma(out.grad_rho.g2, basis_mat_)};
  out.adapted = {chain_rho_to_gamma(curvature_adapt(out.grad_rho.g1, out.rho, x, settings_.xi), basis_mat_),
                 chain_rho_to_gamma(curvature_adapt(out.grad_rho.g2, out.rho, x, settings_.xi), basis_mat_)};
  return out;
}

std::pair<ObjectivePair, GradientPair> ShapeProblem::evaluate_with_gradients(const Eigen::VectorXd& gamma) const {
  Analysis a = analyze(gamma);
  return {a.f, std::move(a.adapted)};
}

}  // namespace cerashape
