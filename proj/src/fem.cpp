#include "cerashape/fem.hpp"

#include <cmath>
#include <string>

#include <Eigen/SparseCholesky>

#include "cerashape/error.hpp"
#include "format.hpp"
#include "p1_element.hpp"

namespace cerashape {

Material Material::from_engineering(double E, double nu, double m, double sigma0, double uts) {
  Material mat;
  mat.E = E;
  mat.nu = nu;
  mat.lambda = nu * E / ((1.0 + nu) * (1.0 - 2.0 * nu));
  mat.mu = E / (2.0 * (1.0 + nu));
  mat.m = m;
  mat.sigma0 = sigma0;
  mat.uts = uts;
  mat.validate();
  return mat;
}

void Material::validate() const {
  if (!(E > 0.0)) throw Error(ErrorCode::InvalidArgument, "Young's modulus must be positive");
  if (!(nu > 0.0 && nu < 0.5)) throw Error(ErrorCode::InvalidArgument, "Poisson ratio must lie in (0, 0.5)");
  if (!(m >= 1.0)) throw Error(ErrorCode::InvalidArgument, "Weibull module must be >= 1");
  if (!(sigma0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma0 must be positive");
}

namespace {

std::array<double, 6> element_coords(const Mesh& mesh, const Triangle& t) {
  return {mesh.nodes[t[0]].x(), mesh.nodes[t[0]].y(), mesh.nodes[t[1]].x(),
          mesh.nodes[t[1]].y(), mesh.nodes[t[2]].x(), mesh.nodes[t[2]].y()};
}

std::array<double, 6> element_dofs(const Eigen::VectorXd& u, const Triangle& t) {
  std::array<double, 6> ue{};
  for (int a = 0; a < 3; ++a) {
    ue[2 * a] = u[2 * t[a]];
    ue[2 * a + 1] = u[2 * t[a] + 1];
  }
  return ue;
}

}  // namespace

LinearSystem assemble(const Mesh& mesh, const Material& mat, const BoundaryConditions& bc) {
  const int n_dof = 2 * static_cast<int>(mesh.nodes.size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.elements.size() * 36);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n_dof);

  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    const auto& t = mesh.elements[e];
    const auto geo = detail::p1_geometry(element_coords(mesh, t));
    if (!(geo.area > 0.0)) {
      throw Error(ErrorCode::DegenerateElement, "element " + std::to_string(e) + " has nonpositive area");
    }
    // columns of B: strain caused by a unit displacement of local DOF c
    std::array<detail::Voigt<double>, 6> strain_cols{};
    std::array<detail::Voigt<double>, 6> stress_cols{};
    for (int c = 0; c < 6; ++c) {
      std::array<double, 6> unit{};
      unit[c] = 1.0;
      strain_cols[c] = detail::p1_strain(geo, unit);
      stress_cols[c] = detail::hooke(strain_cols[c], mat.lambda, mat.mu);
    }
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) {
        const double k = geo.area * (strain_cols[r][0] * stress_cols[c][0] +
                                     strain_cols[r][1] * stress_cols[c][1] +
                                     strain_cols[r][2] * stress_cols[c][2]);
        triplets.emplace_back(2 * t[r / 2] + r % 2, 2 * t[c / 2] + c % 2, k);
      }
    }
    for (int a = 0; a < 3; ++a) {
      b[2 * t[a]] += geo.area / 3.0 * bc.body_force.x();
      b[2 * t[a] + 1] += geo.area / 3.0 * bc.body_force.y();
    }
  }

  for (const auto& edge : mesh.neumann_fixed_edges) {
    const double len = (mesh.nodes[edge[1]] - mesh.nodes[edge[0]]).norm();
    for (int node : edge) {
      b[2 * node] += 0.5 * len * bc.traction.x();
      b[2 * node + 1] += 0.5 * len * bc.traction.y();
    }
  }

  LinearSystem sys;
  sys.K.resize(n_dof, n_dof);
  sys.K.setFromTriplets(triplets.begin(), triplets.end());
  sys.b = std::move(b);
  return sys;
}

SymTensor2 element_stress(const Mesh& mesh, const Material& mat, const Eigen::VectorXd& u, int e) {
  const auto& t = mesh.elements[static_cast<std::size_t>(e)];
  const auto geo = detail::p1_geometry(element_coords(mesh, t));
  const auto sigma = detail::hooke(detail::p1_strain(geo, element_dofs(u, t)), mat.lambda, mat.mu);
  return {sigma[0], sigma[2], sigma[1]};
}

struct ElasticityProblem::Factorization {
  Eigen::SparseMatrix<double> K_ff;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

ElasticityProblem::ElasticityProblem(Mesh mesh, Material mat, BoundaryConditions bc, SolverOptions opts)
    : mesh_(std::move(mesh)), mat_(mat), bc_(std::move(bc)), opts_(opts) {
  system_ = assemble(mesh_, mat_, bc_);

  const int n_dof = static_cast<int>(system_.b.size());
  std::vector<bool> fixed(static_cast<std::size_t>(n_dof), false);
  for (int node : mesh_.dirichlet_nodes) {
    fixed[2 * node] = true;
    fixed[2 * node + 1] = true;
  }
  std::vector<int> reduced_index(static_cast<std::size_t>(n_dof), -1);
  for (int i = 0; i < n_dof; ++i) {
    if (!fixed[i]) {
      reduced_index[i] = static_cast<int>(free_dofs_.size());
      free_dofs_.push_back(i);
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(system_.K.nonZeros()));
  for (int col = 0; col < system_.K.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system_.K, col); it; ++it) {
      const int r = reduced_index[it.row()];
      const int c = reduced_index[it.col()];
      if (r >= 0 && c >= 0) triplets.emplace_back(r, c, it.value());
    }
  }
  factor_ = std::make_unique<Factorization>();
  const auto n_free = static_cast<Eigen::Index>(free_dofs_.size());
  factor_->K_ff.resize(n_free, n_free);
  factor_->K_ff.setFromTriplets(triplets.begin(), triplets.end());
  factor_->ldlt.compute(factor_->K_ff);
  if (factor_->ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::SolveFailure, "sparse LDLT factorization failed");
  }
}

ElasticityProblem::~ElasticityProblem() = default;
ElasticityProblem::ElasticityProblem(ElasticityProblem&&) noexcept = default;
ElasticityProblem& ElasticityProblem::operator=(ElasticityProblem&&) noexcept = default;

Eigen::VectorXd ElasticityProblem::solve(const Eigen::VectorXd& rhs) const {
  const auto n_free = static_cast<Eigen::Index>(free_dofs_.size());
  Eigen::VectorXd rhs_f(n_free);
  for (Eigen::Index i = 0; i < n_free; ++i) rhs_f[i] = rhs[free_dofs_[i]];

  Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
  const double rhs_norm = rhs_f.norm();
  if (rhs_norm == 0.0) return x;

  const Eigen::VectorXd x_f = factor_->ldlt.solve(rhs_f);
  if (factor_->ldlt.info() != Eigen::Success || !x_f.allFinite()) {
    throw Error(ErrorCode::SolveFailure, "sparse LDLT solve failed");
  }
  const double residual = (factor_->K_ff * x_f - rhs_f).norm() / rhs_norm;
  if (!(residual <= opts_.residual_tol)) {
    throw Error(ErrorCode::SolveFailure, "relative residual " + format_double(residual) +
                                             " exceeds " + format_double(opts_.residual_tol));
  }
  for (Eigen::Index i = 0; i < n_free; ++i) x[free_dofs_[i]] = x_f[i];
  return x;
}

StateSolution ElasticityProblem::solve_state() const {
  StateSolution state;
  state.u = solve(system_.b);
  const auto n_el = mesh_.elements.size();
  state.element_stress.reserve(n_el);
  state.element_area.reserve(n_el);
  for (int e = 0; e < static_cast<int>(n_el); ++e) {
    state.element_stress.push_back(element_stress(mesh_, mat_, state.u, e));
    state.element_area.push_back(mesh_.element_area(e));
  }
  return state;
}

StateSolution solve_state(const Mesh& mesh, const Material& mat, const BoundaryConditions& bc,
                          SolverOptions opts) {
  return ElasticityProblem(mesh, mat, bc, opts).solve_state();
}

}  // namespace cerashape
