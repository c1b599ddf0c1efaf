#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "cerashape/geometry.hpp"

namespace cerashape {

/// Elastic and Weibull parameters. Construct via from_engineering so the
/// Lame constants stay consistent with E and nu.
struct Material {
  double E = 320e9;
  double nu = 0.25;
  double lambda = 0.0;
  double mu = 0.0;
  double m = 5.0;          // Weibull module
  double sigma0 = 2.4e7;   // Weibull scale stress [Pa]
  double uts = 140e6;      // ultimate tensile strength, informational [Pa]

  static Material from_engineering(double E, double nu, double m, double sigma0,
                                   double uts = 140e6);
  void validate() const;
};

struct BoundaryConditions {
  Eigen::Vector2d body_force{0.0, 0.0};  // [N/m^3]
  Eigen::Vector2d traction{1e7, 0.0};    // [Pa], on the right column

  BoundaryConditions scaled(double factor) const { return {factor * body_force, factor * traction}; }
};

/// Symmetric 2x2 tensor stored once per off-diagonal.
struct SymTensor2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  Eigen::Matrix2d matrix() const {
    Eigen::Matrix2d s;
    s << xx, xy, xy, yy;
    return s;
  }
};

struct StateSolution {
  Eigen::VectorXd u;  // (u_x, u_y) per node
  std::vector<SymTensor2> element_stress;
  std::vector<double> element_area;
};

struct LinearSystem {
  Eigen::SparseMatrix<double> K;  // full, before Dirichlet elimination
  Eigen::VectorXd b;
};

struct SolverOptions {
  double residual_tol = 1e-10;
};

LinearSystem assemble(const Mesh& mesh, const Material& mat, const BoundaryConditions& bc);

/// Constant P1 stress of element e for the nodal displacement vector u.
SymTensor2 element_stress(const Mesh& mesh, const Material& mat, const Eigen::VectorXd& u, int e);

/// Assembled and factorized state equation on one mesh. The factorization
/// is kept so adjoint right-hand sides can be solved with the same operator.
class ElasticityProblem {
 public:
  ElasticityProblem(Mesh mesh, Material mat, BoundaryConditions bc, SolverOptions opts = {});
  ~ElasticityProblem();
  ElasticityProblem(ElasticityProblem&&) noexcept;
  ElasticityProblem& operator=(ElasticityProblem&&) noexcept;

  const Mesh& mesh() const { return mesh_; }
  const Material& material() const { return mat_; }
  const BoundaryConditions& boundary_conditions() const { return bc_; }
  const LinearSystem& system() const { return system_; }

  /// Solves K x = rhs with x = 0 on Dirichlet DOFs. Rows of rhs belonging
  /// to Dirichlet DOFs are ignored.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  StateSolution solve_state() const;

 private:
  struct Factorization;

  Mesh mesh_;
  Material mat_;
  BoundaryConditions bc_;
  SolverOptions opts_;
  LinearSystem system_;
  std::vector<int> free_dofs_;
  std::unique_ptr<Factorization> factor_;
};

StateSolution solve_state(const Mesh& mesh, const Material& mat, const BoundaryConditions& bc,
                          SolverOptions opts = {});

}  // namespace cerashape
