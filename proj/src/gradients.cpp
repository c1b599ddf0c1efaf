#include "cerashape/gradients.hpp"

#include "cerashape/error.hpp"
#include "dual.hpp"
#include "p1_element.hpp"

namespace cerashape {

namespace {

using Dual6 = detail::Dual<6>;
using Dual4 = detail::Dual<4>;

std::array<double, 6> gather(const Eigen::VectorXd& v, const Triangle& t) {
  std::array<double, 6> out{};
  for (int a = 0; a < 3; ++a) {
    out[2 * a] = v[2 * t[a]];
    out[2 * a + 1] = v[2 * t[a] + 1];
  }
  return out;
}

std::array<Dual6, 6> seeded_coords(const Mesh& mesh, const Triangle& t) {
  std::array<Dual6, 6> c;
  for (int a = 0; a < 3; ++a) {
    c[2 * a] = Dual6::variable(mesh.nodes[t[a]].x(), 2 * a);
    c[2 * a + 1] = Dual6::variable(mesh.nodes[t[a]].y(), 2 * a + 1);
  }
  return c;
}

}  // namespace

NodeGradient grad_f1_nodes(const ElasticityProblem& problem, const StateSolution& state,
                           const AngularRule& rule) {
  const Mesh& mesh = problem.mesh();
  const Material& mat = problem.material();
  const BoundaryConditions& bc = problem.boundary_conditions();
  const auto n_el = static_cast<int>(mesh.elements.size());

  // dJ/du and the element-wise stress sensitivities of the density
  std::vector<Eigen::Vector3d> dh_dsigma(static_cast<std::size_t>(n_el));
  Eigen::VectorXd dj_du = Eigen::VectorXd::Zero(state.u.size());
  for (int e = 0; e < n_el; ++e) {
    const auto& t = mesh.elements[e];
    dh_dsigma[e] = intensity_density_gradient(state.element_stress[e], mat, rule);
    std::array<double, 6> coords{};
    for (int a = 0; a < 3; ++a) {
      coords[2 * a] = mesh.nodes[t[a]].x();
      coords[2 * a + 1] = mesh.nodes[t[a]].y();
    }
    const auto geo = detail::p1_geometry(coords);
    for (int c = 0; c < 6; ++c) {
      std::array<double, 6> unit{};
      unit[c] = 1.0;
      const auto s = detail::hooke(detail::p1_strain(geo, unit), mat.lambda, mat.mu);
      dj_du[2 * t[c / 2] + c % 2] +=
          geo.area * (dh_dsigma[e][0] * s[0] + dh_dsigma[e][1] * s[1] + dh_dsigma[e][2] * s[2]);
    }
  }

  const Eigen::VectorXd psi = problem.solve(dj_du);

  NodeGradient grad(mesh.nodes.size(), Eigen::Vector2d::Zero());
  for (int e = 0; e < n_el; ++e) {
    const auto& t = mesh.elements[e];
    const auto geo = detail::p1_geometry(seeded_coords(mesh, t));
    const auto u_e = gather(state.u, t);
    const auto psi_e = gather(psi, t);
    const auto sigma_u = detail::hooke(detail::p1_strain(geo, u_e), mat.lambda, mat.mu);
    const auto eps_psi = detail::p1_strain(geo, psi_e);

    const double area = geo.area.v;
    const double density = intensity_density(state.element_stress[e], mat, rule);
    const Eigen::Vector3d& g = dh_dsigma[e];

    // psi^T (b_e - K_e u_e) with K_e u_e expressed through stresses
    Dual6 body(0.0);
    for (int a = 0; a < 3; ++a) {
      body += Dual6(psi_e[2 * a] * bc.body_force.x() + psi_e[2 * a + 1] * bc.body_force.y());
    }
    const Dual6 residual =
        geo.area * (body / Dual6(3.0) -
                    (eps_psi[0] * sigma_u[0] + eps_psi[1] * sigma_u[1] + eps_psi[2] * sigma_u[2]));

    for (int k = 0; k < 6; ++k) {
      const double dj_dx = density * geo.area.d[k] +
                           area * (g[0] * sigma_u[0].d[k] + g[1] * sigma_u[1].d[k] + g[2] * sigma_u[2].d[k]);
      grad[t[k / 2]][k % 2] += dj_dx + residual.d[k];
    }
  }

  for (const auto& edge : mesh.neumann_fixed_edges) {
    const auto& p0 = mesh.nodes[edge[0]];
    const auto& p1 = mesh.nodes[edge[1]];
    const Dual4 dx = Dual4::variable(p1.x(), 2) - Dual4::variable(p0.x(), 0);
    const Dual4 dy = Dual4::variable(p1.y(), 3) - Dual4::variable(p0.y(), 1);
    const Dual4 len = detail::sqrt(dx * dx + dy * dy);
    double load = 0.0;
    for (int node : edge) load += psi[2 * node] * bc.traction.x() + psi[2 * node + 1] * bc.traction.y();
    for (int k = 0; k < 4; ++k) grad[edge[k / 2]][k % 2] += 0.5 * load * len.d[k];
  }
  return grad;
}

NodeGradient grad_f2_nodes(const Mesh& mesh) {
  NodeGradient grad(mesh.nodes.size(), Eigen::Vector2d::Zero());
  for (const auto& t : mesh.elements) {
    for (int a = 0; a < 3; ++a) {
      const auto& pb = mesh.nodes[t[(a + 1) % 3]];
      const auto& pc = mesh.nodes[t[(a + 2) % 3]];
      grad[t[a]] += 0.5 * Eigen::Vector2d(pb.y() - pc.y(), pc.x() - pb.x());
    }
  }
  return grad;
}

Eigen::VectorXd chain_to_rho(const NodeGradient& grad_x, const GridSpec& spec) {
  const int nx = spec.n_x;
  const int ny = spec.n_y;
  if (static_cast<int>(grad_x.size()) != nx * ny) {
    throw Error(ErrorCode::InvalidArgument, "node gradient size differs from grid");
  }
  Eigen::VectorXd grad_rho = Eigen::VectorXd::Zero(2 * nx);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double dy = grad_x[static_cast<std::size_t>(i * ny + j)].y();
      const double weight = (j - 0.5 * (ny - 1)) / (ny - 1);
      grad_rho[i] += dy;
      grad_rho[nx + i] += dy * weight;
    }
  }
  return grad_rho;
}

Eigen::VectorXd chain_rho_to_gamma(const Eigen::VectorXd& grad_rho, const Eigen::MatrixXd& basis_mat) {
  const Eigen::Index nx = basis_mat.rows();
  const Eigen::Index nb = basis_mat.cols();
  if (grad_rho.size() != 2 * nx) {
    throw Error(ErrorCode::InvalidArgument, "rho gradient length differs from 2 n_x");
  }
  Eigen::VectorXd grad_gamma(2 * nb);
  grad_gamma.head(nb) = basis_mat.transpose() * grad_rho.head(nx);
  grad_gamma.tail(nb) = basis_mat.transpose() * grad_rho.tail(nx);
  return grad_gamma;
}

Eigen::VectorXd chain_to_gamma(const NodeGradient& grad_x, const GridSpec& spec,
                               const Eigen::MatrixXd& basis_mat) {
  return chain_rho_to_gamma(chain_to_rho(grad_x, spec), basis_mat);
}

Eigen::VectorXd fd_gradient(const ScalarFunction& f, const Eigen::VectorXd& x, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference increment must be positive");
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + eps;
    const double f_plus = f(probe);
    probe[j] = x[j] - eps;
    const double f_minus = f(probe);
    probe[j] = x[j];
    grad[j] = (f_plus - f_minus) / (2.0 * eps);
  }
  return grad;
}

}  // namespace cerashape
