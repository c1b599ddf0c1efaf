#include <doctest.h>

#include <cmath>
#include <random>

#include "cerashape/bspline.hpp"
#include "cerashape/error.hpp"
#include "cerashape/gradients.hpp"
#include "cerashape/problem.hpp"

using namespace cerashape;

namespace {

const Material kMat = Material::from_engineering(320e9, 0.25, 5.0, 2.4e7);

ShapeParams wavy(int nx) {
  ShapeParams rho{Eigen::VectorXd(nx), Eigen::VectorXd(nx)};
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / (nx - 1);
    rho.ml[i] = 0.1 * std::sin(3.0 * x) - 0.05 * x;
    rho.th[i] = 0.2 - 0.06 * std::sin(3.14159 * x);
  }
  return rho;
}

double f1_of(const Mesh& mesh, const BoundaryConditions& bc, const AngularRule& rule) {
  const ElasticityProblem p(mesh, kMat, bc);
  return intensity_measure(p.solve_state(), kMat, rule);
}

double f2_of(const Mesh& mesh) {
  double a = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) a += mesh.element_area(e);
  return a;
}

Mesh moved(const Mesh& mesh, const std::vector<Eigen::Vector2d>& v, double h) {
  Mesh out = mesh;
  for (std::size_t n = 0; n < out.nodes.size(); ++n) out.nodes[n] += h * v[n];
  return out;
}

double dot(const NodeGradient& g, const std::vector<Eigen::Vector2d>& v) {
  double s = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) s += g[n].dot(v[n]);
  return s;
}

double norm(const std::vector<Eigen::Vector2d>& v) {
  double s = 0.0;
  for (const auto& p : v) s += p.squaredNorm();
  return std::sqrt(s);
}

ShapeProblem small_problem(double xi = 1e-4) {
  ProblemSettings s;
  s.grid = GridSpec::equidistant(21, 5, 0.0, 1.0);
  s.n_basis = 5;
  s.xi = xi;
  return ShapeProblem(s);
}

}  // namespace

TEST_CASE("zero load has zero intensity gradient") {
  const GridSpec spec = GridSpec::equidistant(11, 4, 0.0, 1.0);
  const Mesh mesh = build_grid(wavy(11), spec);
  BoundaryConditions bc;
  bc.traction.setZero();
  const ElasticityProblem p(mesh, kMat, bc);
  const NodeGradient g = grad_f1_nodes(p, p.solve_state(), AngularRule(64));
  for (const auto& v : g) CHECK(v.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("node gradient of f1 against directional finite differences") {
  const GridSpec spec = GridSpec::equidistant(13, 5, 0.0, 1.0);
  const Mesh mesh = build_grid(wavy(13), spec);
  BoundaryConditions bc;
  bc.body_force = {2e6, -1e6};
  const AngularRule rule(128);
  const ElasticityProblem p(mesh, kMat, bc);
  const NodeGradient g = grad_f1_nodes(p, p.solve_state(), rule);

  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Eigen::Vector2d> v(mesh.nodes.size());
    for (auto& d : v) d = {nd(rng), nd(rng)};
    const double h = 1e-6;
    const double fd = (f1_of(moved(mesh, v, h), bc, rule) - f1_of(moved(mesh, v, -h), bc, rule)) / (2 * h);
    const double adj = dot(g, v);
    double gn = 0.0;
    for (const auto& gi : g) gn += gi.squaredNorm();
    CHECK(std::abs(adj - fd) <= 1e-5 * std::max(std::abs(fd), std::sqrt(gn) * norm(v) * 1e-2));
  }
}

TEST_CASE("node gradient of the area") {
  GridSpec sq;
  sq.n_x = 2;
  sq.n_y = 2;
  sq.x_coords = {0.0, 1.0};
  const Mesh square = build_grid({Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(1.0, 1.0)}, sq);
  const NodeGradient gs = grad_f2_nodes(square);
  // moving the top-right corner outward grows the area at rate 1/2 per axis
  const int tr = square.node_index(1, 1);
  CHECK(gs[static_cast<std::size_t>(tr)].x() == doctest::Approx(0.5));
  CHECK(gs[static_cast<std::size_t>(tr)].y() == doctest::Approx(0.5));

  const GridSpec spec = GridSpec::equidistant(9, 4, 0.0, 1.0);
  const Mesh mesh = build_grid(wavy(9), spec);
  const NodeGradient g = grad_f2_nodes(mesh);
  Eigen::Vector2d total = Eigen::Vector2d::Zero();
  for (const auto& v : g) total += v;
  CHECK(total.norm() <= 1e-14);

  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Eigen::Vector2d> v(mesh.nodes.size());
    for (auto& d : v) d = {nd(rng), nd(rng)};
    const double h = 1e-5;
    const double fd = (f2_of(moved(mesh, v, h)) - f2_of(moved(mesh, v, -h))) / (2 * h);
    CHECK(std::abs(dot(g, v) - fd) <= 1e-9);
  }
}

TEST_CASE("chain to meanline and thickness") {
  const GridSpec spec = GridSpec::equidistant(6, 4, 0.0, 1.0);
  NodeGradient only_x(24, Eigen::Vector2d(1.0, 0.0));
  CHECK(chain_to_rho(only_x, spec).cwiseAbs().maxCoeff() == 0.0);

  // independent: y_ij = ml_i + th_i (j / (n_y - 1) - 1/2)
  NodeGradient unit_y(24, Eigen::Vector2d(0.0, 1.0));
  const Eigen::VectorXd r = chain_to_rho(unit_y, spec);
  for (int i = 0; i < 6; ++i) {
    CHECK(r[i] == doctest::Approx(4.0));
    CHECK(std::abs(r[6 + i]) <= 1e-15);
  }

  // the area of a straight rod does not depend on the meanline
  const ShapeParams rod{Eigen::VectorXd::Zero(6), Eigen::VectorXd::Constant(6, 0.2)};
  const Eigen::VectorXd g2 = chain_to_rho(grad_f2_nodes(build_grid(rod, spec)), spec);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(g2[i]) <= 1e-15);
  // trapezoid rule weights on the thickness
  CHECK(g2[6] == doctest::Approx(0.1));
  CHECK(g2[8] == doctest::Approx(0.2));
}

TEST_CASE("coefficient gradients against central differences on the presets") {
  for (const double offset : {0.0, -0.27}) {
    const ShapeProblem problem = small_problem();
    const auto& x = problem.grid().x_coords;
    ShapeParams rho{Eigen::VectorXd(21), Eigen::VectorXd::Constant(21, 0.2)};
    for (int i = 0; i < 21; ++i) {
      const double s = x[static_cast<std::size_t>(i)];
      rho.ml[i] = offset == 0.0 ? 0.15 * std::sin(3.14159265358979 * s) : offset * s * s * (3 - 2 * s);
    }
    const Eigen::VectorXd gamma = problem.fit(rho);
    const auto a = problem.analyze(gamma);
    const ScalarFunction f1 = [&](const Eigen::VectorXd& y) { return problem.evaluate(y).f1; };
    const ScalarFunction f2 = [&](const Eigen::VectorXd& y) { return problem.evaluate(y).f2; };
    const Eigen::VectorXd fd1 = fd_gradient(f1, gamma, 1e-6);
    const Eigen::VectorXd fd2 = fd_gradient(f2, gamma, 1e-6);
    CHECK((a.grad_gamma.g1 - fd1).cwiseAbs().maxCoeff() <= 1e-5 * fd1.cwiseAbs().maxCoeff());
    CHECK((a.grad_gamma.g2 - fd2).cwiseAbs().maxCoeff() <= 1e-5 * fd2.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("random coefficient vectors near the start") {
  const ShapeProblem problem = small_problem();
  ShapeParams rho{Eigen::VectorXd::Zero(21), Eigen::VectorXd::Constant(21, 0.2)};
  const Eigen::VectorXd base = problem.fit(rho);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.03, 0.03);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd gamma = base;
    for (auto& v : gamma) v += u(rng);
    const auto a = problem.analyze(gamma);
    const ScalarFunction f1 = [&](const Eigen::VectorXd& y) { return problem.evaluate(y).f1; };
    const Eigen::VectorXd fd1 = fd_gradient(f1, gamma, 1e-6);
    CHECK((a.grad_gamma.g1 - fd1).cwiseAbs().maxCoeff() <= 1e-5 * fd1.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("Taylor remainder is second order") {
  const ShapeProblem problem = small_problem();
  const Eigen::VectorXd gamma = problem.fit(wavy(21));
  const auto a = problem.analyze(gamma);
  Eigen::VectorXd v(gamma.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::cos(1.7 * static_cast<double>(i));
  const double f0 = a.f.f1;
  const double slope = a.grad_gamma.g1.dot(v);
  const double h1 = 2e-3, h2 = 1e-3;
  const double r1 = std::abs(problem.evaluate(gamma + h1 * v).f1 - f0 - h1 * slope);
  const double r2 = std::abs(problem.evaluate(gamma + h2 * v).f1 - f0 - h2 * slope);
  CHECK(std::log2(r1 / r2) >= 1.9);
}

TEST_CASE("central differences") {
  const ScalarFunction lin = [](const Eigen::VectorXd& x) { return 3.0 * x[0] - 2.0 * x[1]; };
  const Eigen::VectorXd g = fd_gradient(lin, Eigen::Vector2d(0.3, -1.0), 1e-3);
  CHECK(g[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(-2.0).epsilon(1e-12));

  // central differences are exact on quadratics up to rounding
  const ScalarFunction quad = [](const Eigen::VectorXd& x) { return x[0] * x[0] + 4.0 * x[0] * x[1]; };
  const Eigen::VectorXd q = fd_gradient(quad, Eigen::Vector2d(1.0, 2.0), 1e-2);
  CHECK(q[0] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(q[1] == doctest::Approx(4.0).epsilon(1e-12));

  const ScalarFunction cube = [](const Eigen::VectorXd& x) { return x[0] * x[0] * x[0]; };
  const double e1 = std::abs(fd_gradient(cube, Eigen::VectorXd::Ones(1), 1e-2)[0] - 3.0);
  const double e2 = std::abs(fd_gradient(cube, Eigen::VectorXd::Ones(1), 1e-3)[0] - 3.0);
  CHECK(e1 == doctest::Approx(1e-4).epsilon(1e-6));
  CHECK(e2 < e1 / 50.0);
}
