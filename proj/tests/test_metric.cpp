#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/LU>

#include "cerashape/error.hpp"
#include "cerashape/metric.hpp"

using namespace cerashape;

namespace {

std::vector<double> linspace(int n, double a, double b) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return x;
}

Eigen::VectorXd random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (auto& c : v) c = nd(rng);
  return v;
}

ShapeParams bent(int nx) {
  ShapeParams rho{Eigen::VectorXd(nx), Eigen::VectorXd(nx)};
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / (nx - 1);
    rho.ml[i] = 0.3 * std::sin(5.0 * x);
    rho.th[i] = 0.2 + 0.1 * std::cos(7.0 * x);
  }
  return rho;
}

}  // namespace

TEST_CASE("curvature of simple polylines") {
  const auto x = linspace(10, 0.0, 1.0);
  std::vector<double> y(10);
  for (std::size_t i = 0; i < 10; ++i) y[i] = 0.3 - 0.5 * x[i];
  CHECK(discrete_curvature(x, y).cwiseAbs().maxCoeff() <= 1e-12);

  std::vector<double> cx(100), cy(100);
  for (int k = 0; k < 100; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 100.0;
    cx[static_cast<std::size_t>(k)] = 0.5 * std::cos(t);
    cy[static_cast<std::size_t>(k)] = 0.5 * std::sin(t);
  }
  const Eigen::VectorXd kc = discrete_curvature(cx, cy);
  for (Eigen::Index k = 0; k < kc.size(); ++k) CHECK(std::abs(kc[k] - 2.0) <= 0.02);

  // right angle with unit legs: |n1 - n2| = sqrt 2, mean length 1
  const std::vector<double> ax{0.0, 1.0, 1.0}, ay{0.0, 0.0, 1.0};
  CHECK(discrete_curvature(ax, ay)[1] == doctest::Approx(std::sqrt(2.0)));

  const std::vector<double> dx{0.0, 0.5, 0.5, 1.0}, dy{0.0, 0.0, 0.0, 0.0};
  try {
    discrete_curvature(dx, dy);
    FAIL("expected DegenerateFacet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateFacet);
  }
  CHECK_THROWS_AS(discrete_curvature(std::vector<double>{0, 1}, std::vector<double>{0, 1}), Error);
}

TEST_CASE("zero weight and straight rods leave gradients alone") {
  const auto x = linspace(15, 0.0, 1.0);
  const Eigen::VectorXd g = random_vector(30, 1);
  const Eigen::VectorXd same = curvature_adapt(g, bent(15), x, 0.0);
  for (Eigen::Index i = 0; i < g.size(); ++i) CHECK(same[i] == g[i]);

  const ShapeParams rod{Eigen::VectorXd::Constant(15, 0.1), Eigen::VectorXd::Constant(15, 0.2)};
  for (double xi : {1e-4, 1.0, 1e3}) {
    const Eigen::VectorXd r = curvature_adapt(g, rod, x, xi);
    CHECK((r - g).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(curvature_adapt(g, rod, x, -1.0), Error);
}

TEST_CASE("hand conjugation on a three-station toy") {
  const std::vector<double> x{0.0, 0.5, 1.0};
  const ShapeParams rho{Eigen::Vector3d(0.0, 0.25, 0.0), Eigen::Vector3d(0.2, 0.2, 0.2)};
  const double xi = 0.5;
  const Eigen::VectorXd g = (Eigen::VectorXd(6) << 1.0, -2.0, 0.5, 0.3, 0.7, -1.1).finished();

  // M maps (ml, th) to (upper, lower) per station
  Eigen::Matrix2d M;
  M << 1.0, 0.5, 1.0, -0.5;
  const auto [up, lo] = ml_th_to_ul(rho);
  const Eigen::VectorXd ku = discrete_curvature(x, {up.data(), 3});
  const Eigen::VectorXd kl = discrete_curvature(x, {lo.data(), 3});
  const Eigen::VectorXd r = curvature_adapt(g, rho, x, xi);
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d D(1.0 / (1.0 + xi * ku[i] * ku[i]), 1.0 / (1.0 + xi * kl[i] * kl[i]));
    const Eigen::Vector2d gi(g[i], g[3 + i]);
    const Eigen::Vector2d expect = M.inverse() * D.asDiagonal() * M * gi;
    CHECK(r[i] == doctest::Approx(expect[0]).epsilon(1e-14));
    CHECK(r[3 + i] == doctest::Approx(expect[1]).epsilon(1e-14));
  }
  CHECK(ku[1] > 0.0);
}

TEST_CASE("adaptation is linear and keeps descent") {
  const auto x = linspace(21, 0.0, 1.0);
  const ShapeParams rho = bent(21);
  const Eigen::VectorXd a = random_vector(42, 2);
  const Eigen::VectorXd b = random_vector(42, 3);
  const double xi = 0.05;
  const Eigen::VectorXd lhs = curvature_adapt(2.0 * a - 3.0 * b, rho, x, xi);
  const Eigen::VectorXd rhs = 2.0 * curvature_adapt(a, rho, x, xi) - 3.0 * curvature_adapt(b, rho, x, xi);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-13);

  // in boundary coordinates the map is a positive diagonal scaling, so the
  // negated adapted gradient stays a descent direction there
  for (unsigned seed = 10; seed < 30; ++seed) {
    const Eigen::VectorXd g = random_vector(42, seed);
    const Eigen::VectorXd r = curvature_adapt(g, rho, x, xi);
    double inner = 0.0;
    for (int i = 0; i < 21; ++i) {
      const double gu = g[i] + 0.5 * g[21 + i], gl = g[i] - 0.5 * g[21 + i];
      const double ru = r[i] + 0.5 * r[21 + i], rl = r[i] - 0.5 * r[21 + i];
      inner += gu * ru + gl * rl;
    }
    CHECK(inner > 0.0);
  }
}
