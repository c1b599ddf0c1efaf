#include "cerashape/objectives.hpp"

#include <cmath>
#include <numbers>

#include "cerashape/error.hpp"

namespace cerashape {

AngularRule::AngularRule(int n_phi) : n_phi_(n_phi) {
  if (n_phi < 4 || n_phi % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "angular rule needs an even n_phi >= 4");
  }
  directions_.reserve(static_cast<std::size_t>(n_phi));
  for (int k = 0; k < n_phi; ++k) {
    const double phi = 2.0 * std::numbers::pi * (k + 0.5) / n_phi;
    directions_.emplace_back(std::cos(phi), std::sin(phi));
  }
}

double sigma_n(const SymTensor2& sigma, const Eigen::Vector2d& n) {
  const double s = n.x() * n.x() * sigma.xx + 2.0 * n.x() * n.y() * sigma.xy + n.y() * n.y() * sigma.yy;
  return s > 0.0 ? s : 0.0;
}

double intensity_density(const SymTensor2& sigma, const Material& mat, const AngularRule& rule) {
  double sum = 0.0;
  for (const auto& n : rule.directions()) {
    const double s = sigma_n(sigma, n);
    if (s > 0.0) sum += std::pow(s / mat.sigma0, mat.m);
  }
  return sum / rule.size();
}

Eigen::Vector3d intensity_density_gradient(const SymTensor2& sigma, const Material& mat,
                                           const AngularRule& rule) {
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  for (const auto& n : rule.directions()) {
    const double s = sigma_n(sigma, n);
    if (s > 0.0) {
      const double w = mat.m * std::pow(s / mat.sigma0, mat.m - 1.0) / mat.sigma0;
      grad += w * Eigen::Vector3d(n.x() * n.x(), n.y() * n.y(), 2.0 * n.x() * n.y());
    }
  }
  return grad / rule.size();
}

double intensity_measure(const StateSolution& state, const Material& mat, const AngularRule& rule) {
  double f1 = 0.0;
  for (std::size_t e = 0; e < state.element_stress.size(); ++e) {
    f1 += state.element_area[e] * intensity_density(state.element_stress[e], mat, rule);
  }
  return f1;
}

double cos_power_mean(int m) {
  double w = 1.0;
  for (int k = 1; k <= m; ++k) w *= (2.0 * k - 1.0) / (2.0 * k);
  return w;
}

double analytic_rod_intensity(double s, const Material& mat, double area) {
  if (mat.m != std::round(mat.m)) {
    throw Error(ErrorCode::NonIntegerM, "closed form needs an integer Weibull module");
  }
  if (s < 0.0) throw Error(ErrorCode::InvalidArgument, "rod stress must be nonnegative");
  const int m = static_cast<int>(mat.m);
  return area * std::pow(s / mat.sigma0, m) * cos_power_mean(m);
}

double volume(const Mesh& mesh) {
  double area = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) area += mesh.element_area(e);
  return area;
}

}  // namespace cerashape
