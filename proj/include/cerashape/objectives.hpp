#pragma once

#include <vector>

#include <Eigen/Core>

#include "cerashape/fem.hpp"
#include "cerashape/geometry.hpp"

namespace cerashape {

struct ObjectivePair {
  double f1 = 0.0;  // intensity measure
  double f2 = 0.0;  // volume (area per unit width)
};

/// Uniform midpoint rule on the unit circle: phi_k = 2 pi (k - 1/2) / n_phi.
class AngularRule {
 public:
  explicit AngularRule(int n_phi = 256);

  int size() const { return n_phi_; }
  const std::vector<Eigen::Vector2d>& directions() const { return directions_; }

 private:
  int n_phi_;
  std::vector<Eigen::Vector2d> directions_;
};

/// Positive part of the normal stress n^T sigma n.
double sigma_n(const SymTensor2& sigma, const Eigen::Vector2d& n);

/// Angular mean of (sigma_n / sigma0)^m for one constant stress state. The
/// 1/(2 pi) prefactor and the 2 pi / n_phi weights cancel, so this is the
/// per-unit-area contribution to the intensity measure.
double intensity_density(const SymTensor2& sigma, const Material& mat, const AngularRule& rule);

/// Derivative of intensity_density with respect to (xx, yy, xy) stress
/// components, xy counted once.
Eigen::Vector3d intensity_density_gradient(const SymTensor2& sigma, const Material& mat,
                                           const AngularRule& rule);

double intensity_measure(const StateSolution& state, const Material& mat, const AngularRule& rule);

/// (1 / 2 pi) * integral of cos^(2m) over [0, 2 pi] = (2m-1)!! / (2m)!!.
double cos_power_mean(int m);

/// Closed-form intensity of a region of the given area under uniform
/// uniaxial tension s. Requires integer m.
double analytic_rod_intensity(double s, const Material& mat, double area);

double volume(const Mesh& mesh);

}  // namespace cerashape
