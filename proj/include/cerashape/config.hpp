#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "cerashape/problem.hpp"

namespace cerashape {

enum class SweepMode { WeightedSum, Descent, Both };

/// Flat run configuration. The text form is one `key = value` per line,
/// `#` starts a comment, lists are comma separated.
struct RunConfig {
  std::string preset = "straight_joint";
  int n_x = 41;
  int n_y = 7;
  int n_B = 5;
  double E = 320e9;
  double nu = 0.25;
  double m = 5.0;
  double sigma0 = 2.4e7;
  std::array<double, 2> gtilde{1e7, 0.0};
  double xi = 1e-4;
  double beta = 1e-4;
  double eps = 1e-4;
  int max_iter = 150;
  int max_armijo = 30;
  double delta_factor = 0.8;
  int n_phi = 256;
  SweepMode mode = SweepMode::Both;
  std::vector<double> omegas{0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9};
  std::vector<double> omega_bars{0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
  GradientMode gradient_mode = GradientMode::Adjoint;
  std::string output_dir = "out";
  int workers = 1;
  double bump_amplitude = 0.15;
  double right_offset = -0.27;  // used by the s_joint preset only
  bool fix_ends = true;
  double fd_eps = 1e-6;

  bool operator==(const RunConfig&) const = default;
  void validate() const;
};

struct LoadedConfig {
  RunConfig config;
  std::vector<std::string> warnings;
};

/// Throws ParseError for malformed text and ValidationError (naming the key)
/// for unknown keys or out-of-range values.
LoadedConfig parse_config(const std::string& text);
LoadedConfig load_config(const std::filesystem::path& path);

/// Writes every key; parse_config(write_config(c)).config == c.
std::string write_config(const RunConfig& config);

}  // namespace cerashape
