#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cerashape/config.hpp"
#include "cerashape/optim.hpp"
#include "cerashape/problem.hpp"

namespace cerashape {

struct CaseStudyPreset {
  std::string name = "straight_joint";
  double length = 1.0;
  double end_height = 0.2;
  double right_offset = 0.0;          // meanline height at x = length
  double start_bump_amplitude = 0.15; // straight joint only

  static CaseStudyPreset from_name(const std::string& name, double bump_amplitude = 0.15,
                                   double s_offset = -0.27);
  static CaseStudyPreset from_config(const RunConfig& cfg);

  /// Starting meanline and thickness on the grid nodes.
  ShapeParams start_shape(const std::vector<double>& x) const;
};

ProblemSettings problem_settings(const RunConfig& cfg);
OptimConfig optim_config(const RunConfig& cfg);

/// Least-squares B-spline fit of the preset start shape.
Eigen::VectorXd preset_start_gamma(const ShapeProblem& problem, const CaseStudyPreset& preset);

struct SweepResult {
  std::vector<RunHistory> runs;      // wsm runs first, then moda; parameter order kept
  std::vector<ParetoPoint> front;    // filtered
};

/// Runs the configured sweep(s) on up to cfg.workers threads. A run that
/// throws is kept with status StepFailure and its message.
SweepResult run_sweep(const RunConfig& cfg);

/// run_sweep plus front.csv, runs.csv, history_<method>_<param>.csv and
/// mesh_<method>_<param>.txt in cfg.output_dir.
SweepResult run_case_study(const RunConfig& cfg);

struct ValidationRow {
  std::string component;             // e.g. f1_ml_1, f2_th_5
  double eps = 0.0;
  double abs_error = 0.0;
};

/// Adjoint (unadapted) coefficient gradients against central FD on the
/// preset start shape, for eps = 1e-2 ... 1e-7.
std::vector<ValidationRow> gradient_validation(const RunConfig& cfg);

/// gradient_validation written to <output_dir>/gradient_validation.csv.
std::vector<ValidationRow> export_validation(const RunConfig& cfg);

void write_front_csv(std::ostream& out, const std::vector<ParetoPoint>& front);
void write_history_csv(std::ostream& out, const RunHistory& run);
void write_stress(std::ostream& out, const StateSolution& state);

/// File-name fragment for a sweep parameter, e.g. 0.25 -> "0.25".
std::string param_tag(double param);

}  // namespace cerashape
