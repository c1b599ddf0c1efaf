#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cerashape/problem.hpp"

namespace cerashape {

enum class RunStatus { Converged, MaxIter, StepFailure };
enum class Method { WeightedSum, BiobjectiveDescent };

std::string_view to_string(RunStatus status) noexcept;
/// "wsm" or "moda"; used in file names and CSV columns.
std::string_view to_string(Method method) noexcept;

struct OptimConfig {
  double beta = 1e-4;           // Armijo constant
  double eps = 1e-4;            // stop when ||t d|| <= eps
  int max_iter = 150;
  int max_armijo = 30;
  double delta_factor = 0.8;
  std::optional<double> c1;     // weighted-sum scaling; default 1 / f1(start)
  std::optional<double> c2;     // default 1 / f2(start)
  bool fix_ends = true;         // keep end coefficients (end heights) fixed
  std::vector<double> weights;  // omega values for weighted-sum sweeps
  std::vector<double> scalings; // omega-bar values for descent sweeps

  void validate() const;
};

struct IterationRecord {
  int k = 0;
  double f1 = 0.0;
  double f2 = 0.0;
  double step = 0.0;            // accepted t_k (0 for the start record)
  double dir_norm = 0.0;        // ||d_k|| after clamping
  double dir_max_abs = 0.0;     // ||d_k||_inf after clamping
  int armijo_halvings = 0;
  Eigen::VectorXd gamma;        // iterate after the step
  Eigen::VectorXd direction;    // clamped search direction
};

struct RunHistory {
  Method method = Method::WeightedSum;
  double param = 0.0;           // omega or omega-bar
  std::vector<IterationRecord> records;
  Eigen::VectorXd final_gamma;
  RunStatus status = RunStatus::MaxIter;
  double scaling = 0.0;         // s for descent runs
  bool degenerate_scaling = false;
  double delta_max = std::numeric_limits<double>::infinity();
  std::string message;

  int iterations() const { return records.empty() ? 0 : static_cast<int>(records.size()) - 1; }
  const IterationRecord& final_record() const { return records.back(); }
};

struct ParetoPoint {
  double f1 = 0.0;
  double f2 = 0.0;
  Eigen::VectorXd gamma;
  Method method = Method::WeightedSum;
  double param = 0.0;
  bool converged = false;
  RunStatus status = RunStatus::MaxIter;
  int iterations = 0;
};

/// Step bound and frozen coordinates for one run.
struct RunSetup {
  double delta_max = std::numeric_limits<double>::infinity();
  std::vector<bool> fixed;      // empty: everything free
};

struct QpDirection {
  Eigen::VectorXd d;
  double rho = 0.0;
  double lambda = 0.5;          // multiplier of g1; g2 gets 1 - lambda
};

/// Exact solution of min rho + |d|^2/2 s.t. g_j^T d <= rho via its
/// one-dimensional dual.
QpDirection steepest_direction_qp(const Eigen::VectorXd& g1, const Eigen::VectorXd& g2);

struct ArmijoStep {
  double t = 1.0;
  int halvings = 0;
  std::vector<double> values;   // objective values at x + t d
};

using VectorObjective = std::function<std::vector<double>(const Eigen::VectorXd&)>;

/// Largest t = 2^-l, l = 0..max_armijo, with
/// f_j(x + t d) <= f_j(x) + beta t g_j^T d for every j. Candidates whose
/// evaluation throws cerashape::Error count as failures. Throws StepFailure.
ArmijoStep armijo_search(const VectorObjective& f, const Eigen::VectorXd& x, std::span<const double> f_current,
                         std::span<const Eigen::VectorXd> grads, const Eigen::VectorXd& d, double beta,
                         int max_armijo);

ArmijoStep armijo_biobjective(const std::function<ObjectivePair(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& x, const ObjectivePair& f_current, const Eigen::VectorXd& g1,
                              const Eigen::VectorXd& g2, const Eigen::VectorXd& d, double beta, int max_armijo);

double max_step(double initial_first_thickness, int n_y, double delta_factor);

/// Rescales d so that ||d||_inf <= delta_max.
Eigen::VectorXd clamp_direction(const Eigen::VectorXd& d, double delta_max);
Eigen::VectorXd clamp_direction(const Eigen::VectorXd& d, double initial_first_thickness, int n_y,
                                double delta_factor);

/// s = omega_bar * max_i |g1_i| / |g2_i| over components with |g2_i| > 1e-14.
double scaling_parameter(const Eigen::VectorXd& g1, const Eigen::VectorXd& g2, double omega_bar);

RunHistory run_weighted_sum(const BiobjectiveProblem& problem, const Eigen::VectorXd& x0, double omega,
                            const OptimConfig& cfg, const RunSetup& setup);
RunHistory run_biobjective_descent(const BiobjectiveProblem& problem, const Eigen::VectorXd& x0, double omega_bar,
                                   const OptimConfig& cfg, const RunSetup& setup);

/// Step bound from the first thickness of the start shape; end
/// coefficients frozen when cfg.fix_ends is set.
RunSetup shape_run_setup(const ShapeProblem& problem, const Eigen::VectorXd& gamma0, const OptimConfig& cfg);

RunHistory run_weighted_sum(const ShapeProblem& problem, const Eigen::VectorXd& gamma0, double omega,
                            const OptimConfig& cfg);
RunHistory run_biobjective_descent(const ShapeProblem& problem, const Eigen::VectorXd& gamma0, double omega_bar,
                                   const OptimConfig& cfg);

ParetoPoint to_pareto_point(const RunHistory& run);

/// Nondominated subset ordered by f1 ascending; among identical objective
/// pairs the first occurrence survives.
std::vector<ParetoPoint> pareto_filter(std::span<const ParetoPoint> points);

}  // namespace cerashape
