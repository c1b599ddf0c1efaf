#include "cerashape/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "cerashape/error.hpp"
#include "format.hpp"

namespace cerashape {

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIter: return "MaxIter";
    case RunStatus::StepFailure: return "StepFailure";
  }
  return "Unknown";
}

std::string_view to_string(Method method) noexcept {
  return method == Method::WeightedSum ? "wsm" : "moda";
}

void OptimConfig::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::ValidationError, "beta must lie in (0, 1)");
  if (!(eps > 0.0)) throw Error(ErrorCode::ValidationError, "eps must be positive");
  if (max_iter < 1) throw Error(ErrorCode::ValidationError, "max_iter must be positive");
  if (max_armijo < 0) throw Error(ErrorCode::ValidationError, "max_armijo must be nonnegative");
  if (!(delta_factor > 0.0 && delta_factor <= 1.0)) {
    throw Error(ErrorCode::ValidationError, "delta_factor must lie in (0, 1]");
  }
  if (c1 && !(*c1 > 0.0)) throw Error(ErrorCode::ValidationError, "c1 must be positive");
  if (c2 && !(*c2 > 0.0)) throw Error(ErrorCode::ValidationError, "c2 must be positive");
  for (double w : weights) {
    if (!(w > 0.0 && w < 1.0)) throw Error(ErrorCode::ValidationError, "weights must lie in (0, 1)");
  }
  for (double s : scalings) {
    if (!(s > 0.0)) throw Error(ErrorCode::ValidationError, "scalings must be positive");
  }
}

QpDirection steepest_direction_qp(const Eigen::VectorXd& g1, const Eigen::VectorXd& g2) {
  if (g1.size() != g2.size()) throw Error(ErrorCode::InvalidArgument, "gradient lengths differ");
  const Eigen::VectorXd diff = g1 - g2;
  const double denom = diff.squaredNorm();
  double lambda = 0.5;
  if (denom > 0.0) lambda = std::clamp(-diff.dot(g2) / denom, 0.0, 1.0);

  QpDirection out;
  out.lambda = lambda;
  out.d = -(lambda * g1 + (1.0 - lambda) * g2);
  out.rho = std::max(g1.dot(out.d), g2.dot(out.d));
  if (!(out.rho < 0.0)) {
    // rounding residue of an exact cancellation: Pareto critical
    out.d.setZero();
    out.rho = 0.0;
  }
  return out;
}

ArmijoStep armijo_search(const VectorObjective& f, const Eigen::VectorXd& x, std::span<const double> f_current,
                         std::span<const Eigen::VectorXd> grads, const Eigen::VectorXd& d, double beta,
                         int max_armijo) {
  if (grads.size() != f_current.size()) {
    throw Error(ErrorCode::InvalidArgument, "objective and gradient counts differ");
  }
  std::vector<double> slopes;
  slopes.reserve(grads.size());
  for (const auto& g : grads) slopes.push_back(g.dot(d));

  double t = 1.0;
  for (int l = 0; l <= max_armijo; ++l, t *= 0.5) {
    std::vector<double> values;
    try {
      values = f(x + t * d);
    } catch (const Error&) {
      continue;  // infeasible candidate
    }
    bool sufficient = values.size() == f_current.size();
    for (std::size_t j = 0; sufficient && j < values.size(); ++j) {
      sufficient = values[j] <= f_current[j] + beta * t * slopes[j];
    }
    if (sufficient) return {t, l, std::move(values)};
  }
  throw Error(ErrorCode::StepFailure, "no sufficient decrease within " + std::to_string(max_armijo) + " halvings");
}

ArmijoStep armijo_biobjective(const std::function<ObjectivePair(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& x, const ObjectivePair& f_current, const Eigen::VectorXd& g1,
                              const Eigen::VectorXd& g2, const Eigen::VectorXd& d, double beta, int max_armijo) {
  const VectorObjective pair = [&f](const Eigen::VectorXd& y) {
    const ObjectivePair v = f(y);
    return std::vector<double>{v.f1, v.f2};
  };
  const std::array<double, 2> current{f_current.f1, f_current.f2};
  const std::array<Eigen::VectorXd, 2> grads{g1, g2};
  return armijo_search(pair, x, current, grads, d, beta, max_armijo);
}

double max_step(double initial_first_thickness, int n_y, double delta_factor) {
  return delta_factor * initial_first_thickness / n_y;
}

Eigen::VectorXd clamp_direction(const Eigen::VectorXd& d, double delta_max) {
  if (d.size() == 0) return d;
  const double largest = d.cwiseAbs().maxCoeff();
  if (!(largest > delta_max)) return d;
  Eigen::VectorXd scaled = d * (delta_max / largest);
  // absorb the last-ulp overshoot of the rescaling
  for (auto& v : scaled) v = std::clamp(v, -delta_max, delta_max);
  return scaled;
}

Eigen::VectorXd clamp_direction(const Eigen::VectorXd& d, double initial_first_thickness, int n_y,
                                double delta_factor) {
  return clamp_direction(d, max_step(initial_first_thickness, n_y, delta_factor));
}

double scaling_parameter(const Eigen::VectorXd& g1, const Eigen::VectorXd& g2, double omega_bar) {
  if (g1.size() != g2.size()) throw Error(ErrorCode::InvalidArgument, "gradient lengths differ");
  double r_max = -1.0;
  for (Eigen::Index i = 0; i < g1.size(); ++i) {
    if (std::abs(g2[i]) > 1e-14) r_max = std::max(r_max, std::abs(g1[i]) / std::abs(g2[i]));
  }
  if (r_max < 0.0) throw Error(ErrorCode::AllRatiosUndefined, "every f2 partial derivative vanishes");
  return omega_bar * r_max;
}

namespace {

void apply_mask(Eigen::VectorXd& v, const std::vector<bool>& fixed) {
  for (std::size_t i = 0; i < fixed.size() && static_cast<Eigen::Index>(i) < v.size(); ++i) {
    if (fixed[i]) v[static_cast<Eigen::Index>(i)] = 0.0;
  }
}

IterationRecord start_record(const Eigen::VectorXd& x, const ObjectivePair& f) {
  IterationRecord r;
  r.k = 0;
  r.f1 = f.f1;
  r.f2 = f.f2;
  r.gamma = x;
  r.direction = Eigen::VectorXd::Zero(x.size());
  return r;
}

IterationRecord step_record(int k, const Eigen::VectorXd& x, const ObjectivePair& f, const ArmijoStep& step,
                            const Eigen::VectorXd& d) {
  IterationRecord r;
  r.k = k;
  r.f1 = f.f1;
  r.f2 = f.f2;
  r.step = step.t;
  r.dir_norm = d.norm();
  r.dir_max_abs = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  r.armijo_halvings = step.halvings;
  r.gamma = x;
  r.direction = d;
  return r;
}

}  // namespace

RunHistory run_weighted_sum(const BiobjectiveProblem& problem, const Eigen::VectorXd& x0, double omega,
                            const OptimConfig& cfg, const RunSetup& setup) {
  cfg.validate();
  if (!(omega > 0.0 && omega < 1.0)) throw Error(ErrorCode::ValidationError, "omega must lie in (0, 1)");

  RunHistory run;
  run.method = Method::WeightedSum;
  run.param = omega;
  run.delta_max = setup.delta_max;

  Eigen::VectorXd x = x0;
  ObjectivePair f;
  GradientPair g;
  std::tie(f, g) = problem.evaluate_with_gradients(x);
  run.records.push_back(start_record(x, f));

  const double c1 = cfg.c1.value_or(1.0 / f.f1);
  const double c2 = cfg.c2.value_or(1.0 / f.f2);
  // normalizing by the start value makes the iterates independent of a
  // common factor on c1 and c2
  const double start_value = omega * c1 * f.f1 + (1.0 - omega) * c2 * f.f2;
  const double w1 = omega * c1 / start_value;
  const double w2 = (1.0 - omega) * c2 / start_value;
  run.scaling = start_value;

  const VectorObjective blended = [&](const Eigen::VectorXd& y) {
    const ObjectivePair v = problem.evaluate(y);
    return std::vector<double>{w1 * v.f1 + w2 * v.f2};
  };

  run.status = RunStatus::MaxIter;
  for (int k = 1; k <= cfg.max_iter; ++k) {
    Eigen::VectorXd grad = w1 * g.g1 + w2 * g.g2;
    apply_mask(grad, setup.fixed);
    const Eigen::VectorXd d = clamp_direction(-grad, setup.delta_max);
    if (d.squaredNorm() == 0.0) {
      run.status = RunStatus::Converged;
      break;
    }

    ArmijoStep step;
    try {
      const std::array<double, 1> current{w1 * f.f1 + w2 * f.f2};
      const std::array<Eigen::VectorXd, 1> grads{grad};
      step = armijo_search(blended, x, current, grads, d, cfg.beta, cfg.max_armijo);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::StepFailure) throw;
      run.status = RunStatus::StepFailure;
      run.message = err.what();
      break;
    }

    x += step.t * d;
    std::tie(f, g) = problem.evaluate_with_gradients(x);
    run.records.push_back(step_record(k, x, f, step, d));
    if ((step.t * d).norm() <= cfg.eps) {
      run.status = RunStatus::Converged;
      break;
    }
  }
  run.final_gamma = x;
  return run;
}

RunHistory run_biobjective_descent(const BiobjectiveProblem& problem, const Eigen::VectorXd& x0, double omega_bar,
                                   const OptimConfig& cfg, const RunSetup& setup) {
  cfg.validate();
  if (!(omega_bar > 0.0)) throw Error(ErrorCode::ValidationError, "omega_bar must be positive");

  RunHistory run;
  run.method = Method::BiobjectiveDescent;
  run.param = omega_bar;
  run.delta_max = setup.delta_max;

  Eigen::VectorXd x = x0;
  ObjectivePair f;
  GradientPair g;
  std::tie(f, g) = problem.evaluate_with_gradients(x);
  run.records.push_back(start_record(x, f));

  apply_mask(g.g1, setup.fixed);
  apply_mask(g.g2, setup.fixed);
  const double s = scaling_parameter(g.g1, g.g2, omega_bar);
  run.scaling = s;
  run.degenerate_scaling = !(s > 0.0);

  const auto scaled = [&problem, s](const Eigen::VectorXd& y) {
    const ObjectivePair v = problem.evaluate(y);
    return ObjectivePair{v.f1, s * v.f2};
  };

  run.status = RunStatus::MaxIter;
  for (int k = 1; k <= cfg.max_iter; ++k) {
    Eigen::VectorXd h1 = g.g1;
    Eigen::VectorXd h2 = s * g.g2;
    apply_mask(h1, setup.fixed);
    apply_mask(h2, setup.fixed);
    const QpDirection qp = steepest_direction_qp(h1, h2);
    if (!(qp.rho < 0.0) || qp.d.squaredNorm() == 0.0) {
      run.status = RunStatus::Converged;  // Pareto critical
      break;
    }
    const Eigen::VectorXd d = clamp_direction(qp.d, setup.delta_max);

    ArmijoStep step;
    try {
      step = armijo_biobjective(scaled, x, {f.f1, s * f.f2}, h1, h2, d, cfg.beta, cfg.max_armijo);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::StepFailure) throw;
      run.status = RunStatus::StepFailure;
      run.message = err.what();
      break;
    }

    x += step.t * d;
    std::tie(f, g) = problem.evaluate_with_gradients(x);
    run.records.push_back(step_record(k, x, f, step, d));
    if ((step.t * d).norm() <= cfg.eps) {
      run.status = RunStatus::Converged;
      break;
    }
  }
  run.final_gamma = x;
  return run;
}

RunSetup shape_run_setup(const ShapeProblem& problem, const Eigen::VectorXd& gamma0, const OptimConfig& cfg) {
  const ShapeParams rho = problem.shape(gamma0);
  RunSetup setup;
  setup.delta_max = max_step(rho.th[0], problem.grid().n_y, cfg.delta_factor);
  if (cfg.fix_ends) {
    // clamped splines interpolate the end coefficients, so freezing them
    // pins the end heights and offsets
    const int nb = problem.basis().size();
    setup.fixed.assign(static_cast<std::size_t>(2 * nb), false);
    for (int idx : {0, nb - 1, nb, 2 * nb - 1}) setup.fixed[static_cast<std::size_t>(idx)] = true;
  }
  return setup;
}

RunHistory run_weighted_sum(const ShapeProblem& problem, const Eigen::VectorXd& gamma0, double omega,
                            const OptimConfig& cfg) {
  return run_weighted_sum(static_cast<const BiobjectiveProblem&>(problem), gamma0, omega, cfg,
                          shape_run_setup(problem, gamma0, cfg));
}

RunHistory run_biobjective_descent(const ShapeProblem& problem, const Eigen::VectorXd& gamma0, double omega_bar,
                                   const OptimConfig& cfg) {
  return run_biobjective_descent(static_cast<const BiobjectiveProblem&>(problem), gamma0, omega_bar, cfg,
                                 shape_run_setup(problem, gamma0, cfg));
}

ParetoPoint to_pareto_point(const RunHistory& run) {
  ParetoPoint p;
  p.f1 = run.final_record().f1;
  p.f2 = run.final_record().f2;
  p.gamma = run.final_gamma;
  p.method = run.method;
  p.param = run.param;
  p.converged = run.status == RunStatus::Converged;
  p.status = run.status;
  p.iterations = run.iterations();
  return p;
}

std::vector<ParetoPoint> pareto_filter(std::span<const ParetoPoint> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].f1 != points[b].f1) return points[a].f1 < points[b].f1;
    return points[a].f2 < points[b].f2;
  });

  std::vector<ParetoPoint> front;
  double best_f2 = std::numeric_limits<double>::infinity();
  for (std::size_t idx : order) {
    // sweep in f1 order: a point survives iff it strictly improves f2
    if (points[idx].f2 < best_f2) {
      front.push_back(points[idx]);
      best_f2 = points[idx].f2;
    }
  }
  return front;
}

}  // namespace cerashape
