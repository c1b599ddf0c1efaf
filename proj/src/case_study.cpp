#include "cerashape/case_study.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <thread>

#include "cerashape/error.hpp"
#include "format.hpp"

namespace cerashape {

CaseStudyPreset CaseStudyPreset::from_name(const std::string& name, double bump_amplitude, double s_offset) {
  CaseStudyPreset p;
  p.name = name;
  p.start_bump_amplitude = bump_amplitude;
  if (name == "straight_joint") {
    p.right_offset = 0.0;
  } else if (name == "s_joint") {
    p.right_offset = s_offset;
  } else {
    throw Error(ErrorCode::ValidationError, "preset: unknown preset '" + name + "'");
  }
  return p;
}

CaseStudyPreset CaseStudyPreset::from_config(const RunConfig& cfg) {
  return from_name(cfg.preset, cfg.bump_amplitude, cfg.right_offset);
}

ShapeParams CaseStudyPreset::start_shape(const std::vector<double>& x) const {
  const auto n = static_cast<Eigen::Index>(x.size());
  ShapeParams rho{Eigen::VectorXd(n), Eigen::VectorXd::Constant(n, end_height)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = x[static_cast<std::size_t>(i)] / length;
    if (name == "straight_joint") {
      rho.ml[i] = start_bump_amplitude * std::sin(std::numbers::pi * s);
    } else {
      rho.ml[i] = right_offset * s * s * (3.0 - 2.0 * s);
    }
  }
  return rho;
}

ProblemSettings problem_settings(const RunConfig& cfg) {
  ProblemSettings s;
  s.grid = GridSpec::equidistant(cfg.n_x, cfg.n_y, 0.0, 1.0);
  s.n_basis = cfg.n_B;
  s.degree = 3;
  s.material = Material::from_engineering(cfg.E, cfg.nu, cfg.m, cfg.sigma0);
  s.bc.body_force = Eigen::Vector2d::Zero();
  s.bc.traction = Eigen::Vector2d(cfg.gtilde[0], cfg.gtilde[1]);
  s.n_phi = cfg.n_phi;
  s.xi = cfg.xi;
  s.gradient_mode = cfg.gradient_mode;
  s.fd_eps = cfg.fd_eps;
  return s;
}

OptimConfig optim_config(const RunConfig& cfg) {
  OptimConfig o;
  o.beta = cfg.beta;
  o.eps = cfg.eps;
  o.max_iter = cfg.max_iter;
  o.max_armijo = cfg.max_armijo;
  o.delta_factor = cfg.delta_factor;
  o.fix_ends = cfg.fix_ends;
  o.weights = cfg.omegas;
  o.scalings = cfg.omega_bars;
  return o;
}

Eigen::VectorXd preset_start_gamma(const ShapeProblem& problem, const CaseStudyPreset& preset) {
  return problem.fit(preset.start_shape(problem.grid().x_coords));
}

namespace {

struct Job {
  Method method;
  double param;
};

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return out;
}

std::string file_stem(const RunHistory& run) {
  return std::string(to_string(run.method)) + "_" + param_tag(run.param);
}

void write_run_row(std::ostream& out, const RunHistory& run) {
  out << to_string(run.method) << ',' << format_double(run.param) << ',';
  if (run.records.empty()) {
    out << "nan,nan,0";
  } else {
    out << format_double(run.final_record().f1) << ',' << format_double(run.final_record().f2) << ','
        << run.iterations();
  }
  out << ',' << to_string(run.status) << ',' << format_double(run.scaling) << ','
      << (run.degenerate_scaling ? 1 : 0) << ",\"" << run.message << "\"\n";
}

}  // namespace

std::string param_tag(double param) { return format_double(param); }

SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const ShapeProblem problem(problem_settings(cfg));
  const OptimConfig ocfg = optim_config(cfg);
  const Eigen::VectorXd gamma0 = preset_start_gamma(problem, CaseStudyPreset::from_config(cfg));
  const RunSetup setup = shape_run_setup(problem, gamma0, ocfg);

  std::vector<Job> jobs;
  if (cfg.mode != SweepMode::Descent) {
    for (double w : cfg.omegas) jobs.push_back({Method::WeightedSum, w});
  }
  if (cfg.mode != SweepMode::WeightedSum) {
    for (double s : cfg.omega_bars) jobs.push_back({Method::BiobjectiveDescent, s});
  }

  SweepResult result;
  result.runs.resize(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    try {
      result.runs[i] = job.method == Method::WeightedSum
                           ? run_weighted_sum(problem, gamma0, job.param, ocfg, setup)
                           : run_biobjective_descent(problem, gamma0, job.param, ocfg, setup);
    } catch (const std::exception& err) {
      RunHistory failed;
      failed.method = job.method;
      failed.param = job.param;
      failed.status = RunStatus::StepFailure;
      failed.final_gamma = gamma0;
      failed.delta_max = setup.delta_max;
      failed.message = err.what();
      result.runs[i] = std::move(failed);
    }
  });

  std::vector<ParetoPoint> points;
  for (const auto& run : result.runs) {
    if (!run.records.empty()) points.push_back(to_pareto_point(run));
  }
  result.front = pareto_filter(points);
  return result;
}

void write_front_csv(std::ostream& out, const std::vector<ParetoPoint>& front) {
  const Eigen::Index n = front.empty() ? 0 : front.front().gamma.size();
  out << "method,param,f1,f2,iterations,status";
  for (Eigen::Index i = 0; i < n; ++i) out << ",gamma_" << i;
  out << '\n';
  for (const auto& p : front) {
    out << to_string(p.method) << ',' << format_double(p.param) << ',' << format_double(p.f1) << ','
        << format_double(p.f2) << ',' << p.iterations << ',' << to_string(p.status);
    for (Eigen::Index i = 0; i < p.gamma.size(); ++i) out << ',' << format_double(p.gamma[i]);
    out << '\n';
  }
}

void write_history_csv(std::ostream& out, const RunHistory& run) {
  const Eigen::Index n = run.records.empty() ? 0 : run.records.front().gamma.size();
  out << "k,f1,f2,step,dir_norm,dir_max_abs,armijo_halvings";
  for (Eigen::Index i = 0; i < n; ++i) out << ",gamma_" << i;
  for (Eigen::Index i = 0; i < n; ++i) out << ",d_" << i;
  out << '\n';
  for (const auto& r : run.records) {
    out << r.k << ',' << format_double(r.f1) << ',' << format_double(r.f2) << ',' << format_double(r.step) << ','
        << format_double(r.dir_norm) << ',' << format_double(r.dir_max_abs) << ',' << r.armijo_halvings;
    for (Eigen::Index i = 0; i < r.gamma.size(); ++i) out << ',' << format_double(r.gamma[i]);
    for (Eigen::Index i = 0; i < r.direction.size(); ++i) out << ',' << format_double(r.direction[i]);
    out << '\n';
  }
}

void write_stress(std::ostream& out, const StateSolution& state) {
  for (std::size_t e = 0; e < state.element_stress.size(); ++e) {
    const SymTensor2& s = state.element_stress[e];
    out << e << ' ' << format_double(s.xx) << ' ' << format_double(s.xy) << ' ' << format_double(s.yy) << ' '
        << format_double(state.element_area[e]) << '\n';
  }
}

SweepResult run_case_study(const RunConfig& cfg) {
  SweepResult result = run_sweep(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  const ShapeProblem problem(problem_settings(cfg));

  {
    auto out = open_output(dir / "front.csv");
    write_front_csv(out, result.front);
  }
  {
    auto out = open_output(dir / "runs.csv");
    out << "method,param,f1,f2,iterations,status,scaling,degenerate_scaling,message\n";
    for (const auto& run : result.runs) write_run_row(out, run);
  }
  for (const auto& run : result.runs) {
    auto hist = open_output(dir / ("history_" + file_stem(run) + ".csv"));
    write_history_csv(hist, run);
    try {
      const Mesh mesh = build_grid(problem.shape(run.final_gamma), problem.grid());
      auto out = open_output(dir / ("mesh_" + file_stem(run) + ".txt"));
      write_mesh(out, mesh);
    } catch (const Error&) {
      // inadmissible final shape: the status column already says so
    }
  }
  return result;
}

std::vector<ValidationRow> gradient_validation(const RunConfig& cfg) {
  cfg.validate();
  ProblemSettings settings = problem_settings(cfg);
  settings.gradient_mode = GradientMode::Adjoint;
  const ShapeProblem problem(settings);
  const Eigen::VectorXd gamma = preset_start_gamma(problem, CaseStudyPreset::from_config(cfg));
  const ShapeProblem::Analysis a = problem.analyze(gamma);
  const int nb = problem.basis().size();

  std::vector<ValidationRow> rows;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}) {
    std::vector<ObjectivePair> plus(static_cast<std::size_t>(2 * nb));
    std::vector<ObjectivePair> minus(static_cast<std::size_t>(2 * nb));
    parallel_for(static_cast<std::size_t>(2 * nb), cfg.workers, [&](std::size_t i) {
      Eigen::VectorXd y = gamma;
      y[static_cast<Eigen::Index>(i)] += eps;
      plus[i] = problem.evaluate(y);
      y[static_cast<Eigen::Index>(i)] = gamma[static_cast<Eigen::Index>(i)] - eps;
      minus[i] = problem.evaluate(y);
    });
    for (int j = 0; j < 2; ++j) {
      const Eigen::VectorXd& adj = j == 0 ? a.grad_gamma.g1 : a.grad_gamma.g2;
      for (int i = 0; i < 2 * nb; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double fp = j == 0 ? plus[ui].f1 : plus[ui].f2;
        const double fm = j == 0 ? minus[ui].f1 : minus[ui].f2;
        const double fd = (fp - fm) / (2.0 * eps);
        const std::string block = i < nb ? "ml" : "th";
        rows.push_back({"f" + std::to_string(j + 1) + "_" + block + "_" + std::to_string(i % nb + 1), eps,
                        std::abs(adj[i] - fd)});
      }
    }
  }
  return rows;
}

std::vector<ValidationRow> export_validation(const RunConfig& cfg) {
  std::vector<ValidationRow> rows = gradient_validation(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  auto out = open_output(dir / "gradient_validation.csv");
  out << "component,eps,abs_error\n";
  for (const auto& r : rows) out << r.component << ',' << format_double(r.eps) << ',' << format_double(r.abs_error) << '\n';
  return rows;
}

}  // namespace cerashape
