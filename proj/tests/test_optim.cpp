#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cerashape/case_study.hpp"
#include "cerashape/error.hpp"
#include "cerashape/optim.hpp"

using namespace cerashape;

namespace {

// f1 = |x - a|^2, f2 = |x - b|^2
class TwoWells : public BiobjectiveProblem {
 public:
  TwoWells(Eigen::Vector2d a, Eigen::Vector2d b) : a_(std::move(a)), b_(std::move(b)) {}
  ObjectivePair evaluate(const Eigen::VectorXd& x) const override {
    return {(x - a_).squaredNorm(), (x - b_).squaredNorm()};
  }
  std::pair<ObjectivePair, GradientPair> evaluate_with_gradients(const Eigen::VectorXd& x) const override {
    return {evaluate(x), {2.0 * (x - a_), 2.0 * (x - b_)}};
  }

 private:
  Eigen::Vector2d a_, b_;
};

OptimConfig toy_config() {
  OptimConfig c;
  c.max_iter = 500;
  c.eps = 1e-10;
  c.fix_ends = false;
  return c;
}

double qp_objective(const Eigen::VectorXd& g1, const Eigen::VectorXd& g2, double lambda) {
  return (lambda * g1 + (1.0 - lambda) * g2).squaredNorm();
}

}  // namespace

TEST_CASE("common descent direction examples") {
  const QpDirection orth = steepest_direction_qp(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1));
  CHECK(orth.lambda == doctest::Approx(0.5));
  CHECK(orth.d[0] == doctest::Approx(-0.5));
  CHECK(orth.d[1] == doctest::Approx(-0.5));
  CHECK(orth.rho == doctest::Approx(-0.5));

  const QpDirection same = steepest_direction_qp(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 2));
  CHECK(same.d[0] == -1.0);
  CHECK(same.d[1] == -2.0);
  CHECK(same.rho == doctest::Approx(-5.0));

  const QpDirection opposed = steepest_direction_qp(Eigen::Vector2d(1, -1), Eigen::Vector2d(-1, 1));
  CHECK(opposed.d.norm() == 0.0);
  CHECK(opposed.rho == 0.0);

  // one gradient much shorter: it alone decides
  const QpDirection corner = steepest_direction_qp(Eigen::Vector2d(0.1, 0), Eigen::Vector2d(1, 1));
  CHECK(corner.lambda == 1.0);
  CHECK(corner.d[0] == doctest::Approx(-0.1));
  CHECK_THROWS_AS(steepest_direction_qp(Eigen::Vector2d(1, 0), Eigen::Vector3d(1, 0, 0)), Error);
}

TEST_CASE("direction solves the dual and satisfies KKT") {
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd g1(4), g2(4);
    for (auto& v : g1) v = nd(rng);
    for (auto& v : g2) v = nd(rng);
    const QpDirection qp = steepest_direction_qp(g1, g2);
    // grid search on the dual
    double best = qp_objective(g1, g2, 0.0), best_l = 0.0;
    for (int k = 1; k <= 20000; ++k) {
      const double l = k / 20000.0;
      const double v = qp_objective(g1, g2, l);
      if (v < best) best = v, best_l = l;
    }
    CHECK(qp_objective(g1, g2, qp.lambda) <= best + 1e-12);
    CHECK(std::abs(qp.lambda - best_l) <= 1e-3);
    CHECK(g1.dot(qp.d) <= qp.rho + 1e-12);
    CHECK(g2.dot(qp.d) <= qp.rho + 1e-12);
    CHECK(std::abs(qp.lambda * (g1.dot(qp.d) - qp.rho)) <= 1e-10);
    CHECK(std::abs((1 - qp.lambda) * (g2.dot(qp.d) - qp.rho)) <= 1e-10);
    CHECK((qp.rho < 0.0) == (qp.d.norm() > 0.0));
  }
}

TEST_CASE("Armijo backtracking") {
  const VectorObjective sq = [](const Eigen::VectorXd& x) { return std::vector<double>{x.squaredNorm()}; };
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  const std::array<double, 1> f0{1.0};
  const std::array<Eigen::VectorXd, 1> g{Eigen::VectorXd::Constant(1, 2.0)};
  const ArmijoStep s = armijo_search(sq, x, f0, g, Eigen::VectorXd::Constant(1, -2.0), 1e-4, 30);
  CHECK(s.t == 0.5);
  CHECK(s.halvings == 1);
  CHECK(s.values[0] == 0.0);

  const VectorObjective lin = [](const Eigen::VectorXd& y) { return std::vector<double>{y[0]}; };
  const std::array<Eigen::VectorXd, 1> gl{Eigen::VectorXd::Ones(1)};
  CHECK(armijo_search(lin, x, f0, gl, Eigen::VectorXd::Constant(1, -1.0), 1e-4, 30).t == 1.0);

  try {
    armijo_search(lin, x, f0, gl, Eigen::VectorXd::Ones(1), 1e-4, 10);
    FAIL("expected StepFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepFailure);
  }

  // infeasible candidates are skipped
  const VectorObjective guarded = [](const Eigen::VectorXd& y) {
    if (y[0] < 0.4) throw Error(ErrorCode::NonPositiveThickness, "too thin");
    return std::vector<double>{y[0]};
  };
  const ArmijoStep gs = armijo_search(guarded, x, f0, gl, Eigen::VectorXd::Constant(1, -1.0), 1e-4, 30);
  CHECK(gs.t == 0.5);
}

TEST_CASE("step bound and clamping") {
  CHECK(max_step(0.2, 7, 0.8) == doctest::Approx(0.8 * 0.2 / 7));
  const Eigen::VectorXd c = clamp_direction(Eigen::Vector2d(0.5, -2.0), 1.0);
  CHECK(c[0] == 0.25);
  CHECK(c[1] == -1.0);
  const Eigen::VectorXd k = clamp_direction(Eigen::Vector2d(0.5, -0.9), 1.0);
  CHECK(k[0] == 0.5);
  CHECK(k[1] == -0.9);
  std::mt19937 rng(1);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd d(10);
    for (auto& v : d) v = nd(rng);
    const double bound = max_step(0.2, 7, 0.8);
    CHECK(clamp_direction(d, bound).cwiseAbs().maxCoeff() <= bound);
  }
}

TEST_CASE("scaling parameter") {
  CHECK(scaling_parameter(Eigen::Vector2d(1, 4), Eigen::Vector2d(2, 1), 1.5) == doctest::Approx(6.0));
  // zero f2 components are skipped
  CHECK(scaling_parameter(Eigen::Vector2d(100, 1), Eigen::Vector2d(0, 2), 1.0) == doctest::Approx(0.5));
  try {
    scaling_parameter(Eigen::Vector2d(1, 1), Eigen::Vector2d::Zero(), 1.0);
    FAIL("expected AllRatiosUndefined");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AllRatiosUndefined);
  }
  CHECK(scaling_parameter(Eigen::Vector2d::Zero(), Eigen::Vector2d(1, 1), 1.0) == 0.0);
}

TEST_CASE("weighted sum on two wells") {
  const TwoWells toy({1.0, 0.0}, {-1.0, 0.0});
  // balanced start is already optimal
  const RunHistory crit = run_weighted_sum(toy, Eigen::Vector2d(0.0, 0.0), 0.5, toy_config(), {});
  CHECK(crit.status == RunStatus::Converged);
  CHECK(crit.iterations() <= 1);

  // start at the f2 minimizer: the f1 weight pulls away and f2 rises
  const RunHistory run = run_weighted_sum(toy, Eigen::Vector2d(-1.0, 0.3), 0.9, toy_config(), {});
  CHECK(run.status == RunStatus::Converged);
  CHECK(run.final_record().f1 < run.records.front().f1);
  CHECK(run.final_record().f2 > run.records.front().f2);
  // stationary point of the normalized blend lies on the segment
  CHECK(std::abs(run.final_gamma[1]) <= 1e-4);

  // a common power-of-two factor on c1 and c2 changes nothing
  OptimConfig a = toy_config(), b = toy_config();
  a.c1 = 0.3, a.c2 = 1.7;
  b.c1 = 0.3 * 64, b.c2 = 1.7 * 64;
  const RunHistory ra = run_weighted_sum(toy, Eigen::Vector2d(0.2, 0.5), 0.3, a, {});
  const RunHistory rb = run_weighted_sum(toy, Eigen::Vector2d(0.2, 0.5), 0.3, b, {});
  REQUIRE(ra.records.size() == rb.records.size());
  for (std::size_t k = 0; k < ra.records.size(); ++k) {
    CHECK((ra.records[k].gamma - rb.records[k].gamma).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(run_weighted_sum(toy, Eigen::Vector2d(0.0, 0.0), 1.0, toy_config(), {}), Error);
}

TEST_CASE("biobjective descent on two wells") {
  const TwoWells toy({1.0, 0.0}, {-1.0, 0.0});
  const RunHistory crit = run_biobjective_descent(toy, Eigen::Vector2d(0.3, 0.0), 1.0, toy_config(), {});
  CHECK(crit.status == RunStatus::Converged);
  CHECK(crit.iterations() == 0);

  const RunHistory run = run_biobjective_descent(toy, Eigen::Vector2d(0.2, 1.0), 1.0, toy_config(), {});
  CHECK(run.status == RunStatus::Converged);
  for (std::size_t k = 1; k < run.records.size(); ++k) {
    CHECK(run.records[k].f1 < run.records[k - 1].f1);
    CHECK(run.records[k].f2 < run.records[k - 1].f2);
  }
  CHECK(std::abs(run.final_gamma[1]) <= 1e-3);

  // frozen coordinate and step bound are honoured
  RunSetup setup;
  setup.delta_max = 0.05;
  setup.fixed = {true, false};
  const RunHistory frozen = run_biobjective_descent(toy, Eigen::Vector2d(0.2, 1.0), 1.0, toy_config(), setup);
  CHECK(frozen.final_gamma[0] == 0.2);
  for (const auto& r : frozen.records) CHECK(r.dir_max_abs <= 0.05);
}

TEST_CASE("nondominated filter against pairwise dominance") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> coarse(0, 30);
  std::vector<ParetoPoint> pts(400);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i].f1 = coarse(rng) * 0.1;
    pts[i].f2 = coarse(rng) * 0.1;
    pts[i].param = static_cast<double>(i);
  }
  std::set<int> expected;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < pts.size() && keep; ++j) {
      const bool dominates = pts[j].f1 <= pts[i].f1 && pts[j].f2 <= pts[i].f2 &&
                             (pts[j].f1 < pts[i].f1 || pts[j].f2 < pts[i].f2);
      const bool earlier_twin = j < i && pts[j].f1 == pts[i].f1 && pts[j].f2 == pts[i].f2;
      keep = !dominates && !earlier_twin;
    }
    if (keep) expected.insert(static_cast<int>(i));
  }
  const auto front = pareto_filter(pts);
  std::set<int> got;
  for (const auto& p : front) got.insert(static_cast<int>(p.param));
  CHECK(got == expected);
  for (std::size_t k = 1; k < front.size(); ++k) {
    CHECK(front[k].f1 > front[k - 1].f1);
    CHECK(front[k].f2 < front[k - 1].f2);
  }
  CHECK(pareto_filter(std::vector<ParetoPoint>{}).empty());
}

TEST_CASE("straight joint with a strong intensity weight ends near a straight rod") {
  RunConfig cfg;
  const ShapeProblem problem(problem_settings(cfg));
  const Eigen::VectorXd gamma0 = preset_start_gamma(problem, CaseStudyPreset::from_config(cfg));
  const RunHistory run = run_weighted_sum(problem, gamma0, 0.8, optim_config(cfg));
  REQUIRE(run.status != RunStatus::StepFailure);
  const ShapeParams rho = problem.shape(run.final_gamma);
  CHECK(rho.ml.cwiseAbs().maxCoeff() <= 0.1 * rho.th.mean());
  CHECK(run.final_record().f1 < run.records.front().f1);

  const double area = run.final_record().f2;
  const double stress = cfg.gtilde[0] * 0.2 / area;
  const double rod = analytic_rod_intensity(stress, problem.settings().material, area);
  CHECK(run.final_record().f1 <= 5.0 * rod);
  CHECK(run.final_record().f1 >= rod / 5.0);
}
