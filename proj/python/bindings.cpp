#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cerashape/case_study.hpp"
#include "cerashape/error.hpp"
#include "cerashape/metric.hpp"

namespace py = pybind11;
using namespace cerashape;

namespace {

py::dict run_to_dict(const RunHistory& run) {
  py::dict d;
  d["method"] = std::string(to_string(run.method));
  d["param"] = run.param;
  d["status"] = std::string(to_string(run.status));
  d["iterations"] = run.iterations();
  d["scaling"] = run.scaling;
  d["message"] = run.message;
  d["final_gamma"] = run.final_gamma;
  std::vector<double> f1, f2, step;
  for (const auto& r : run.records) {
    f1.push_back(r.f1);
    f2.push_back(r.f2);
    step.push_back(r.step);
  }
  d["f1"] = f1;
  d["f2"] = f2;
  d["step"] = step;
  return d;
}

py::dict point_to_dict(const ParetoPoint& p) {
  py::dict d;
  d["f1"] = p.f1;
  d["f2"] = p.f2;
  d["method"] = std::string(to_string(p.method));
  d["param"] = p.param;
  d["status"] = std::string(to_string(p.status));
  d["iterations"] = p.iterations;
  d["gamma"] = p.gamma;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cerashape native core";

  static py::exception<Error> error_type(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, e.what());
    }
  });

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("preset", &RunConfig::preset)
      .def_readwrite("n_x", &RunConfig::n_x)
      .def_readwrite("n_y", &RunConfig::n_y)
      .def_readwrite("n_B", &RunConfig::n_B)
      .def_readwrite("E", &RunConfig::E)
      .def_readwrite("nu", &RunConfig::nu)
      .def_readwrite("m", &RunConfig::m)
      .def_readwrite("sigma0", &RunConfig::sigma0)
      .def_readwrite("gtilde", &RunConfig::gtilde)
      .def_readwrite("xi", &RunConfig::xi)
      .def_readwrite("beta", &RunConfig::beta)
      .def_readwrite("eps", &RunConfig::eps)
      .def_readwrite("max_iter", &RunConfig::max_iter)
      .def_readwrite("n_phi", &RunConfig::n_phi)
      .def_readwrite("omegas", &RunConfig::omegas)
      .def_readwrite("omega_bars", &RunConfig::omega_bars)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("workers", &RunConfig::workers)
      .def_property(
          "mode",
          [](const RunConfig& c) {
            return c.mode == SweepMode::WeightedSum ? "wsm" : c.mode == SweepMode::Descent ? "moda" : "both";
          },
          [](RunConfig& c, const std::string& v) {
            if (v == "wsm") c.mode = SweepMode::WeightedSum;
            else if (v == "moda") c.mode = SweepMode::Descent;
            else if (v == "both") c.mode = SweepMode::Both;
            else throw Error(ErrorCode::ValidationError, "mode: expected wsm, moda or both");
          })
      .def("validate", &RunConfig::validate)
      .def(py::self == py::self);

  m.def("parse_config", [](const std::string& text) {
    auto loaded = parse_config(text);
    return py::make_tuple(loaded.config, loaded.warnings);
  });
  m.def("load_config", [](const std::filesystem::path& path) {
    auto loaded = load_config(path);
    return py::make_tuple(loaded.config, loaded.warnings);
  });
  m.def("write_config", &write_config);

  py::class_<ObjectivePair>(m, "ObjectivePair")
      .def_readonly("f1", &ObjectivePair::f1)
      .def_readonly("f2", &ObjectivePair::f2);

  py::class_<ShapeProblem>(m, "ShapeProblem")
      .def(py::init([](const RunConfig& c) { return ShapeProblem(problem_settings(c)); }), py::arg("config"))
      .def_property_readonly("x_coords", [](const ShapeProblem& p) { return p.grid().x_coords; })
      .def("start_gamma",
           [](const ShapeProblem& p, const RunConfig& c) {
             return preset_start_gamma(p, CaseStudyPreset::from_config(c));
           })
      .def("shape",
           [](const ShapeProblem& p, const Eigen::VectorXd& gamma) {
             const ShapeParams rho = p.shape(gamma);
             return py::make_tuple(rho.ml, rho.th);
           })
      .def("evaluate", &ShapeProblem::evaluate)
      .def("evaluate_shape",
           [](const ShapeProblem& p, const Eigen::VectorXd& ml, const Eigen::VectorXd& th) {
             return p.evaluate_shape({ml, th});
           })
      .def("gradients", [](const ShapeProblem& p, const Eigen::VectorXd& gamma) {
        const auto a = p.analyze(gamma);
        return py::make_tuple(a.f, a.grad_gamma.g1, a.grad_gamma.g2);
      });

  py::class_<QpDirection>(m, "QpDirection")
      .def_readonly("d", &QpDirection::d)
      .def_readonly("rho", &QpDirection::rho)
      .def_readonly("lam", &QpDirection::lambda);
  m.def("steepest_direction_qp", &steepest_direction_qp);

  m.def("pareto_filter", [](const std::vector<std::pair<double, double>>& values) {
    std::vector<ParetoPoint> pts(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      pts[i].f1 = values[i].first;
      pts[i].f2 = values[i].second;
      pts[i].param = static_cast<double>(i);
    }
    std::vector<int> keep;
    for (const auto& p : pareto_filter(pts)) keep.push_back(static_cast<int>(p.param));
    return keep;
  }, "Indices of the nondominated pairs, ordered by f1.");

  m.def("run_sweep", [](const RunConfig& c) {
    SweepResult res;
    {
      py::gil_scoped_release release;
      res = run_sweep(c);
    }
    py::list runs, front;
    for (const auto& r : res.runs) runs.append(run_to_dict(r));
    for (const auto& p : res.front) front.append(point_to_dict(p));
    return py::make_tuple(runs, front);
  });

  m.def("gradient_validation", [](const RunConfig& c) {
    std::vector<std::tuple<std::string, double, double>> rows;
    for (const auto& r : gradient_validation(c)) rows.emplace_back(r.component, r.eps, r.abs_error);
    return rows;
  });

  m.def("analytic_rod_intensity",
        [](double s, double sigma0, double m_w, double area) {
          return analytic_rod_intensity(s, Material::from_engineering(320e9, 0.25, m_w, sigma0), area);
        },
        py::arg("s"), py::arg("sigma0"), py::arg("m") = 5.0, py::arg("area") = 0.2);
  m.def("cos_power_mean", &cos_power_mean);
  m.def("discrete_curvature", [](const std::vector<double>& x, const std::vector<double>& y) {
    return discrete_curvature(x, y);
  });
}
