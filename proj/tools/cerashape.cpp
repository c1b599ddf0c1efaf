// Command line front end: sweeps, gradient validation, mesh dumps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cerashape/case_study.hpp"
#include "cerashape/config.hpp"
#include "cerashape/error.hpp"
#include "format.hpp"

namespace {

constexpr int kExitConfigError = 2;

cerashape::RunConfig load(const std::string& path, const std::optional<std::string>& output_dir) {
  auto loaded = cerashape::load_config(path);
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
  if (output_dir) loaded.config.output_dir = *output_dir;
  return loaded.config;
}

int cmd_run(const std::string& path, const std::optional<std::string>& output_dir) {
  const cerashape::RunConfig cfg = load(path, output_dir);
  const auto result = cerashape::run_case_study(cfg);
  for (const auto& run : result.runs) {
    std::cout << cerashape::to_string(run.method) << " param=" << cerashape::format_double(run.param)
              << " status=" << cerashape::to_string(run.status) << " iterations=" << run.iterations();
    if (!run.records.empty()) {
      std::cout << " f1=" << cerashape::format_double(run.final_record().f1)
                << " f2=" << cerashape::format_double(run.final_record().f2);
    }
    std::cout << '\n';
  }
  std::cout << "front: " << result.front.size() << " nondominated of " << result.runs.size() << " runs -> "
            << cfg.output_dir << '\n';
  return 0;
}

int cmd_validate(const std::string& path, const std::optional<std::string>& output_dir) {
  const cerashape::RunConfig cfg = load(path, output_dir);
  const auto rows = cerashape::export_validation(cfg);
  std::cout << rows.size() << " rows -> " << (std::filesystem::path(cfg.output_dir) / "gradient_validation.csv").string()
            << '\n';
  return 0;
}

int cmd_dump_mesh(const std::string& preset_name, const std::optional<std::string>& config_path,
                  const std::optional<std::string>& output_dir, bool smoothed, bool dump_stress) {
  cerashape::RunConfig cfg = config_path ? load(*config_path, output_dir) : cerashape::RunConfig{};
  cfg.preset = preset_name;
  if (output_dir) cfg.output_dir = *output_dir;
  cfg.validate();

  const cerashape::ShapeProblem problem(cerashape::problem_settings(cfg));
  const auto preset = cerashape::CaseStudyPreset::from_config(cfg);
  cerashape::ShapeParams rho = preset.start_shape(problem.grid().x_coords);
  if (smoothed) rho = problem.shape(problem.fit(rho));
  const cerashape::Mesh mesh = cerashape::build_grid(rho, problem.grid());

  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  const auto mesh_path = dir / ("mesh_" + cfg.preset + ".txt");
  {
    std::ofstream out(mesh_path, std::ios::binary);
    cerashape::write_mesh(out, mesh);
  }
  std::cout << "mesh -> " << mesh_path.string() << '\n';

  if (dump_stress) {
    const cerashape::Material& mat = problem.settings().material;
    const cerashape::StateSolution state =
        cerashape::solve_state(mesh, mat, problem.settings().bc, problem.settings().solver);
    const auto stress_path = dir / ("stress_" + cfg.preset + ".txt");
    std::ofstream out(stress_path, std::ios::binary);
    cerashape::write_stress(out, state);
    std::cout << "stress -> " << stress_path.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biobjective shape optimization of 2D ceramic joints"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output_dir;
  std::string preset = "straight_joint";
  std::optional<std::string> dump_config;
  bool smoothed = false;
  bool dump_stress = false;

  auto* run = app.add_subcommand("run", "Run the configured weighted-sum and/or descent sweeps");
  run->add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--output-dir", output_dir, "Override output_dir");

  auto* validate = app.add_subcommand("validate-gradients", "Adjoint vs finite-difference table");
  validate->add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  validate->add_option("--output-dir", output_dir, "Override output_dir");

  auto* dump = app.add_subcommand("dump-mesh", "Write the start mesh of a preset");
  dump->add_option("--preset", preset, "straight_joint or s_joint")
      ->check(CLI::IsMember({"straight_joint", "s_joint"}));
  dump->add_option("--config", dump_config, "Optional configuration file")->check(CLI::ExistingFile);
  dump->add_option("--output-dir", output_dir, "Override output_dir");
  dump->add_flag("--smoothed", smoothed, "Use the B-spline fit of the preset shape");
  dump->add_flag("--dump-stress", dump_stress, "Also write per-element stresses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, output_dir);
    if (*validate) return cmd_validate(config_path, output_dir);
    return cmd_dump_mesh(preset, dump_config, output_dir, smoothed, dump_stress);
  } catch (const cerashape::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool config_error =
        e.code() == cerashape::ErrorCode::ParseError || e.code() == cerashape::ErrorCode::ValidationError;
    return config_error ? kExitConfigError : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
