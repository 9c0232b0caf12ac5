#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ealign/config.hpp"
#include "ealign/dynamics.hpp"
#include "ealign/errors.hpp"
#include "ealign/picard.hpp"
#include "ealign/series_io.hpp"
#include "ealign/spectral.hpp"

namespace {

using namespace ealign;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntimeAbort = 2;

struct Built {
  RunConfig cfg;
  GridPtr grid;
  EosParams eos;
  Kernel kernel;
};

int load(const std::string& path, Built& b) {
  const ParsedConfig parsed = parse_config_file(path);
  if (!parsed.ok()) {
    std::cerr << "config validation failed (" << parsed.errors.size() << " problem(s)):\n";
    for (const auto& e : parsed.errors) std::cerr << "  - " << e << "\n";
    return kExitValidation;
  }
  b.cfg = *parsed.config;
  try {
    b.grid = build_grid(b.cfg);
    b.eos = build_eos(b.cfg);
    b.kernel = build_kernel_from(b.cfg, b.grid);
  } catch (const std::exception& e) {
    std::cerr << "config rejected: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

std::string g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

int cmd_check(const std::string& config_path) {
  Built b;
  if (int rc = load(config_path, b)) return rc;
  const SimState init = build_initial_state(b.cfg, b.grid, b.eos);
  const double margin = threshold_margin(b.eos, b.kernel);
  const double dt = cfl_dt(init, b.eos, b.cfg.scheme);
  std::cout << "grid dim=" << b.grid->dim << " n=" << b.grid->points
            << " L=" << g(b.grid->length) << " h=" << g(b.grid->spacing) << "\n";
  std::cout << "eos gamma=" << g(b.eos.gamma) << " nu=" << g(b.eos.nu)
            << " rho_bar=" << g(b.eos.rho_bar) << " kappa_bar=" << g(b.eos.kappa_bar)
            << " a=" << g(b.eos.a) << " a_sym=" << g(b.eos.a_sym)
            << " tau=" << g(b.eos.tau) << "\n";
  std::cout << "kernel_l1_spectral " << g(b.kernel.l1_spectral) << "\n";
  std::cout << "kernel_l1_maxentry " << g(b.kernel.l1_maxentry) << "\n";
  std::cout << "margin " << g(margin) << "\n";
  std::cout << "margin_maxentry " << g(threshold_margin_maxentry(b.eos, b.kernel)) << "\n";
  std::cout << "cfl_dt " << g(dt) << "\n";
  return margin > 0 ? kExitOk : kExitValidation;
}

int cmd_run(const std::string& config_path) {
  Built b;
  if (int rc = load(config_path, b)) return rc;
  const SimState init = build_initial_state(b.cfg, b.grid, b.eos);
  const int s = b.cfg.effective_sobolev_s();
  std::cout << "margin " << g(threshold_margin(b.eos, b.kernel)) << "\n";
  const RunResult result = run(init, b.eos, b.kernel, b.cfg.scheme, s, b.cfg.beta);

  namespace fs = std::filesystem;
  fs::create_directories(b.cfg.output_directory);
  const fs::path dir(b.cfg.output_directory);
  write_series((dir / b.cfg.series_filename).string(), result.records);
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%05zu.snap", b.cfg.snapshot_prefix.c_str(), i);
    write_snapshot((dir / name).string(), result.snapshots[i]);
  }
  std::cout << "steps " << result.records.size() - 1 << "\n";
  std::cout << "status " << to_string(result.status) << "\n";
  std::cout << "final_time " << g(result.final_state().time) << "\n";
  std::cout << "e_l2_initial " << g(result.records.front().e_l2) << "\n";
  std::cout << "e_l2_final " << g(result.records.back().e_l2) << "\n";
  if (result.status != RunStatus::completed) {
    std::cerr << "run aborted at step " << result.abort_step << ": " << result.message
              << "\n";
    return kExitRuntimeAbort;
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              std::vector<double> values) {
  Built b;
  if (int rc = load(config_path, b)) return rc;
  if (param != "a" && param != "tau") {
    std::cerr << "--param must be a or tau\n";
    return kExitValidation;
  }
  namespace fs = std::filesystem;
  fs::create_directories(b.cfg.output_directory);
  const fs::path dir(b.cfg.output_directory);
  const int s = b.cfg.effective_sobolev_s();

  int row_index = 0;
  auto runner = [&](const EosParams& eos) {
    RunOutcome outcome;
    const SimState init = build_initial_state(b.cfg, b.grid, eos);
    const RunResult result = run(init, eos, b.kernel, b.cfg.scheme, s, b.cfg.beta);
    const fs::path row_dir = dir / ("row_" + std::to_string(row_index++));
    fs::create_directories(row_dir);
    write_series((row_dir / b.cfg.series_filename).string(), result.records);
    outcome.status = result.status;
    outcome.initial_u_l2 = lp_norm(result.snapshots.front().velocity, 2.0);
    outcome.final_u_l2 = lp_norm(result.final_state().velocity, 2.0);
    return outcome;
  };

  const auto rows = sweep(b.eos, param, values, b.kernel, runner);
  std::ofstream table((dir / "sweep.csv").string());
  table << param
        << ",margin,margin_maxentry,initial_u_l2,final_u_l2,ratio,class,status\n";
  std::cout << param << "  margin  ratio  class  status\n";
  for (const auto& r : rows) {
    table << g(r.value) << ',' << g(r.margin) << ',' << g(r.margin_maxentry) << ','
          << g(r.initial_u_l2) << ',' << g(r.final_u_l2) << ',' << g(r.ratio) << ','
          << to_string(r.cls) << ',' << to_string(r.status) << "\n";
    std::cout << g(r.value) << "  " << g(r.margin) << "  " << g(r.ratio) << "  "
              << to_string(r.cls) << "  " << to_string(r.status) << "\n";
  }
  return kExitOk;
}

int cmd_picard(const std::string& config_path, double t0, int steps, int iterations) {
  if (steps < 1 || iterations < 2) {
    std::cerr << "picard needs --steps >= 1 and --iterations >= 2\n";
    return kExitValidation;
  }
  Built b;
  if (int rc = load(config_path, b)) return rc;
  const SimState init_state = build_initial_state(b.cfg, b.grid, b.eos);
  SigmaU init;
  init.u = init_state.velocity;
  init.sigma = init_state.form == Formulation::symmetrized
                   ? init_state.density_like
                   : sigma_from_rho(init_state.density_like, b.eos);
  const int s = b.cfg.effective_sobolev_s();

  try {
    if (t0 <= 0) {
      t0 = auto_pick_t0(init, b.eos, b.kernel, s);
      std::cout << "auto_t0 " << g(t0) << "\n";
    }
    PicardConfig pcfg;
    pcfg.T0 = t0;
    pcfg.dt = t0 / steps;
    pcfg.max_iterations = iterations;
    const PicardResult result = picard_run(init, b.eos, b.kernel, pcfg, s);

    namespace fs = std::filesystem;
    fs::create_directories(b.cfg.output_directory);
    std::ofstream csv((fs::path(b.cfg.output_directory) / "picard.csv").string());
    csv << "k,d,ratio\n";
    std::cout << "k  d_k  ratio\n";
    for (std::size_t i = 0; i < result.report.d.size(); ++i) {
      const double ratio = i < result.report.ratios.size() ? result.report.ratios[i] : 0.0;
      csv << i << ',' << g(result.report.d[i]) << ',' << g(ratio) << "\n";
      std::cout << i << "  " << g(result.report.d[i]) << "  " << g(ratio) << "\n";
    }
    std::cout << "contraction " << (result.report.non_contraction ? "no" : "yes") << "\n";
    if (result.report.converged_at >= 0)
      std::cout << "converged_at " << result.report.converged_at << "\n";
    if (result.iterates.back().bound_warning)
      std::cout << "warning: iterate H^s bound monitor tripped\n";
  } catch (const NumericalError& e) {
    std::cerr << "picard aborted: " << e.what() << "\n";
    return kExitRuntimeAbort;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral simulator for damped compressible flow with "
               "nonlocal velocity alignment"};
  app.require_subcommand(1);

  std::string config_path;
  std::string sweep_param = "a";
  std::vector<double> sweep_values;
  double picard_t0 = 0.0;
  int picard_steps = 64;
  int picard_iterations = 8;

  auto* c_run = app.add_subcommand("run", "integrate and write series/snapshots");
  c_run->add_option("-c,--config", config_path, "config file")->required();

  auto* c_sweep = app.add_subcommand("sweep", "rerun over a parameter list");
  c_sweep->add_option("-c,--config", config_path, "config file")->required();
  c_sweep->add_option("--param", sweep_param, "a or tau");
  c_sweep->add_option("--values", sweep_values, "parameter values")
      ->required()
      ->delimiter(',');

  auto* c_picard = app.add_subcommand("picard", "successive-approximation study");
  c_picard->add_option("-c,--config", config_path, "config file")->required();
  c_picard->add_option("--t0", picard_t0, "horizon (0 = bisect automatically)");
  c_picard->add_option("--steps", picard_steps, "time steps per iterate");
  c_picard->add_option("--iterations", picard_iterations, "iteration count");

  auto* c_check = app.add_subcommand("check", "validate config, print margins");
  c_check->add_option("-c,--config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (c_run->parsed()) return cmd_run(config_path);
    if (c_sweep->parsed()) return cmd_sweep(config_path, sweep_param, sweep_values);
    if (c_picard->parsed()) return cmd_picard(config_path, picard_t0, picard_steps,
                                              picard_iterations);
    if (c_check->parsed()) return cmd_check(config_path);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitRuntimeAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
