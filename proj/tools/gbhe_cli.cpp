#include <cstdio>
#include <deque>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbhe/config.hpp"
#include "gbhe/io.hpp"

using namespace gbhe;

namespace {

// Flag values are kept as strings and applied through the config keys, so a
// flag and a config-file entry behave identically.
struct Overrides {
  std::deque<std::pair<std::string, std::string>> values;
  bool dump_meshes = false;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = values.emplace_back(key, std::string{});
    app->add_option(flag, slot.second, help);
  }
  void apply(ExperimentConfig& cfg) const {
    for (const auto& [k, v] : values)
      if (!v.empty()) apply_setting(cfg, k, v);
    if (dump_meshes) cfg.dump_meshes = true;
  }
};

void add_common(CLI::App* app, Overrides& o) {
  o.add(app, "--degree", "degree", "polynomial degree k");
  o.add(app, "--penalty", "penalty", "interior penalty constant (default 10 k^2)");
  o.add(app, "--mu", "mu", "maximum-marking parameter in (0,1)");
  o.add(app, "--tol", "tol", "adaptive stopping tolerance");
  o.add(app, "--levels", "levels", "mesh parameters n, comma separated");
  o.add(app, "--eta", "eta", "memory coefficient");
  o.add(app, "--kernel-tau", "kernel_tau", "kernel exponent tau, K(t) = s t^(tau-1)");
  o.add(app, "--dt", "dt", "time step (non-positive: tau = h)");
  o.add(app, "--out-dir", "out_dir", "output directory");
  o.add(app, "--snapshot-every", "snapshot_every", "write a VTK snapshot every N steps");
  app->add_flag("--dump-meshes", o.dump_meshes, "write meshes and solutions as VTK");
}

Problem stationary_problem(const std::string& name, const ExperimentConfig& cfg) {
  Problem pr = make_problem(name, cfg.params, cfg.kernel_spec());
  if (pr.transient) throw std::invalid_argument("'" + name + "' is not a stationary problem");
  return pr;
}

void write_outputs(const ExperimentConfig& cfg, const std::string& stem, const Mesh& mesh, const DgField& u,
                   const std::vector<double>* indicator) {
  if (!cfg.dump_meshes) return;
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path dir(cfg.out_dir);
  VtkWriter w(mesh);
  w.add_field("u_h", u);
  if (indicator) w.add_cell_data("indicator", *indicator);
  w.write((dir / (stem + ".vtk")).string());
  save_mesh_text(mesh, (dir / (stem + ".mesh")).string());
}

int solve_or_estimate(const ExperimentConfig& cfg, const std::string& problem, bool with_estimate) {
  const Problem pr = stationary_problem(problem, cfg);
  std::printf("%6s %10s %8s %6s %14s %14s", "n", "h_max", "dofs", "newton", "dg_error", "l2_error");
  if (with_estimate) std::printf(" %14s %14s %10s", "indicator", "oscillation", "eff");
  std::printf("\n");
  for (int n : cfg.levels) {
    auto mesh = std::make_shared<const Mesh>(build_structured(pr.domain, n));
    DofMap dofs(mesh, cfg.degree);
    StationarySolution s = solve_stationary(pr, dofs, nullptr, cfg.newton);
    const ErrorNorms e = error_norms(s.u, pr.exact, 0.0, s.op->penalty());
    std::printf("%6d %10.4e %8d %6d %14.6e %14.6e", n, mesh->max_diameter(), dofs.size(), s.report.iterations, e.dg,
                e.l2);
    if (with_estimate) {
      const StationaryEstimate est = estimate_stationary(*s.op, s.u, at_time(pr.forcing, 0.0), s.f_h,
                                                         at_time(pr.boundary, 0.0));
      std::printf(" %14.6e %14.6e %10.4f", est.total, est.oscillation, efficiency(est.total, e.dg).value);
      write_outputs(cfg, problem + "_n" + std::to_string(n), *mesh, s.u, &est.local);
    } else {
      write_outputs(cfg, problem + "_n" + std::to_string(n), *mesh, s.u, nullptr);
    }
    std::printf("\n");
  }
  return 0;
}

int adapt(const ExperimentConfig& cfg, const std::string& problem, int n0) {
  const Problem pr = stationary_problem(problem, cfg);
  auto mesh = std::make_shared<const Mesh>(build_structured(pr.domain, n0));
  std::printf("%6s %8s %8s %14s %14s %14s %10s\n", "level", "cells", "dofs", "dg_error", "l2_error", "indicator",
              "eff");
  int level = 0;
  adaptive_stationary(pr, mesh, cfg.degree, cfg.adapt, [&](const StationaryLevel& lv) {
    std::printf("%6d %8zu %8d %14.6e %14.6e %14.6e %10.4f\n", level++, lv.mesh->num_cells(),
                lv.u.dofs.size(), lv.error.dg, lv.error.l2, lv.estimate.total,
                efficiency(lv.estimate.total, lv.error.dg).value);
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DG solver and a posteriori estimators for the Burgers-Huxley equation with memory"};
  app.require_subcommand(1);

  std::string problem = "sine";
  int n = 16;
  std::string config_path;
  Overrides solve_o, est_o, adapt_o, run_o;

  auto* solve = app.add_subcommand("solve", "stationary solve on uniform meshes, errors against the exact solution");
  solve->add_option("--problem", problem, "sine | lshape-case1 | lshape-case2 | linear")->capture_default_str();
  add_common(solve, solve_o);

  auto* est = app.add_subcommand("estimate", "stationary solve plus residual estimator and efficiency index");
  est->add_option("--problem", problem, "sine | lshape-case1 | lshape-case2 | linear")->capture_default_str();
  add_common(est, est_o);

  auto* ad = app.add_subcommand("adapt", "solve-estimate-mark-refine loop for a stationary problem");
  ad->add_option("--problem", problem, "sine | lshape-case1 | lshape-case2 | linear")->capture_default_str();
  ad->add_option("--n", n, "initial uniform mesh parameter")->capture_default_str();
  add_common(ad, adapt_o);

  auto* run = app.add_subcommand("run", "run an experiment described by a config file");
  run->add_option("config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  add_common(run, run_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentConfig cfg = load_config_file(config_path);
      run_o.apply(cfg);
      const ConvergenceTable t = run_experiment(cfg);
      write_csv(t, std::cout);
      return 0;
    }
    ExperimentConfig cfg = default_config("sgbhe-uniform");
    if (*solve) {
      solve_o.apply(cfg);
      cfg.validate();
      return solve_or_estimate(cfg, problem, false);
    }
    if (*est) {
      est_o.apply(cfg);
      cfg.validate();
      return solve_or_estimate(cfg, problem, true);
    }
    adapt_o.apply(cfg);
    cfg.validate();
    return adapt(cfg, problem, n);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
