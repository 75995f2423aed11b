#include "gbhe/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gbhe/io.hpp"

namespace gbhe {

namespace {

const char* const kExperiments[] = {"sgbhe-uniform",         "gbhe-be-uniform",       "gbhe-cn-uniform",
                                    "lshape-adaptive-case1", "lshape-adaptive-case2", "moving-singularity"};

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string eta_label(double eta) {
  std::ostringstream os;
  os << "eta=" << eta;
  return os.str();
}

struct Output {
  const ExperimentConfig& cfg;
  std::filesystem::path dir;

  explicit Output(const ExperimentConfig& c) : cfg(c), dir(c.out_dir) {
    if (cfg.write_files) std::filesystem::create_directories(dir);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  bool enabled() const { return cfg.write_files; }
};

ConvergenceRow make_row(std::string series, int level, const Mesh& mesh, int dofs, double dg, double l2,
                        double indicator, double osc) {
  ConvergenceRow r;
  r.series = std::move(series);
  r.level = level;
  r.h_max = mesh.max_diameter();
  r.dofs = dofs;
  r.dg_error = dg;
  r.l2_error = l2;
  r.indicator = indicator;
  r.oscillation = osc;
  r.efficiency = efficiency(indicator, dg).value;
  return r;
}

void run_stationary_uniform(const ExperimentConfig& cfg, const Problem& pr, const std::string& series,
                            ConvergenceTable& table, const Output& out) {
  std::vector<ConvergenceRow> rows;
  int level = 0;
  for (int n : cfg.levels) {
    auto mesh = std::make_shared<const Mesh>(build_structured(pr.domain, n));
    DofMap dofs(mesh, cfg.degree);
    std::optional<StationarySolution> solved;
    try {
      solved.emplace(solve_stationary(pr, dofs, nullptr, cfg.newton));
    } catch (const std::exception& e) {
      throw std::runtime_error(series + " level " + std::to_string(level) + ": " + e.what());
    }
    const StationarySolution& s = *solved;
    const StationaryEstimate est =
        estimate_stationary(*s.op, s.u, at_time(pr.forcing, 0.0), s.f_h, at_time(pr.boundary, 0.0));
    const ErrorNorms err = error_norms(s.u, pr.exact, 0.0, s.op->penalty());
    rows.push_back(make_row(series, level, *mesh, dofs.size(), err.dg, err.l2, est.total, est.oscillation));
    if (out.enabled() && cfg.dump_meshes) {
      VtkWriter w(*mesh);
      w.add_field("u", s.u);
      w.add_cell_data("zeta", est.local);
      w.write(out.path(cfg.experiment + "_" + series + "_level" + std::to_string(level) + ".vtk"));
    }
    ++level;
  }
  compute_rates(rows, RateKind::MeshSize);
  table.rows.insert(table.rows.end(), rows.begin(), rows.end());
}

void run_transient_uniform(const ExperimentConfig& cfg, Scheme scheme, ConvergenceTable& table, const Output& out) {
  for (double eta : cfg.eta_series) {
    ModelParams p = cfg.params;
    p.eta = eta;
    const Problem pr = make_problem("sine-transient", p, cfg.kernel_spec());
    const std::string series = eta_label(eta);
    std::vector<ConvergenceRow> rows;
    int level = 0;
    for (int n : cfg.levels) {
      auto mesh = std::make_shared<const Mesh>(build_structured(pr.domain, n));
      const double tau = cfg.dt > 0.0 ? cfg.dt : 1.0 / n;
      const int steps = std::max(1, static_cast<int>(std::lround(cfg.final_time / tau)));
      TransientOptions opts;
      opts.scheme = scheme;
      opts.cn_source = cfg.cn_source;
      opts.cn_memory_half = cfg.cn_memory_half;
      opts.newton = cfg.newton;
      EstimatorOptions eopts;
      eopts.memory_jump_gradient = cfg.memory_jump_gradient;
      TransientRun run;
      try {
        run = run_transient(pr, mesh, cfg.degree, TimeGrid::uniform(cfg.final_time, steps), opts, true, eopts,
                            [&](int k, const DgField& u) {
                              if (!out.enabled() || cfg.snapshot_every <= 0 || k % cfg.snapshot_every) return;
                              VtkWriter w(u.dofs.mesh());
                              w.add_field("u", u);
                              w.write(out.path(cfg.experiment + "_" + series + "_n" + std::to_string(n) + "_step" +
                                               std::to_string(k) + ".vtk"));
                            });
      } catch (const std::exception& e) {
        throw std::runtime_error(series + " level " + std::to_string(level) + ": " + e.what());
      }
      rows.push_back(make_row(series, level, *mesh, DofMap(mesh, cfg.degree).size(), run.total_error, run.final_l2,
                              run.estimate.combined(), std::sqrt(run.estimate.kappa_sq + run.estimate.source_sq)));
      ++level;
    }
    compute_rates(rows, RateKind::MeshSize);
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
}

void run_lshape(const ExperimentConfig& cfg, const std::string& problem, ConvergenceTable& table, const Output& out) {
  const Problem pr = make_problem(problem, cfg.params, cfg.kernel_spec());
  run_stationary_uniform(cfg, pr, "uniform", table, out);

  std::vector<ConvergenceRow> rows;
  constexpr Point corner{0.025, 0.025};
  auto mesh = std::make_shared<const Mesh>(build_structured(pr.domain, cfg.levels.front()));
  adaptive_stationary(pr, mesh, cfg.degree, cfg.adapt, [&](const StationaryLevel& lv) {
    const int level = static_cast<int>(rows.size());
    rows.push_back(make_row("adaptive", level, *lv.mesh, lv.u.dofs.size(), lv.error.dg, lv.error.l2,
                            lv.estimate.total, lv.estimate.oscillation));
    for (int c : lv.marked) {
      ++table.marked_near[1];
      if (norm(lv.mesh->centroid(c) - corner) <= 0.3) ++table.marked_near[0];
    }
    if (out.enabled() && cfg.dump_meshes) {
      VtkWriter w(*lv.mesh);
      w.add_field("u", lv.u);
      w.add_cell_data("zeta", lv.estimate.local);
      std::vector<double> gen(lv.mesh->num_cells());
      for (std::size_t c = 0; c < gen.size(); ++c) gen[c] = lv.mesh->generation(static_cast<int>(c));
      w.add_cell_data("generation", gen);
      w.write(out.path(cfg.experiment + "_adaptive_level" + std::to_string(level) + ".vtk"));
    }
  });
  compute_rates(rows, RateKind::Dofs);
  table.rows.insert(table.rows.end(), rows.begin(), rows.end());
}

void run_moving(const ExperimentConfig& cfg, ConvergenceTable& table, const Output& out) {
  const Problem pr = make_problem("moving-bump", cfg.params, cfg.kernel_spec());
  const double tau = cfg.dt > 0.0 ? cfg.dt : 0.1;
  const int steps = std::max(1, static_cast<int>(std::lround(cfg.final_time / tau)));
  TransientAdaptConfig tc;
  tc.adapt = cfg.adapt;
  tc.reset_each_step = cfg.reset_each_step;
  TransientOptions opts;
  opts.newton = cfg.newton;
  auto initial = std::make_shared<const Mesh>(build_structured(pr.domain, cfg.initial_n));
  const AdaptiveTransientResult res = adaptive_transient(
      pr, TimeGrid::uniform(cfg.final_time, steps), initial, cfg.degree, tc, opts,
      [&](const AdaptiveStep& s, const DgField& u) {
        const double cx = bump_center(s.t);
        double near = 0.0, total = 0.0;
        for (const auto& [m, cells] : s.marks)
          for (int c : cells) {
            total += m->area(c);
            if (norm(m->centroid(c) - Point{cx, cx}) <= 0.3) near += m->area(c);
          }
        table.tracking.push_back({s.t, near, total});
        table.rows.push_back(make_row("step", s.k, *s.mesh, u.dofs.size(), s.error.dg, s.error.l2,
                                      std::sqrt(s.estimate.upsilon_sq_new), 0.0));
        const bool snap = cfg.snapshot_every > 0 && s.k % cfg.snapshot_every == 0;
        if (out.enabled() && (cfg.dump_meshes || snap)) {
          VtkWriter w(*s.mesh);
          w.add_field("u", u);
          w.add_cell_data("upsilon", s.estimate.upsilon_local);
          w.write(out.path(cfg.experiment + "_step" + std::to_string(s.k) + ".vtk"));
        }
      });
  ConvergenceRow total = make_row("total", steps, *res.steps.back().mesh, res.final->dofs.size(), res.total_error,
                                  res.steps.back().error.l2, res.estimate.combined(),
                                  std::sqrt(res.estimate.kappa_sq + res.estimate.source_sq));
  table.rows.push_back(total);
  if (out.enabled()) {
    std::ofstream os(out.path(cfg.experiment + "_tracking.csv"));
    os << "t,marked_area_near,marked_area_total,fraction\n";
    for (const auto& r : table.tracking)
      os << fmt(r[0]) << ',' << fmt(r[1]) << ',' << fmt(r[2]) << ',' << fmt(r[2] > 0 ? r[1] / r[2] : 0.0) << '\n';
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  bool known = false;
  for (const char* e : kExperiments) known = known || experiment == e;
  if (!known) throw std::invalid_argument("unknown experiment: " + experiment);
  params.validate();
  kernel_spec().validate();
  if (degree < 1 || degree > 2) throw std::invalid_argument("degree must be 1 or 2");
  if (levels.empty()) throw std::invalid_argument("levels must not be empty");
  for (int n : levels)
    if (n < 1) throw std::invalid_argument("levels must be positive");
  if (experiment.rfind("lshape", 0) == 0)
    for (int n : levels)
      if (n % 2) throw std::invalid_argument("L-shape levels must be even");
  if (experiment.rfind("lshape", 0) == 0 || experiment == "moving-singularity") adapt.validate();
  if (!(final_time > 0.0)) throw std::invalid_argument("final_time must be positive");
  if (initial_n < 1) throw std::invalid_argument("initial_n must be positive");
  if ((experiment == "gbhe-be-uniform" || experiment == "gbhe-cn-uniform") && eta_series.empty())
    throw std::invalid_argument("eta_series must not be empty");
}

KernelSpec ExperimentConfig::kernel_spec() const {
  if (kernel == "power") return KernelSpec::power(kernel_tau, kernel_scale);
  if (kernel == "riemann-liouville") return KernelSpec::riemann_liouville(kernel_tau);
  if (kernel == "constant") return KernelSpec::constant(kernel_scale);
  throw std::invalid_argument("unknown kernel: " + kernel);
}

std::vector<ConvergenceRow> ConvergenceTable::series(const std::string& name) const {
  std::vector<ConvergenceRow> out;
  for (const auto& r : rows)
    if (r.series == name) out.push_back(r);
  return out;
}

double rate_h(double e0, double e1, double h0, double h1) { return std::log(e0 / e1) / std::log(h0 / h1); }
double rate_dofs(double e0, double e1, double n0, double n1) { return -2.0 * std::log(e0 / e1) / std::log(n0 / n1); }

void compute_rates(std::vector<ConvergenceRow>& rows, RateKind kind) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rate = std::numeric_limits<double>::quiet_NaN();
    std::size_t j = i;
    while (j > 0 && rows[j - 1].series != rows[i].series) --j;
    if (j == 0) continue;
    const ConvergenceRow& a = rows[j - 1];
    if (kind == RateKind::MeshSize) {
      if (!(rows[i].h_max < a.h_max)) throw std::invalid_argument("compute_rates: mesh size not decreasing");
      rows[i].rate = rate_h(a.dg_error, rows[i].dg_error, a.h_max, rows[i].h_max);
    } else {
      rows[i].rate = rate_dofs(a.dg_error, rows[i].dg_error, a.dofs, rows[i].dofs);
    }
  }
}

void write_csv(const ConvergenceTable& t, std::ostream& os, bool timestamp) {
  if (timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    os << "# " << t.experiment << " generated " << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << '\n';
  }
  os << "level,h_max,dofs,dg_error,l2_error,indicator,efficiency,rate,oscillation,series\n";
  for (const auto& r : t.rows)
    os << r.level << ',' << fmt(r.h_max) << ',' << r.dofs << ',' << fmt(r.dg_error) << ',' << fmt(r.l2_error) << ','
       << fmt(r.indicator) << ',' << fmt(r.efficiency) << ',' << fmt(r.rate) << ',' << fmt(r.oscillation) << ','
       << r.series << '\n';
}

TransientRun run_transient(const Problem& pr, MeshPtr mesh, int degree, const TimeGrid& grid,
                           const TransientOptions& opts, bool with_estimate, const EstimatorOptions& eopts,
                           const std::function<void(int, const DgField&)>& on_step) {
  DofMap dofs(std::move(mesh), degree);
  TransientSolver solver(pr.params, pr.forcing, pr.boundary, MemoryWeights(grid, pr.kernel), opts);
  solver.initialize(interpolate(at_time(pr.exact.u, grid.t(0)), dofs));
  TransientError err(pr.exact, pr.params.penalty_for(degree));
  TransientRun run;
  for (int k = 1; k <= grid.steps(); ++k) {
    const StepSolution s = solver.solve_step(dofs);
    if (with_estimate) {
      run.estimate.add(estimate_step(solver, s, solver.current(), eopts), grid.tau(k));
      err.add_step(s.prev_transferred, s.u, grid.t(k - 1), grid.t(k));
    }
    solver.commit(s);
    if (on_step) on_step(k, solver.current());
  }
  err.set_final(solver.current(), grid.final_time());
  run.final_l2 = err.final_l2();
  run.total_error = with_estimate ? err.total() : 0.0;
  run.final = std::make_unique<DgField>(solver.current());
  return run;
}

ConvergenceTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Output out(cfg);
  ConvergenceTable table;
  table.experiment = cfg.experiment;
  if (cfg.experiment == "sgbhe-uniform") {
    run_stationary_uniform(cfg, make_problem("sine", cfg.params, cfg.kernel_spec()), "uniform", table, out);
  } else if (cfg.experiment == "gbhe-be-uniform") {
    run_transient_uniform(cfg, Scheme::BackwardEuler, table, out);
  } else if (cfg.experiment == "gbhe-cn-uniform") {
    run_transient_uniform(cfg, Scheme::CrankNicolson, table, out);
  } else if (cfg.experiment == "lshape-adaptive-case1") {
    run_lshape(cfg, "lshape-case1", table, out);
  } else if (cfg.experiment == "lshape-adaptive-case2") {
    run_lshape(cfg, "lshape-case2", table, out);
  } else {
    run_moving(cfg, table, out);
  }
  if (out.enabled()) {
    std::ofstream os(out.path(cfg.experiment + ".csv"));
    write_csv(table, os);
  }
  return table;
}

}  // namespace gbhe
