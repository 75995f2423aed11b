#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <limits>
#include <string>
#include <vector>

#include "gbhe/adapt.hpp"

namespace gbhe {

struct ExperimentConfig {
  std::string experiment = "sgbhe-uniform";
  ModelParams params;
  std::string kernel = "power";  // power | riemann-liouville | constant
  double kernel_tau = 0.5;
  double kernel_scale = 1.0;
  int degree = 1;
  /// Uniform runs: mesh parameters n. Adaptive runs: uniform comparison
  /// levels; the adaptive loop starts from the first one.
  std::vector<int> levels{8, 16, 32, 64};
  AdaptConfig adapt;
  /// Time step; non-positive means tau = h (= 1/n) on each level.
  double dt = 0.0;
  double final_time = 1.0;
  /// Memory coefficients, one output series each (transient uniform runs).
  std::vector<double> eta_series{0.0, 0.1};
  bool cn_memory_half = false;
  CnSource cn_source = CnSource::Midpoint;
  bool memory_jump_gradient = false;
  NewtonOptions newton;
  /// Moving-singularity run: initial mesh n and per-step reset.
  int initial_n = 4;
  bool reset_each_step = true;

  std::string out_dir = "out";
  bool dump_meshes = false;
  int snapshot_every = 0;
  bool write_files = true;

  void validate() const;
  KernelSpec kernel_spec() const;
};

struct ConvergenceRow {
  std::string series;
  int level = 0;
  double h_max = 0.0;
  int dofs = 0;
  double dg_error = 0.0;
  double l2_error = 0.0;
  double indicator = 0.0;
  double oscillation = 0.0;
  double efficiency = 0.0;
  double rate = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceTable {
  std::string experiment;
  std::vector<ConvergenceRow> rows;
  /// Per-step marked-area tracking of the moving-singularity run:
  /// (t, marked area within 0.3 of the bump center, total marked area).
  std::vector<std::array<double, 3>> tracking;
  /// Marked cells of the adaptive L-shape loop: (count near the bump, total).
  std::array<int, 2> marked_near{0, 0};

  std::vector<ConvergenceRow> series(const std::string& name) const;
};

enum class RateKind { MeshSize, Dofs };

/// Fills the rate column per series: log(e_i/e_{i+1})/log(h_i/h_{i+1}) or
/// -2 log(e_i/e_{i+1})/log(DOF_i/DOF_{i+1}). The first row of each series has
/// no rate. The mesh-size formula rejects non-decreasing h.
void compute_rates(std::vector<ConvergenceRow>& rows, RateKind kind);
double rate_h(double e0, double e1, double h0, double h1);
double rate_dofs(double e0, double e1, double n0, double n1);

/// Columns: level,h_max,dofs,dg_error,l2_error,indicator,efficiency,rate,oscillation,series.
void write_csv(const ConvergenceTable& t, std::ostream& os, bool timestamp = true);

struct TransientRun {
  TimeEstimate estimate;
  double total_error = 0.0;  // only with the estimator enabled
  double final_l2 = 0.0;
  std::unique_ptr<DgField> final;
};

/// Fixed-mesh time loop from the interpolated exact initial value.
TransientRun run_transient(const Problem& pr, MeshPtr mesh, int degree, const TimeGrid& grid,
                           const TransientOptions& opts, bool with_estimate = true, const EstimatorOptions& eopts = {},
                           const std::function<void(int, const DgField&)>& on_step = {});

ConvergenceTable run_experiment(const ExperimentConfig& cfg);

}  // namespace gbhe
