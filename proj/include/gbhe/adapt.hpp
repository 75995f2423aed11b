#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gbhe/estimate.hpp"
#include "gbhe/problems.hpp"

namespace gbhe {

struct AdaptConfig {
  double mu = 0.5;
  /// Stop once the global indicator drops to tol (0 disables).
  double tol = 0.0;
  int max_refinements = 20;
  int max_dofs = 200000;
  void validate() const;
};

struct Marking {
  std::vector<int> cells;
  /// Set when every indicator is zero; nothing is marked then.
  bool converged = false;
};

/// {K : eta_K >= mu * max eta_L}. Cells at the threshold are all marked.
Marking mark_max(std::span<const double> indicators, double mu);

struct StationarySolution {
  std::shared_ptr<const DgOperator> op;
  DgField u;
  DgField f_h;
  NewtonReport report;
};

/// Newton solve of the stationary problem on `dofs`, starting from `guess`
/// (transferred when it lives elsewhere) or from zero.
StationarySolution solve_stationary(const Problem& pr, const DofMap& dofs, const DgField* guess = nullptr,
                                    const NewtonOptions& newton = {});

struct StationaryLevel {
  MeshPtr mesh;
  DgField u;
  StationaryEstimate estimate;
  ErrorNorms error;
  NewtonReport report;
  std::vector<int> marked;  // cells marked on this level's mesh
};

/// Solve -> Estimate -> Mark -> Refine until the indicator reaches tol or a
/// cap is hit. `on_level` is called as each level completes.
std::vector<StationaryLevel> adaptive_stationary(const Problem& pr, MeshPtr initial, int degree,
                                                 const AdaptConfig& cfg,
                                                 const std::function<void(const StationaryLevel&)>& on_level = {});

struct TransientAdaptConfig {
  AdaptConfig adapt{0.5, 0.0, 7, 200000};
  /// Start each step from `initial` (true) or from the previous step's mesh.
  bool reset_each_step = true;
};

struct AdaptiveStep {
  int k = 0;
  double t = 0.0;
  MeshPtr mesh;  // final mesh of the step
  /// Meshes and marked cells of every refinement pass of the step.
  std::vector<std::pair<MeshPtr, std::vector<int>>> marks;
  TimeStepEstimate estimate;
  ErrorNorms error;  // of u^k at t_k, when the exact solution is known
};

struct AdaptiveTransientResult {
  std::vector<AdaptiveStep> steps;
  TimeEstimate estimate;
  double total_error = 0.0;
  std::unique_ptr<DgField> final;
};

/// Per-step adaptive loop: at each t_k the mesh is chosen by up to
/// max_refinements passes of solve / estimate (Upsilon_k) / mark / refine.
AdaptiveTransientResult adaptive_transient(const Problem& pr, const TimeGrid& grid, MeshPtr initial, int degree,
                                           const TransientAdaptConfig& cfg, const TransientOptions& opts = {},
                                           const std::function<void(const AdaptiveStep&, const DgField&)>& on_step = {});

}  // namespace gbhe
