#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "gbhe/forms.hpp"
#include "gbhe/memory.hpp"
#include "gbhe/problems.hpp"
#include "gbhe/timestep.hpp"

namespace gbhe {

/// Per-cell indicators are stored unsquared; edge terms are charged in full
/// to every cell sharing the edge.
struct StationaryEstimate {
  std::vector<double> residual;  // zeta_R
  std::vector<double> edge;      // zeta_E
  std::vector<double> jump;      // zeta_J
  std::vector<double> local;     // zeta_K
  std::vector<double> oscillation_local;
  double total = 0.0;        // zeta
  double oscillation = 0.0;  // F
};

/// Residual estimator of the stationary problem. g is the Dirichlet data
/// (empty for zero); boundary jumps use u_h - g.
StationaryEstimate estimate_stationary(const DgOperator& op, const DgField& u, const SpaceFn& f, const DgField& f_h,
                                       const SpaceFn& g = {});

struct ErrorNorms {
  double dg = 0.0;    // |||u - u_h|||
  double l2 = 0.0;    // ||u - u_h||
  double grad = 0.0;  // broken H1 seminorm of the error
  double jump = 0.0;  // penalty-weighted jump part
};

/// Errors against a closed-form solution with quadrature degree 2k + 6.
ErrorNorms error_norms(const DgField& u, const SpaceFn& exact, const std::function<std::array<double, 2>(double, double)>& grad,
                       double penalty, int qdeg = -1);
ErrorNorms error_norms(const DgField& u, const ExactSolution& ex, double t, double penalty);

/// One step of the fully discrete estimator.
struct TimeStepEstimate {
  int k = 0;
  double time = 0.0;
  /// Per-cell Upsilon_k evaluated at u^k (CN: the averaged residual).
  std::vector<double> upsilon_local;
  double upsilon_sq_new = 0.0;   // Upsilon_k^2(u^k)
  double upsilon_sq_prev = 0.0;  // Upsilon_k^2(I u^{k-1}); 0 for CN
  double xi = 0.0;               // Xi_k
  double transfer_jump = 0.0;    // the [[I u^{k-1} - u^{k-1}]] part of Xi_k / tau_k
  double kappa_sq = 0.0;         // K_k^2
  double source_sq = 0.0;        // int ||f - f_h^k||^2 over the step
  double residual_e2_sq = 0.0;   // sum h_E ||R_E2||^2, for diagnostics
};

struct TimeEstimate {
  std::vector<TimeStepEstimate> steps;
  double xi_sq = 0.0;
  double upsilon_sq = 0.0;
  double kappa_sq = 0.0;
  double source_sq = 0.0;

  void add(const TimeStepEstimate& s, double tau);
  /// (Xi^2 + Upsilon^2)^{1/2}
  double combined() const { return std::sqrt(xi_sq + upsilon_sq); }
};

struct EstimatorOptions {
  /// Penalize the gradient jump of the memory sum in Upsilon_J, as printed,
  /// instead of its value jump.
  bool memory_jump_gradient = false;
};

/// Estimator for the step just solved by `solver` (before commit). `prev`
/// is u^{k-1} on its own mesh.
TimeStepEstimate estimate_step(const TransientSolver& solver, const StepSolution& step, const DgField& prev,
                               const EstimatorOptions& opts = {});

/// Accumulates sqrt(||e(t_N)||^2 + int |||e|||^2 dt) with per-step 2-point
/// Gauss on the linear reconstruction.
class TransientError {
 public:
  TransientError(ExactSolution ex, double penalty) : ex_(std::move(ex)), penalty_(penalty) {}
  void add_step(const DgField& prev_transferred, const DgField& u, double t0, double t1);
  void set_final(const DgField& u, double t);
  double integrated_dg_sq() const { return dg_sq_; }
  double final_l2() const { return final_l2_; }
  double total() const { return std::sqrt(final_l2_ * final_l2_ + dg_sq_); }

 private:
  ExactSolution ex_;
  double penalty_;
  double dg_sq_ = 0.0;
  double final_l2_ = 0.0;
};

/// indicator / error, or +inf (flagged) when the error vanishes.
struct Efficiency {
  double value = 0.0;
  bool degenerate = false;
};
Efficiency efficiency(double indicator, double error);

}  // namespace gbhe
