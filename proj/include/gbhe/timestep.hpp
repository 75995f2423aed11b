#pragma once

#include <memory>

#include "gbhe/forms.hpp"
#include "gbhe/memory.hpp"
#include "gbhe/newton.hpp"
#include "gbhe/transfer.hpp"

namespace gbhe {

enum class Scheme { BackwardEuler, CrankNicolson };

/// How the Crank-Nicolson right side f^{k-1/2} is formed.
enum class CnSource { Midpoint, EndpointAverage };

struct TransientOptions {
  Scheme scheme = Scheme::BackwardEuler;
  CnSource cn_source = CnSource::Midpoint;
  /// Multiply the Crank-Nicolson memory sum by the 1/2 of J(psi). Off by
  /// default: with it the scheme no longer approximates the memory term.
  bool cn_memory_half = false;
  NewtonOptions newton;
};

/// f^k: 4-point Gauss average of f over the step, then L2 projection.
DgField source_average_be(const SpaceTimeFn& f, const DofMap& dofs, double t0, double t1);
/// f^{k-1/2}: midpoint value (or the endpoint average), then L2 projection.
DgField source_average_cn(const SpaceTimeFn& f, const DofMap& dofs, double t0, double t1,
                          CnSource mode = CnSource::Midpoint);

/// Linear reconstruction on [t0, t1] from I u^{k-1} (already on the mesh of
/// u^k) and u^k.
DgField reconstruct(const DgField& prev_transferred, const DgField& u, double t0, double t1, double t);

/// Result of solving one step on a given mesh; nothing is committed.
struct StepSolution {
  int k = 0;
  std::shared_ptr<const DgOperator> op;
  DgField u;                 // u^k
  DgField prev_transferred;  // I^k u^{k-1}
  DgField f_h;               // f^k or f^{k-1/2}
  NewtonReport report;
};

/// Sequential BE / CN time loop with the memory history.
class TransientSolver {
 public:
  TransientSolver(ModelParams params, SpaceTimeFn f, SpaceTimeFn g, MemoryWeights weights, TransientOptions opts);

  void initialize(DgField u0);
  /// Solves step k = current_step() + 1 on `dofs`.
  StepSolution solve_step(const DofMap& dofs);
  void commit(const StepSolution& s);
  /// solve_step + commit on the current mesh.
  StepSolution step();

  int current_step() const { return step_; }
  const DgField& current() const { return *u_; }
  const History& history() const { return history_; }
  const MemoryWeights& weights() const { return weights_; }
  const ModelParams& params() const { return params_; }
  const TransientOptions& options() const { return opts_; }
  const SpaceTimeFn& forcing() const { return f_; }
  const SpaceTimeFn& boundary() const { return g_; }
  /// ||grad_h r^j|| of each committed record, used by the memory oscillation.
  const std::vector<double>& record_gradient_norms() const { return grad_norms_; }
  std::shared_ptr<const DgOperator> operator_for(const DofMap& dofs);
  double memory_factor() const;

 private:
  ModelParams params_;
  SpaceTimeFn f_, g_;
  MemoryWeights weights_;
  TransientOptions opts_;
  History history_;
  std::vector<double> grad_norms_;
  std::unique_ptr<DgField> u_;
  int step_ = 0;

  std::shared_ptr<const DgOperator> op_cache_;
  LinearSolver lu_cache_;
  MeshPtr lu_mesh_;
  double lu_tau_ = -1.0;
  double lu_coeff_ = -1.0;
};

/// Broken H1 seminorm ||grad_h u||.
double broken_gradient_norm(const DgField& u);

}  // namespace gbhe
