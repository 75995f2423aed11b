#pragma once

#include <optional>

#include "gbhe/dgspace.hpp"
#include "gbhe/linalg.hpp"

namespace gbhe {

struct ModelParams {
  double alpha = 1.0;
  double nu = 1.0;
  double beta = 1.0;
  double gamma = 0.5;
  int delta = 1;
  double eta = 0.0;
  /// Interior penalty constant; non-positive selects the default 10 k^2.
  double penalty = 0.0;

  void validate() const;
  double penalty_for(int degree) const { return penalty > 0.0 ? penalty : 10.0 * degree * degree; }
};

/// c(u) = u (1 - u^delta)(u^delta - gamma) and its derivative.
double reaction(double u, double gamma, int delta);
double reaction_derivative(double u, double gamma, int delta);

/// Cell quadrature degree used for assembly: exact for the advection and
/// reaction integrands of P_k fields.
int assembly_degree(int k, int delta);
int edge_assembly_degree(int k, int delta);

SparseMatrix assemble_mass(const DofMap& dofs);

/// SIPG matrix with the one-sided trace (exterior value zero) on the
/// boundary.
SparseMatrix assemble_adg(const DofMap& dofs, double penalty);

/// Boundary data functional: sum over boundary edges of
/// int (-grad v . n g + (penalty/h_E) g v). a_DG(u, v) - lift(v) is the
/// SIPG form with Dirichlet data g.
Vector dirichlet_lift(const DofMap& dofs, double penalty, const SpaceFn& g, int qdeg = -1);

/// b_DG(w, u, v) for the advecting field (w, w), w taken as given.
double bdg_form(const DgField& w, const DgField& u, const DgField& v, int delta, int qdeg = -1);

struct Assembled {
  Vector value;
  std::optional<SparseMatrix> jacobian;
};

/// v -> b_DG(u^delta, u, v) plus, when g is set, the boundary data term
/// (1/(delta+2)) int_{boundary} u^delta (n_x + n_y) g v that makes the form
/// consistent for non-homogeneous Dirichlet data.
Assembled assemble_bdg(const DgField& u, int delta, const SpaceFn& g, bool with_jacobian);

/// v -> (c(u), v).
Assembled assemble_reaction(const DgField& u, double gamma, int delta, bool with_jacobian);

/// Linear and nonlinear pieces of the DG operator on one dofmap.
class DgOperator {
 public:
  DgOperator(DofMap dofs, ModelParams params);

  const DofMap& dofs() const { return dofs_; }
  const ModelParams& params() const { return params_; }
  double penalty() const { return penalty_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  Vector lift(const SpaceFn& g) const;

  /// alpha b_DG(u^delta, u, .) + boundary data term - beta (c(u), .).
  Assembled nonlinear(const DgField& u, const SpaceFn& g, bool with_jacobian) const;
  bool is_linear() const { return params_.alpha == 0.0 && params_.beta == 0.0; }

 private:
  DofMap dofs_;
  ModelParams params_;
  double penalty_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
};

/// R(u) v = nu (a_DG(u,v) - lift_g(v)) + alpha b_DG(u,u,v) - beta (c(u),v) - (f_h, v).
Vector stationary_residual(const DgOperator& op, const DgField& u, const DgField& f_h, const SpaceFn& g);
SparseMatrix stationary_jacobian(const DgOperator& op, const DgField& u, const SpaceFn& g);

}  // namespace gbhe
