#include "gbhe/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gbhe/problems.hpp"

namespace gbhe {

namespace {

// 4-point Gauss-Legendre on [0,1].
constexpr double kG4x[4] = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281, 0.9305681557970263};
constexpr double kG4w[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731, 0.1739274225687269};

}  // namespace

DgField source_average_be(const SpaceTimeFn& f, const DofMap& dofs, double t0, double t1) {
  const double dt = t1 - t0;
  return l2_project(
      [&](double x, double y) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += kG4w[i] * f(x, y, t0 + kG4x[i] * dt);
        return s;
      },
      dofs, 2 * dofs.degree() + 6);
}

DgField source_average_cn(const SpaceTimeFn& f, const DofMap& dofs, double t0, double t1, CnSource mode) {
  if (mode == CnSource::Midpoint) return l2_project(at_time(f, 0.5 * (t0 + t1)), dofs, 2 * dofs.degree() + 6);
  return l2_project([&](double x, double y) { return 0.5 * (f(x, y, t0) + f(x, y, t1)); }, dofs,
                    2 * dofs.degree() + 6);
}

DgField reconstruct(const DgField& prev_transferred, const DgField& u, double t0, double t1, double t) {
  if (prev_transferred.dofs != u.dofs) throw std::invalid_argument("reconstruct: fields on different meshes");
  const double eps = 1e-12 * std::max(1.0, std::abs(t1));
  if (t < t0 - eps || t > t1 + eps) throw std::out_of_range("reconstruct: time outside the step");
  const double l1 = (t - t0) / (t1 - t0);
  return DgField(u.dofs, (1.0 - l1) * prev_transferred.coeffs + l1 * u.coeffs);
}

double broken_gradient_norm(const DgField& u) {
  const Mesh& mesh = u.dofs.mesh();
  const int k = u.dofs.degree();
  const CellTable& t = cell_table(k, std::max(1, 2 * k - 2));
  const int n = t.n;
  double s = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto uc = u.local(c);
    const AffineMap& m = mesh.map(c);
    double loc = 0.0;
    for (std::size_t q = 0; q < t.rule->size(); ++q) {
      double gx = 0, gy = 0;
      for (int i = 0; i < n; ++i) {
        gx += uc[i] * t.dxi[q * n + i];
        gy += uc[i] * t.deta[q * n + i];
      }
      const auto g = m.grad(gx, gy);
      loc += t.rule->weights[q] * (g[0] * g[0] + g[1] * g[1]);
    }
    s += loc * m.det;
  }
  return std::sqrt(s);
}

TransientSolver::TransientSolver(ModelParams params, SpaceTimeFn f, SpaceTimeFn g, MemoryWeights weights,
                                 TransientOptions opts)
    : params_(params), f_(std::move(f)), g_(std::move(g)), weights_(std::move(weights)), opts_(opts) {
  params_.validate();
}

void TransientSolver::initialize(DgField u0) {
  u_ = std::make_unique<DgField>(std::move(u0));
  history_.clear();
  grad_norms_.clear();
  step_ = 0;
}

double TransientSolver::memory_factor() const {
  return (opts_.scheme == Scheme::CrankNicolson && opts_.cn_memory_half) ? 0.5 : 1.0;
}

std::shared_ptr<const DgOperator> TransientSolver::operator_for(const DofMap& dofs) {
  if (!op_cache_ || op_cache_->dofs() != dofs) op_cache_ = std::make_shared<const DgOperator>(dofs, params_);
  return op_cache_;
}

StepSolution TransientSolver::solve_step(const DofMap& dofs) {
  if (!u_) throw std::logic_error("TransientSolver: initialize() first");
  const int k = step_ + 1;
  if (k > weights_.steps()) throw std::out_of_range("TransientSolver: past the final time");
  const double t0 = weights_.grid().t(k - 1), t1 = weights_.grid().t(k), tau = weights_.grid().tau(k);
  const bool cn = opts_.scheme == Scheme::CrankNicolson;

  StepSolution s{k, operator_for(dofs), DgField(dofs), transfer(*u_, dofs),
                 cn ? source_average_cn(f_, dofs, t0, t1, opts_.cn_source) : source_average_be(f_, dofs, t0, t1), {}};
  const DgOperator& op = *s.op;
  const SparseMatrix& M = op.mass();
  const SparseMatrix& A = op.stiffness();
  const SpaceFn g1 = at_time(g_, t1), g0 = at_time(g_, t0);

  const double mf = memory_factor();
  HistoryAction act = history_action(history_, weights_, op, k, params_.eta, g_);
  const double ci = act.implicit_coeff * mf;
  const Vector& ub = s.prev_transferred.coeffs;

  // Residual = Jlin u + N-part + rhs.
  Vector rhs = -(M * ub) / tau - M * s.f_h.coeffs + mf * act.explicit_part;
  double a_coeff;
  double n_coeff;
  if (!cn) {
    a_coeff = params_.nu + ci;
    n_coeff = 1.0;
    if (g1) rhs -= (params_.nu + ci) * op.lift(g1);
  } else {
    a_coeff = 0.5 * (params_.nu + ci);
    n_coeff = 0.5;
    rhs += a_coeff * (A * ub);
    if (g_) rhs -= a_coeff * (op.lift(g1) + op.lift(g0));
    if (!op.is_linear()) rhs += 0.5 * op.nonlinear(s.prev_transferred, g0, false).value;
  }
  const SparseMatrix jlin = SparseMatrix(M / tau) + a_coeff * A;

  auto residual = [&](const Vector& x) {
    Vector r = jlin * x + rhs;
    if (!op.is_linear()) r += n_coeff * op.nonlinear(DgField(dofs, x), g1, false).value;
    return r;
  };
  auto jacobian = [&](const Vector& x) {
    if (op.is_linear()) return jlin;
    SparseMatrix j = jlin + n_coeff * *op.nonlinear(DgField(dofs, x), g1, true).jacobian;
    return j;
  };

  NewtonOptions nopt = opts_.newton;
  LinearSolver* cache = nullptr;
  if (op.is_linear()) {
    nopt.constant_jacobian = true;
    // Uniform steps differ in the last bits; the residual uses the exact
    // coefficients, so a factorization this close is still a valid Jacobian.
    auto differs = [](double a, double b) { return std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b)); };
    if (lu_mesh_ != dofs.mesh_ptr() || differs(lu_tau_, tau) || differs(lu_coeff_, a_coeff)) {
      lu_cache_ = LinearSolver();
      lu_mesh_ = dofs.mesh_ptr();
      lu_tau_ = tau;
      lu_coeff_ = a_coeff;
    }
    cache = &lu_cache_;
  }
  Vector x = ub;
  s.report = newton_solve(x, residual, jacobian, nopt, cache);
  s.u.coeffs = std::move(x);
  return s;
}

void TransientSolver::commit(const StepSolution& s) {
  if (s.k != step_ + 1) throw std::logic_error("TransientSolver: committing out of order");
  const double t0 = weights_.grid().t(s.k - 1), t1 = weights_.grid().t(s.k);
  HistoryRecord rec{s.u, {{t1, 1.0}}};
  if (opts_.scheme == Scheme::CrankNicolson) {
    rec.field.coeffs = 0.5 * (s.u.coeffs + s.prev_transferred.coeffs);
    rec.boundary = {{t1, 0.5}, {t0, 0.5}};
  }
  grad_norms_.push_back(broken_gradient_norm(rec.field));
  history_.push(std::move(rec));
  u_ = std::make_unique<DgField>(s.u);
  step_ = s.k;
}

StepSolution TransientSolver::step() {
  StepSolution s = solve_step(u_->dofs);
  commit(s);
  return s;
}

}  // namespace gbhe
