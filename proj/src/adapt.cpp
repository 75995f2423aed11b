#include "gbhe/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace gbhe {

void AdaptConfig::validate() const {
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mu must lie in (0,1)");
  if (max_refinements < 0) throw std::invalid_argument("max_refinements must be >= 0");
  if (max_dofs <= 0) throw std::invalid_argument("max_dofs must be positive");
  if (tol < 0.0) throw std::invalid_argument("tol must be >= 0");
}

Marking mark_max(std::span<const double> indicators, double mu) {
  if (indicators.empty()) throw std::invalid_argument("mark_max: no indicators");
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mark_max: mu must lie in (0,1)");
  double mx = 0.0;
  for (double v : indicators) {
    if (!(v >= 0.0)) throw std::invalid_argument("mark_max: negative or NaN indicator");
    mx = std::max(mx, v);
  }
  Marking m;
  if (mx == 0.0) {
    m.converged = true;
    return m;
  }
  const double thr = mu * mx;
  for (std::size_t i = 0; i < indicators.size(); ++i)
    if (indicators[i] >= thr) m.cells.push_back(static_cast<int>(i));
  return m;
}

StationarySolution solve_stationary(const Problem& pr, const DofMap& dofs, const DgField* guess,
                                    const NewtonOptions& newton) {
  const SpaceFn f = at_time(pr.forcing, 0.0), g = at_time(pr.boundary, 0.0);
  StationarySolution s{std::make_shared<const DgOperator>(dofs, pr.params), DgField(dofs),
                       l2_project(f, dofs, std::min(kMaxQuadratureDegree, 2 * dofs.degree() + 6)), {}};
  if (guess) s.u = transfer(*guess, dofs);
  const DgOperator& op = *s.op;
  Vector x = s.u.coeffs;
  NewtonOptions nopt = newton;
  if (op.is_linear()) nopt.constant_jacobian = true;
  s.report = newton_solve(
      x, [&](const Vector& v) { return stationary_residual(op, DgField(dofs, v), s.f_h, g); },
      [&](const Vector& v) { return stationary_jacobian(op, DgField(dofs, v), g); }, nopt);
  s.u.coeffs = std::move(x);
  return s;
}

std::vector<StationaryLevel> adaptive_stationary(const Problem& pr, MeshPtr initial, int degree,
                                                 const AdaptConfig& cfg,
                                                 const std::function<void(const StationaryLevel&)>& on_level) {
  cfg.validate();
  if (pr.transient) throw std::invalid_argument("adaptive_stationary: transient problem");
  std::vector<StationaryLevel> levels;
  MeshPtr mesh = std::move(initial);
  std::unique_ptr<DgField> prev;
  for (int level = 0;; ++level) {
    DofMap dofs(mesh, degree);
    std::optional<StationarySolution> solved;
    try {
      solved.emplace(solve_stationary(pr, dofs, prev.get()));
    } catch (const std::exception& e) {
      throw std::runtime_error("adaptive level " + std::to_string(level) + ": " + e.what());
    }
    const StationarySolution& sol = *solved;
    StationaryLevel lv{mesh, sol.u, estimate_stationary(*sol.op, sol.u, at_time(pr.forcing, 0.0), sol.f_h,
                                                        at_time(pr.boundary, 0.0)),
                       error_norms(sol.u, pr.exact, 0.0, sol.op->penalty()), sol.report, {}};
    const bool done = lv.estimate.total <= cfg.tol || level >= cfg.max_refinements;
    if (!done) {
      Marking m = mark_max(lv.estimate.local, cfg.mu);
      lv.marked = std::move(m.cells);
    }
    prev = std::make_unique<DgField>(sol.u);
    levels.push_back(std::move(lv));
    if (on_level) on_level(levels.back());
    if (done || levels.back().marked.empty()) break;
    auto next = std::make_shared<const Mesh>(refine(*mesh, levels.back().marked).mesh);
    if (DofMap(next, degree).size() > cfg.max_dofs) break;
    mesh = std::move(next);
  }
  return levels;
}

AdaptiveTransientResult adaptive_transient(const Problem& pr, const TimeGrid& grid, MeshPtr initial, int degree,
                                           const TransientAdaptConfig& cfg, const TransientOptions& opts,
                                           const std::function<void(const AdaptiveStep&, const DgField&)>& on_step) {
  cfg.adapt.validate();
  TransientSolver solver(pr.params, pr.forcing, pr.boundary, MemoryWeights(grid, pr.kernel), opts);
  solver.initialize(interpolate(at_time(pr.exact.u, grid.t(0)), DofMap(initial, degree)));
  const double penalty = pr.params.penalty_for(degree);
  TransientError err(pr.exact, penalty);
  AdaptiveTransientResult res;
  MeshPtr mesh = initial;
  for (int k = 1; k <= grid.steps(); ++k) {
    if (cfg.reset_each_step) mesh = initial;
    const DgField prev = solver.current();
    AdaptiveStep rec;
    rec.k = k;
    rec.t = grid.t(k);
    for (int pass = 0;; ++pass) {
      DofMap dofs(mesh, degree);
      std::optional<StepSolution> solved;
      TimeStepEstimate est;
      try {
        solved.emplace(solver.solve_step(dofs));
        est = estimate_step(solver, *solved, prev);
      } catch (const std::exception& e) {
        throw std::runtime_error("step " + std::to_string(k) + ", pass " + std::to_string(pass) + ": " + e.what());
      }
      bool done = pass >= cfg.adapt.max_refinements || std::sqrt(est.upsilon_sq_new) <= cfg.adapt.tol;
      if (!done) {
        Marking m = mark_max(est.upsilon_local, cfg.adapt.mu);
        if (m.cells.empty()) {
          done = true;
        } else {
          auto next = std::make_shared<const Mesh>(refine(*mesh, m.cells).mesh);
          if (DofMap(next, degree).size() > cfg.adapt.max_dofs) {
            done = true;
          } else {
            rec.marks.emplace_back(mesh, std::move(m.cells));
            mesh = std::move(next);
          }
        }
      }
      if (done) {
        const StepSolution& s = *solved;
        rec.mesh = mesh;
        rec.estimate = est;
        res.estimate.add(est, grid.tau(k));
        if (pr.exact.u) {
          rec.error = error_norms(s.u, pr.exact, grid.t(k), penalty);
          err.add_step(s.prev_transferred, s.u, grid.t(k - 1), grid.t(k));
        }
        solver.commit(s);
        break;
      }
    }
    res.steps.push_back(rec);
    if (on_step) on_step(res.steps.back(), solver.current());
  }
  if (pr.exact.u) {
    err.set_final(solver.current(), grid.final_time());
    res.total_error = err.total();
  }
  res.final = std::make_unique<DgField>(solver.current());
  return res;
}

}  // namespace gbhe
