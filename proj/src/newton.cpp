#include "gbhe/newton.hpp"

#include <cmath>
#include <sstream>

namespace gbhe {

NewtonReport newton_solve(Vector& x, const ResidualFn& residual, const JacobianFn& jacobian, const NewtonOptions& opts,
                          LinearSolver* cache) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("newton_solve: tol must be positive");
  LinearSolver local;
  LinearSolver& lin = cache ? *cache : local;

  NewtonReport rep;
  Vector r = residual(x);
  double rn = r.norm();
  const double target = opts.tol * (1.0 + rn);
  rep.residual_history.push_back(rn);
  if (!std::isfinite(rn)) throw NonConvergence("newton: non-finite initial residual", x, rep.residual_history);

  while (rn > target) {
    if (rep.iterations >= opts.max_iter) {
      std::ostringstream msg;
      msg << "newton: no convergence after " << rep.iterations << " iterations, |R| = " << rn;
      throw NonConvergence(msg.str(), x, rep.residual_history);
    }
    if (!opts.constant_jacobian || !lin.factorized()) {
      try {
        lin.factorize(jacobian(x));
      } catch (const SingularMatrix& e) {
        throw SingularJacobian(e.what());
      }
    }
    Vector dx;
    try {
      dx = lin.solve(-r);
    } catch (const SingularMatrix& e) {
      throw SingularJacobian(e.what());
    }

    double lambda = 1.0;
    Vector trial = x + dx;
    Vector rt = residual(trial);
    double rtn = rt.norm();
    for (int h = 0; h < opts.max_halvings && !(rtn < rn); ++h) {
      lambda *= 0.5;
      trial = x + lambda * dx;
      rt = residual(trial);
      rtn = rt.norm();
    }
    x = std::move(trial);
    r = std::move(rt);
    rn = rtn;
    ++rep.iterations;
    rep.residual_history.push_back(rn);
    if (!std::isfinite(rn)) throw NonConvergence("newton: residual became non-finite", x, rep.residual_history);
  }
  rep.converged = true;
  return rep;
}

}  // namespace gbhe
