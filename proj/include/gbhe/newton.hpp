#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "gbhe/linalg.hpp"

namespace gbhe {

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 30;
  int max_halvings = 20;
  /// Jacobian independent of the iterate: factorize once, keep the LU.
  bool constant_jacobian = false;
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residual_history;  // ||R||_2 before each step and at exit
  bool converged = false;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, Vector iterate, std::vector<double> history)
      : std::runtime_error(what), iterate(std::move(iterate)), history(std::move(history)) {}
  Vector iterate;
  std::vector<double> history;
};

class SingularJacobian : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<SparseMatrix(const Vector&)>;

/// Damped Newton: stops when ||R(x)|| <= tol (1 + ||R(x0)||); a step is
/// halved while the residual norm does not decrease. x is updated in place.
/// `cache`, when given, keeps the factorization across calls for constant
/// Jacobians.
NewtonReport newton_solve(Vector& x, const ResidualFn& residual, const JacobianFn& jacobian,
                          const NewtonOptions& opts = {}, LinearSolver* cache = nullptr);

}  // namespace gbhe
