#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Sparse>

namespace gbhe {

/// Compressed sparse storage; Eigen keeps sorted unique indices per column
/// once makeCompressed() has been called.
using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Direct sparse LU (UMFPACK when built with it, Eigen's SparseLU
/// otherwise). Solves are checked against the residual contract
/// ||Ax - b|| <= 1e-10 ||b||, with up to two steps of iterative refinement.
class LinearSolver {
 public:
  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  void factorize(const SparseMatrix& a);
  Vector solve(const Vector& b) const;
  bool factorized() const;
  /// Relative residual of the most recent solve.
  double last_residual() const { return last_residual_; }

  static const char* backend();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  mutable double last_residual_ = 0.0;
};

/// One-shot factorize + solve.
Vector solve(const SparseMatrix& a, const Vector& b);

void write_matrix_market(const SparseMatrix& a, const std::string& path);

}  // namespace gbhe
