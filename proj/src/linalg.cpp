#include "gbhe/linalg.hpp"

#include <cmath>
#include <iostream>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/SparseExtra>
#ifdef GBHE_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace gbhe {

struct LinearSolver::Impl {
#ifdef GBHE_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrix> lu;
#else
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
  SparseMatrix a;
  bool ok = false;
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

const char* LinearSolver::backend() {
#ifdef GBHE_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

bool LinearSolver::factorized() const { return impl_->ok; }

void LinearSolver::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("LinearSolver: matrix is not square");
  impl_->ok = false;
  impl_->a = a;
  impl_->a.makeCompressed();
  impl_->lu.compute(impl_->a);
  if (impl_->lu.info() != Eigen::Success) throw SingularMatrix("sparse LU failed: matrix is singular");
  impl_->ok = true;
}

Vector LinearSolver::solve(const Vector& b) const {
  if (!impl_->ok) throw std::logic_error("LinearSolver: solve before factorize");
  const double bn = b.norm();
  if (bn == 0.0) {
    last_residual_ = 0.0;
    return Vector::Zero(b.size());
  }
  Vector x = impl_->lu.solve(b);
  if (!x.allFinite()) throw SingularMatrix("sparse LU produced a non-finite solution");
  Vector r = b - impl_->a * x;
  double rel = r.norm() / bn;
  for (int it = 0; it < 2 && rel > 1e-10; ++it) {
    x += impl_->lu.solve(r);
    r = b - impl_->a * x;
    rel = r.norm() / bn;
  }
  last_residual_ = rel;
  if (rel > 1e-6) throw SingularMatrix("sparse solve residual " + std::to_string(rel) + " violates contract");
  if (rel > 1e-10) std::cerr << "warning: ill-conditioned solve, relative residual " << rel << '\n';
  return x;
}

Vector solve(const SparseMatrix& a, const Vector& b) {
  LinearSolver s;
  s.factorize(a);
  return s.solve(b);
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
  if (!Eigen::saveMarket(a, path)) throw std::runtime_error("cannot write " + path);
}

}  // namespace gbhe
