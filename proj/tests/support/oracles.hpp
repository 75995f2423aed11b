#pragma once

// Reference computations used by the unit tests and the acceptance binary.
// None of them calls the closed forms they are compared against.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gbhe/forms.hpp"
#include "gbhe/memory.hpp"

namespace gbhe::oracle {

inline DgField random_field(const DofMap& dofs, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  DgField u(dofs);
  for (int i = 0; i < dofs.size(); ++i) u.coeffs[i] = d(rng);
  return u;
}

/// (1/(tau_k tau_j)) int_{t_{k-1}}^{t_k} int_{t_{j-1}}^{min(t, t_j)} K(t - s) ds dt by nested
/// tanh-sinh quadrature; the inner integral is written in r = t - s so the
/// kernel singularity sits at an endpoint.
inline double weight(const TimeGrid& g, const std::function<double(double)>& K, int k, int j) {
  boost::math::quadrature::tanh_sinh<double> ts(12);
  const double a = g.t(k - 1), b = g.t(k), c = g.t(j - 1), d = g.t(j);
  auto inner = [&](double t) {
    const double lo = t - std::min(t, d), hi = t - c;
    if (hi <= lo) return 0.0;
    return ts.integrate(K, lo, hi);
  };
  return ts.integrate(inner, a, b) / ((b - a) * (d - c));
}

/// max over directions of ||(R(x + eps d) - R(x - eps d)) / (2 eps) - J d|| / ||J d||.
inline double jacobian_fd_error(const std::function<Vector(const Vector&)>& R, const SparseMatrix& J, const Vector& x,
                                int directions, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int d = 0; d < directions; ++d) {
    Vector dir(x.size());
    for (int i = 0; i < dir.size(); ++i) dir[i] = u(rng);
    const double eps = 1e-6 * std::max(1.0, x.norm() / std::sqrt(double(x.size())));
    const Vector fd = (R(x + eps * dir) - R(x - eps * dir)) / (2.0 * eps);
    const Vector jd = J * dir;
    worst = std::max(worst, (fd - jd).norm() / jd.norm());
  }
  return worst;
}

/// Dense symmetric eigenvalues.
inline Eigen::VectorXd sym_eigenvalues(const SparseMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace gbhe::oracle
