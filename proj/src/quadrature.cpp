#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gbhe/dgspace.hpp"

namespace gbhe {

namespace {

// Golub-Welsch for the Jacobi weight (1-x)^a (1+x)^b on [-1,1].
void gauss_jacobi(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    T(k, k) = (s == 0.0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double sm = 2.0 * m + a + b;
      const double off = std::sqrt(4.0 * m * (m + a) * (m + b) * (m + a + b) / (sm * sm * (sm + 1.0) * (sm - 1.0)));
      T(k, k + 1) = T(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  x.resize(n);
  w.resize(n);
  for (int k = 0; k < n; ++k) {
    x[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    w[k] = mu0 * v0 * v0;
  }
}

std::unique_ptr<QuadratureRule> make_edge_rule(int degree) {
  const int n = std::max(1, (degree + 2) / 2);
  std::vector<double> x, w;
  gauss_jacobi(n, 0.0, 0.0, x, w);
  auto r = std::make_unique<QuadratureRule>();
  r->degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    r->points.push_back({0.5 * (x[i] + 1.0), 0.0});
    r->weights.push_back(0.5 * w[i]);
  }
  return r;
}

std::unique_ptr<QuadratureRule> make_cell_rule(int degree) {
  auto r = std::make_unique<QuadratureRule>();
  if (degree <= 1) {
    r->degree = 1;
    r->points = {{1.0 / 3.0, 1.0 / 3.0}};
    r->weights = {0.5};
    return r;
  }
  if (degree == 2) {
    r->degree = 2;
    r->points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
    r->weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return r;
  }
  // Duffy collapse: (xi, eta) = (u, v (1 - u)), dA = (1 - u) du dv.
  const int n = (degree + 2) / 2;
  std::vector<double> xu, wu, xv, wv;
  gauss_jacobi(n, 1.0, 0.0, xu, wu);
  gauss_jacobi(n, 0.0, 0.0, xv, wv);
  r->degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      r->points.push_back({u, v * (1.0 - u)});
      r->weights.push_back(0.25 * wu[i] * 0.5 * wv[j]);
    }
  }
  return r;
}

template <class Make>
const QuadratureRule& cached(std::map<int, std::unique_ptr<QuadratureRule>>& cache, std::mutex& mtx, int degree, Make make) {
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw std::out_of_range("quadrature degree " + std::to_string(degree) + " outside [0, " +
                            std::to_string(kMaxQuadratureDegree) + "]");
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[degree];
  if (!slot) slot = make(degree);
  return *slot;
}

}  // namespace

const QuadratureRule& cell_quadrature(int degree) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mtx;
  return cached(cache, mtx, degree, make_cell_rule);
}

const QuadratureRule& edge_quadrature(int degree) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mtx;
  return cached(cache, mtx, degree, make_edge_rule);
}

}  // namespace gbhe
