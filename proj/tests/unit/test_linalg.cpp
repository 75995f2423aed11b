#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "gbhe/linalg.hpp"

using namespace gbhe;

TEST_CASE("direct sparse solves") {
  SparseMatrix I(4, 4);
  I.setIdentity();
  const Vector b = Vector::LinSpaced(4, 1.0, 4.0);
  CHECK((solve(I, b) - b).norm() == 0.0);

  SparseMatrix D(2, 2);
  D.insert(0, 0) = 2;
  D.insert(1, 1) = 4;
  const Vector x = solve(D, Vector(Eigen::Vector2d(2, 8)));
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> U(-1, 1);
  Eigen::MatrixXd B(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) B(i, j) = U(rng);
  const Eigen::MatrixXd A = B * B.transpose() + 50 * Eigen::MatrixXd::Identity(50, 50);
  Vector rhs(50);
  for (int i = 0; i < 50; ++i) rhs[i] = U(rng);
  const Vector ref = A.llt().solve(rhs);
  const SparseMatrix As = A.sparseView();
  LinearSolver lu;
  lu.factorize(As);
  const Vector got = lu.solve(rhs);
  CHECK((got - ref).norm() / ref.norm() < 1e-8);
  CHECK(lu.last_residual() <= 1e-10);
}

TEST_CASE("singular matrices are reported") {
  SparseMatrix Z(3, 3);
  Z.insert(0, 0) = 1;
  Z.insert(1, 1) = 1;
  Z.makeCompressed();
  CHECK_THROWS_AS(solve(Z, Vector::Ones(3)), SingularMatrix);
  LinearSolver lu;
  CHECK_FALSE(lu.factorized());
  CHECK_THROWS(lu.solve(Vector::Ones(3)));
}
