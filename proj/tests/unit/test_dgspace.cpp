#include <doctest.h>

#include <cmath>
#include <random>

#include "gbhe/dgspace.hpp"
#include "gbhe/forms.hpp"

using namespace gbhe;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// int_T x^a y^b over the reference triangle = a! b! / (a + b + 2)!
double monomial_exact(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

MeshPtr reference_mesh() {
  return std::make_shared<const Mesh>(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}}, std::vector<CellVertices>{{0, 1, 2}});
}

MeshPtr square(int n) { return std::make_shared<const Mesh>(build_structured(Domain::UnitSquare, n)); }

}  // namespace

TEST_CASE("cell quadrature") {
  const QuadratureRule& r1 = cell_quadrature(1);
  REQUIRE(r1.size() == 1);
  CHECK(r1.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r1.points[0][0] == doctest::Approx(1.0 / 3));
  CHECK(r1.points[0][1] == doctest::Approx(1.0 / 3));

  const QuadratureRule& r4 = cell_quadrature(4);
  double s = 0;
  for (std::size_t q = 0; q < r4.size(); ++q) s += r4.weights[q] * r4.points[q][0] * r4.points[q][0] * r4.points[q][1];
  CHECK(std::abs(s - 1.0 / 60) < 1e-14);

  for (int d : {2, 3, 5, 8, 13, 20, 31, 40}) {
    const QuadratureRule& r = cell_quadrature(d);
    CHECK(r.degree >= d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double v = 0;
        for (std::size_t q = 0; q < r.size(); ++q)
          v += r.weights[q] * std::pow(r.points[q][0], a) * std::pow(r.points[q][1], b);
        CHECK(std::abs(v - monomial_exact(a, b)) <= 1e-12 * monomial_exact(a, b));
      }
  }
  CHECK_THROWS(cell_quadrature(kMaxQuadratureDegree + 1));
}

TEST_CASE("edge quadrature") {
  const QuadratureRule& r = edge_quadrature(3);
  REQUIRE(r.size() == 2);
  CHECK(r.weights[0] == doctest::Approx(0.5));
  CHECK(r.weights[1] == doctest::Approx(0.5));
  CHECK(r.points[0][0] == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(edge_quadrature(23).size() >= 12);
  for (int d : {1, 7, 23, 40}) {
    const QuadratureRule& e = edge_quadrature(d);
    for (int a = 0; a <= d; ++a) {
      double v = 0;
      for (std::size_t q = 0; q < e.size(); ++q) v += e.weights[q] * std::pow(e.points[q][0], a);
      CHECK(std::abs(v - 1.0 / (a + 1)) < 1e-13);
    }
  }
}

TEST_CASE("Lagrange basis") {
  BasisEval v0 = eval_basis(1, 0, 0);
  CHECK(v0.value[0] == doctest::Approx(1.0));
  CHECK(v0.value[1] == doctest::Approx(0.0));
  CHECK(v0.value[2] == doctest::Approx(0.0));
  BasisEval c = eval_basis(1, 1.0 / 3, 1.0 / 3);
  for (int i = 0; i < 3; ++i) CHECK(c.value[i] == doctest::Approx(1.0 / 3));
  for (int k : {1, 2}) {
    const int n = local_dofs(k);
    for (int j = 0; j < n; ++j) {
      const auto p = reference_node(k, j);
      BasisEval b = eval_basis(k, p[0], p[1]);
      for (int i = 0; i < n; ++i) CHECK(b.value[i] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }
  }
  CHECK(local_dofs(2) == 6);
  CHECK_THROWS(eval_basis(3, 0.2, 0.2));
}

TEST_CASE("P1 mass matrix of the reference triangle") {
  DofMap dofs(reference_mesh(), 1);
  Eigen::MatrixXd m(assemble_mass(dofs));
  Eigen::Matrix3d expect;
  expect << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  expect /= 24.0;
  CHECK((m - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mass matrix on a square mesh") {
  for (int k : {1, 2}) {
    DofMap dofs(square(4), k);
    const SparseMatrix M = assemble_mass(dofs);
    const DgField one = l2_project([](double, double) { return 1.0; }, dofs);
    CHECK(one.coeffs.dot(M * one.coeffs) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((Eigen::MatrixXd(M) - Eigen::MatrixXd(M).transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("L2 projection") {
  DofMap d1(square(3), 1);
  DgField one = l2_project([](double, double) { return 1.0; }, d1);
  CHECK((one.coeffs.array() - 1.0).abs().maxCoeff() < 1e-12);

  auto lin = [](double x, double y) { return 0.3 - 2.0 * x + 5.0 * y; };
  DgField pl = l2_project(lin, d1);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Point p{U(rng), U(rng)};
    CHECK(std::abs(evaluate_at(pl, p).value - lin(p.x, p.y)) < 1e-12);
  }

  auto s = [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); };
  const double e8 = l2_error(l2_project(s, DofMap(square(8), 1)), s, 8);
  const double e16 = l2_error(l2_project(s, DofMap(square(16), 1)), s, 8);
  CHECK(std::log2(e8 / e16) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("evaluate") {
  DofMap ref1(reference_mesh(), 1);
  DgField c(ref1, Eigen::Vector3d(2.0, 2.0, 2.0));
  PointValue pc = evaluate(c, 0, 0.2, 0.3);
  CHECK(pc.value == doctest::Approx(2.0));
  CHECK(std::abs(pc.grad[0]) < 1e-14);
  CHECK(std::abs(pc.grad[1]) < 1e-14);

  DgField hat(ref1, Eigen::Vector3d(0.0, 1.0, 0.0));
  PointValue ph = evaluate(hat, 0, 0.25, 0.25);
  CHECK(ph.grad[0] == doctest::Approx(1.0));
  CHECK(std::abs(ph.grad[1]) < 1e-14);

  DgField x2 = interpolate([](double x, double) { return x * x; }, DofMap(reference_mesh(), 2));
  PointValue px = evaluate(x2, 0, 0.5, 0.0);
  CHECK(std::abs(px.grad[0] - 1.0) < 1e-12);
  CHECK(std::abs(px.grad[1]) < 1e-12);

  CHECK_THROWS(evaluate(c, 5, 0.1, 0.1));
}
