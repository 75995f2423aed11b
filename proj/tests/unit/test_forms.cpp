#include <doctest.h>

#include <cmath>
#include <random>

#include "gbhe/adapt.hpp"
#include "gbhe/forms.hpp"
#include "gbhe/newton.hpp"
#include "support/oracles.hpp"

using namespace gbhe;

namespace {

MeshPtr square(int n) { return std::make_shared<const Mesh>(build_structured(Domain::UnitSquare, n)); }

// (phi(u), 1) by high-order quadrature through point evaluation.
double integrate(const DgField& u, const std::function<double(double)>& phi) {
  const QuadratureRule& r = cell_quadrature(30);
  const Mesh& m = u.dofs.mesh();
  double s = 0;
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c)
    for (std::size_t q = 0; q < r.size(); ++q)
      s += r.weights[q] * m.map(c).det * phi(evaluate(u, c, r.points[q][0], r.points[q][1]).value);
  return s;
}

}  // namespace

TEST_CASE("a_DG is symmetric and positive definite") {
  for (int k : {1, 2}) {
    DofMap dofs(square(4), k);
    const SparseMatrix A = assemble_adg(dofs, 10.0 * k * k);
    const Eigen::MatrixXd D(A);
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() < 1e-12 * D.cwiseAbs().maxCoeff());
    CHECK(oracle::sym_eigenvalues(A).minCoeff() > 0.0);
  }
  CHECK_THROWS(assemble_adg(DofMap(square(2), 1), 0.0));
}

TEST_CASE("a_DG of the constant field only sees the boundary penalty") {
  DofMap dofs(square(1), 1);
  const double sigma = 10.0;
  const SparseMatrix A = assemble_adg(dofs, sigma);
  const Vector one = Vector::Ones(dofs.size());
  // sum over the 4 boundary edges of (sigma / h_E) * h_E
  CHECK(one.dot(A * one) == doctest::Approx(4 * sigma).epsilon(1e-13));
}

TEST_CASE("b_DG identities on random fields") {
  std::mt19937 rng(42);
  for (int k : {1, 2}) {
    DofMap dofs(square(4), k);
    for (int trial = 0; trial < 50; ++trial) {
      const DgField w = oracle::random_field(dofs, rng), u = oracle::random_field(dofs, rng),
                    v = oracle::random_field(dofs, rng);
      const double buv = bdg_form(w, u, v, 1), bvu = bdg_form(w, v, u, 1);
      const double scale = 1.0 + std::abs(buv);
      CHECK(std::abs(bdg_form(w, u, u, 1)) < 1e-12 * scale);
      CHECK(std::abs(buv + bvu) < 1e-12 * scale);
    }
    const DgField zero(dofs), u = oracle::random_field(dofs, rng), v = oracle::random_field(dofs, rng);
    CHECK(bdg_form(zero, u, v, 1) == 0.0);
    CHECK(assemble_bdg(zero, 1, {}, false).value.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("reaction term") {
  DofMap dofs(square(3), 2);
  CHECK(assemble_reaction(DgField(dofs), 0.5, 1, false).value.cwiseAbs().maxCoeff() == 0.0);
  DgField one(dofs, Vector::Ones(dofs.size()));
  for (int delta : {1, 2, 3}) CHECK(assemble_reaction(one, 0.5, delta, false).value.cwiseAbs().maxCoeff() < 1e-14);

  std::mt19937 rng(3);
  for (int delta : {1, 2}) {
    const double gamma = 0.3;
    const DgField u = oracle::random_field(dofs, rng);
    const double lhs = assemble_reaction(u, gamma, delta, false).value.dot(u.coeffs);
    // (c(u), u) = (1 + gamma)(u^{delta+1}, u) - gamma ||u||^2 - ||u^{delta+1}||^2
    const double rhs = (1 + gamma) * integrate(u, [&](double s) { return std::pow(s, delta + 2); }) -
                       gamma * integrate(u, [](double s) { return s * s; }) -
                       integrate(u, [&](double s) { return std::pow(s, 2 * delta + 2); });
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("Jacobians against central differences") {
  std::mt19937 rng(11);
  for (int k : {1, 2})
    for (int delta : {1, 2}) {
      DofMap dofs(square(3), k);
      ModelParams p;
      p.delta = delta;
      p.gamma = 0.4;
      DgOperator op(dofs, p);
      const DgField u = oracle::random_field(dofs, rng, -0.8, 0.8);
      const DgField f_h = oracle::random_field(dofs, rng);
      const SpaceFn g = [](double x, double y) { return 0.5 + x * y; };

      auto R = [&](const Vector& x) { return stationary_residual(op, DgField(dofs, x), f_h, g); };
      CHECK(oracle::jacobian_fd_error(R, stationary_jacobian(op, u, g), u.coeffs, 5, rng) < 1e-6);

      auto B = [&](const Vector& x) { return assemble_bdg(DgField(dofs, x), delta, g, false).value; };
      CHECK(oracle::jacobian_fd_error(B, *assemble_bdg(u, delta, g, true).jacobian, u.coeffs, 5, rng) < 1e-6);

      auto C = [&](const Vector& x) { return assemble_reaction(DgField(dofs, x), 0.4, delta, false).value; };
      CHECK(oracle::jacobian_fd_error(C, *assemble_reaction(u, 0.4, delta, true).jacobian, u.coeffs, 5, rng) < 1e-6);
    }
}

TEST_CASE("Newton on the stationary problem") {
  ModelParams lin;
  lin.alpha = lin.beta = 0.0;
  Problem pl = make_problem("sine", lin);
  DofMap dofs(square(8), 1);
  StationarySolution sl = solve_stationary(pl, dofs);
  CHECK(sl.report.converged);
  CHECK(sl.report.iterations == 1);

  Problem pr = make_problem("sine", ModelParams{});
  DofMap d16(square(16), 1);
  StationarySolution s = solve_stationary(pr, d16);
  CHECK(s.report.converged);
  const double res = stationary_residual(*s.op, s.u, s.f_h, {}).lpNorm<Eigen::Infinity>();
  CHECK(res < 1e-9);
  const ErrorNorms e = error_norms(s.u, pr.exact, 0.0, s.op->penalty());
  CHECK(e.l2 < 0.01);

  StationarySolution again = solve_stationary(pr, d16, &s.u);
  CHECK(again.report.iterations <= 1);

  Vector x = Vector::Zero(2);
  NewtonOptions o;
  o.max_iter = 3;
  CHECK_THROWS_AS(newton_solve(
                      x, [](const Vector& v) { return Vector::Constant(2, 1.0 + v.squaredNorm()); },
                      [](const Vector& v) {
                        SparseMatrix J(2, 2);
                        J.insert(0, 0) = 2 * v[0] + 1e-3;
                        J.insert(1, 1) = 2 * v[1] + 1e-3;
                        return J;
                      },
                      o),
                  NonConvergence);
}
