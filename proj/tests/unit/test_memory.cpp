#include <doctest.h>

#include <cmath>
#include <random>

#include "gbhe/forms.hpp"
#include "gbhe/memory.hpp"
#include "support/oracles.hpp"

using namespace gbhe;

TEST_CASE("constant kernel weights") {
  MemoryWeights w(TimeGrid::uniform(1.0, 8), KernelSpec::constant(1.0));
  for (int k = 1; k <= 8; ++k) {
    CHECK(std::abs(w.omega(k, k) - 0.5) < 1e-12);
    for (int j = 1; j < k; ++j) CHECK(std::abs(w.omega(k, j) - 1.0) < 1e-12);
  }
}

TEST_CASE("power kernel weights against nested quadrature") {
  for (double tau : {0.25, 0.5, 1.0}) {
    const KernelSpec K = KernelSpec::power(tau);
    for (const TimeGrid& g : {TimeGrid::uniform(1.0, 6), TimeGrid::geometric(1.0, 6, 1.3)}) {
      MemoryWeights w(g, K);
      auto kf = [&](double t) { return std::pow(t, tau - 1.0); };
      for (int k = 1; k <= g.steps(); ++k)
        for (int j = 1; j <= k; ++j) {
          const double ref = oracle::weight(g, kf, k, j);
          CHECK(std::abs(w.omega(k, j) - ref) <= 1e-8 * std::abs(ref));
        }
    }
  }
}

TEST_CASE("weights do not depend on later grid points") {
  const KernelSpec K = KernelSpec::power(0.5);
  MemoryWeights a(TimeGrid({0.0, 0.1, 0.25, 0.4}), K);
  MemoryWeights b(TimeGrid({0.0, 0.1, 0.25, 0.4, 0.45, 0.9}), K);
  for (int k = 1; k <= 3; ++k)
    for (int j = 1; j <= k; ++j) CHECK(a.omega(k, j) == doctest::Approx(b.omega(k, j)).epsilon(1e-15));
}

TEST_CASE("grids are validated") {
  CHECK_THROWS(TimeGrid({0.0, 0.5, 0.3}));
  CHECK_THROWS(TimeGrid({0.0, 0.5, 0.5}));
  CHECK_THROWS(KernelSpec::power(1.5).validate());
}

TEST_CASE("Crank-Nicolson memory functional") {
  const int N = 10;
  const double dt = 1.0 / N;
  MemoryWeights w = weights_cn(TimeGrid::uniform(1.0, N), KernelSpec::constant(1.0));
  MemoryWeights wbe = weights_be(TimeGrid::uniform(1.0, N), KernelSpec::constant(1.0));
  for (int k = 1; k <= N; ++k) {
    CHECK(cn_memory_functional(w, k, std::vector<double>(N, 1.0)) == doctest::Approx(0.5 * dt * (k - 0.5)));
    CHECK(cn_memory_functional(w, k, std::vector<double>(N, 0.0)) == 0.0);
    for (int j = 1; j <= k; ++j) CHECK(w.omega(k, j) == wbe.omega(k, j));
  }
}

TEST_CASE("discrete positivity") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const TimeGrid g = TimeGrid::geometric(1.0, 16, 1.1);
  MemoryWeights one(g, KernelSpec::constant(1.0));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xi(16);
    double s = 0;
    for (int j = 0; j < 16; ++j) {
      xi[j] = U(rng);
      s += g.tau(j + 1) * xi[j];
    }
    CHECK(memory_quadratic_form(one, xi) == doctest::Approx(0.5 * s * s).epsilon(1e-12));
  }
  MemoryWeights half(TimeGrid::uniform(1.0, 16), KernelSpec::power(0.5));
  CHECK(memory_quadratic_form(half, std::vector<double>(16, 0.0)) == 0.0);
  PositivityReport r = discrete_positivity_check(half, 100);
  CHECK(r.trials == 100);
  CHECK(r.violations.empty());
  CHECK(r.min_value >= -1e-12);
}

TEST_CASE("history action") {
  auto mesh = std::make_shared<const Mesh>(build_structured(Domain::UnitSquare, 2));
  DofMap dofs(mesh, 1);
  ModelParams p;
  DgOperator op(dofs, p);
  MemoryWeights w(TimeGrid::uniform(1.0, 4), KernelSpec::constant(1.0));
  History h;

  HistoryAction a0 = history_action(h, w, op, 1, 0.0);
  CHECK(a0.implicit_coeff == 0.0);
  CHECK(a0.explicit_part.cwiseAbs().maxCoeff() == 0.0);

  HistoryAction a1 = history_action(h, w, op, 1, 0.2);
  CHECK(a1.implicit_coeff == doctest::Approx(0.2 * 0.25 / 2));
  CHECK(a1.explicit_part.cwiseAbs().maxCoeff() == 0.0);

  h.push({DgField(dofs), {}});
  HistoryAction a2 = history_action(h, w, op, 2, 0.2);
  CHECK(a2.explicit_part.cwiseAbs().maxCoeff() == 0.0);
  CHECK(a2.implicit_coeff == doctest::Approx(0.2 * 0.25 / 2));

  std::mt19937 rng(9);
  History h2;
  const DgField r1 = oracle::random_field(dofs, rng);
  h2.push({r1, {}});
  HistoryAction a3 = history_action(h2, w, op, 2, 0.2);
  // eta * omega_21 * tau_1 * A r^1 with omega_21 = 1
  const Vector expect = 0.2 * 0.25 * (op.stiffness() * r1.coeffs);
  CHECK((a3.explicit_part - expect).cwiseAbs().maxCoeff() < 1e-12);
}
