#include <doctest.h>

#include <cmath>
#include <limits>

#include "gbhe/adapt.hpp"
#include "gbhe/harness.hpp"

using namespace gbhe;

TEST_CASE("maximum marking") {
  const std::vector<double> z{3, 1, 2};
  CHECK(mark_max(z, 0.5).cells == std::vector<int>{0, 2});
  CHECK(mark_max(z, 0.999).cells == std::vector<int>{0});
  const std::vector<double> eq(5, 0.7);
  CHECK(mark_max(eq, 0.5).cells.size() == 5);
  const std::vector<double> ties{1, 4, 4, 0.5};
  CHECK(mark_max(ties, 0.9).cells == std::vector<int>{1, 2});

  const Marking none = mark_max(std::vector<double>(4, 0.0), 0.5);
  CHECK(none.converged);
  CHECK(none.cells.empty());

  CHECK_THROWS(mark_max(std::vector<double>{}, 0.5));
  CHECK_THROWS(mark_max(z, 0.0));
  CHECK_THROWS(mark_max(z, 1.0));
  CHECK_THROWS(mark_max(std::vector<double>{1.0, -1.0}, 0.5));
  CHECK_THROWS(mark_max(std::vector<double>{1.0, std::nan("")}, 0.5));
}

TEST_CASE("adaptive loop stops at the tolerance") {
  const Problem pr = make_problem("sine", ModelParams{});
  auto mesh = std::make_shared<const Mesh>(build_structured(Domain::UnitSquare, 4));
  AdaptConfig cfg;
  cfg.tol = 1e3;
  CHECK(adaptive_stationary(pr, mesh, 1, cfg).size() == 1);

  cfg.tol = 0.0;
  cfg.max_refinements = 3;
  const auto levels = adaptive_stationary(pr, mesh, 1, cfg);
  CHECK(levels.size() == 4);
  for (std::size_t i = 1; i < levels.size(); ++i) CHECK(levels[i].mesh->num_cells() > levels[i - 1].mesh->num_cells());
  CHECK(levels.back().marked.empty());

  cfg.max_refinements = 50;
  cfg.max_dofs = 400;
  const auto capped = adaptive_stationary(pr, mesh, 1, cfg);
  for (const auto& lv : capped) CHECK(DofMap(lv.mesh, 1).size() <= 400);

  AdaptConfig bad;
  bad.mu = 1.5;
  CHECK_THROWS(adaptive_stationary(pr, mesh, 1, bad));
}

TEST_CASE("adaptive and uniform rates agree for a smooth solution") {
  const Problem pr = make_problem("sine", ModelParams{});
  AdaptConfig cfg;
  cfg.mu = 0.3;
  cfg.max_refinements = 30;
  cfg.max_dofs = 6000;
  const auto lv = adaptive_stationary(pr, std::make_shared<const Mesh>(build_structured(Domain::UnitSquare, 4)), 1, cfg);
  REQUIRE(lv.size() >= 4);
  const auto& a = lv[lv.size() / 2];
  const auto& b = lv.back();
  const double r = rate_dofs(a.error.dg, b.error.dg, DofMap(a.mesh, 1).size(), DofMap(b.mesh, 1).size());
  CHECK(r == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("transient loop without refinement matches the fixed-mesh run") {
  ModelParams p;
  const Problem pr = make_problem("sine-transient", p);
  auto mesh = std::make_shared<const Mesh>(build_structured(Domain::UnitSquare, 4));
  const TimeGrid grid = TimeGrid::uniform(0.5, 5);
  TransientAdaptConfig cfg;
  cfg.adapt.max_refinements = 0;
  const AdaptiveTransientResult a = adaptive_transient(pr, grid, mesh, 1, cfg);
  const TransientRun r = run_transient(pr, mesh, 1, grid, {});
  CHECK((a.final->coeffs - r.final->coeffs).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(a.estimate.combined() == doctest::Approx(r.estimate.combined()).epsilon(1e-12));
  for (const auto& s : a.steps) CHECK(s.mesh == mesh);
}

TEST_CASE("adaptive transient refines where the bump is") {
  ModelParams p;
  p.eta = 0.0;
  const Problem pr = make_problem("moving-bump", p);
  auto mesh = std::make_shared<const Mesh>(build_structured(Domain::UnitSquare, 4));
  TransientAdaptConfig cfg;
  cfg.adapt.max_refinements = 4;
  const AdaptiveTransientResult a = adaptive_transient(pr, TimeGrid::uniform(0.3, 3), mesh, 1, cfg);
  REQUIRE(a.steps.size() == 3);
  for (const auto& s : a.steps) {
    double near = 0, total = 0;
    for (const auto& [m, cells] : s.marks)
      for (int c : cells) {
        total += m->area(c);
        if (norm(m->centroid(c) - Point{bump_center(s.t), bump_center(s.t)}) <= 0.3) near += m->area(c);
      }
    REQUIRE(total > 0);
    CHECK(near / total > 0.5);
  }
}
