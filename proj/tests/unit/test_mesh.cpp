#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "gbhe/mesh.hpp"

using namespace gbhe;

namespace {

// A vertex strictly inside an edge of some cell means a hanging node.
bool conforming(const Mesh& m) {
  for (const Edge& e : m.edges()) {
    const Point a = m.vertex(e.v[0]), b = m.vertex(e.v[1]);
    const double len = norm(b - a);
    for (int v = 0; v < static_cast<int>(m.num_vertices()); ++v) {
      if (v == e.v[0] || v == e.v[1]) continue;
      const Point p = m.vertex(v);
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      const double s = dot(p - a, b - a) / (len * len);
      if (std::abs(cross) < 1e-12 * len && s > 1e-12 && s < 1 - 1e-12) return false;
    }
  }
  return true;
}

double boundary_length(const Mesh& m) {
  double s = 0;
  for (int e = 0; e < static_cast<int>(m.num_edges()); ++e)
    if (m.edge(e).boundary()) s += m.edge_length(e);
  return s;
}

}  // namespace

TEST_CASE("structured meshes") {
  Mesh m1 = build_structured(Domain::UnitSquare, 1);
  CHECK(m1.num_vertices() == 4);
  CHECK(m1.num_cells() == 2);
  CHECK(m1.num_edges() == 5);
  CHECK(m1.num_boundary_edges() == 4);

  Mesh m2 = build_structured(Domain::UnitSquare, 2);
  CHECK(m2.num_vertices() == 9);
  CHECK(m2.num_cells() == 8);

  Mesh l2 = build_structured(Domain::LShape, 2);
  CHECK(l2.num_cells() == 6);
  CHECK(l2.total_area() == doctest::Approx(3.0).epsilon(1e-14));
  for (int c = 0; c < 6; ++c) {
    const Point p = l2.centroid(c);
    CHECK_FALSE((p.x > 0 && p.y > 0));
  }
  CHECK(boundary_length(l2) == doctest::Approx(8.0));

  CHECK_THROWS(build_structured(Domain::UnitSquare, 0));
  CHECK_THROWS(build_structured(Domain::LShape, 3));
}

TEST_CASE("geometry of a single reference triangle") {
  Mesh m({{0, 0}, {1, 0}, {0, 1}}, {CellVertices{0, 1, 2}});
  CHECK(m.diameter(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(m.area(0) == doctest::Approx(0.5).epsilon(1e-15));
  bool found = false;
  for (int e = 0; e < 3; ++e) {
    const Edge& ed = m.edge(e);
    const Point a = m.vertex(ed.v[0]), b = m.vertex(ed.v[1]);
    if (a.x == 0 && b.x == 0) {
      found = true;
      CHECK(m.edge_length(e) == doctest::Approx(1.0));
      CHECK(std::abs(m.edge_normal(e).x) == doctest::Approx(1.0));
      CHECK(m.edge_normal(e).y == doctest::Approx(0.0));
      // outward from the triangle
      CHECK(m.edge_normal(e).x < 0);
    }
  }
  CHECK(found);
  CHECK(build_structured(Domain::UnitSquare, 4).max_diameter() == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-14));
}

TEST_CASE("mesh rejects clockwise cells") {
  CHECK_THROWS(Mesh({{0, 0}, {1, 0}, {0, 1}}, {CellVertices{0, 2, 1}}));
}

TEST_CASE("refinement of the two-cell square") {
  Mesh m = build_structured(Domain::UnitSquare, 1);
  SUBCASE("mark all") {
    std::vector<int> all{0, 1};
    RefineResult r = refine(m, all);
    CHECK(r.mesh.num_cells() == 4);
    CHECK(conforming(r.mesh));
    CHECK(r.children[0].size() == 2);
  }
  SUBCASE("mark one: closure bisects the neighbour") {
    std::vector<int> one{0};
    RefineResult r = refine(m, one);
    CHECK(conforming(r.mesh));
    CHECK(r.mesh.num_cells() >= 4);
    CHECK(r.mesh.total_area() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("empty set keeps the mesh") {
    RefineResult r = refine(m, std::vector<int>{});
    REQUIRE(r.mesh.num_cells() == m.num_cells());
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < 3; ++i) {
        CHECK(r.mesh.vertex(r.mesh.cell(c)[i]).x == m.vertex(m.cell(c)[i]).x);
        CHECK(r.mesh.vertex(r.mesh.cell(c)[i]).y == m.vertex(m.cell(c)[i]).y);
      }
  }
}

TEST_CASE("random refinement keeps the mesh valid") {
  std::mt19937 rng(7);
  for (Domain dom : {Domain::UnitSquare, Domain::LShape}) {
    Mesh m = build_structured(dom, 2);
    const double area = m.total_area();
    double min_angle0 = 10;
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) min_angle0 = std::min(min_angle0, m.min_angle(c));
    for (int round = 0; round < 100; ++round) {
      std::uniform_int_distribution<int> pick(0, static_cast<int>(m.num_cells()) - 1);
      std::set<int> marked{pick(rng), pick(rng)};
      RefineResult r = refine(m, std::vector<int>(marked.begin(), marked.end()));
      CHECK(r.mesh.num_cells() > m.num_cells());
      std::size_t covered = 0;
      for (const auto& ch : r.children) covered += ch.size();
      CHECK(covered == r.mesh.num_cells());
      m = std::move(r.mesh);
    }
    CHECK(conforming(m));
    CHECK(m.total_area() == doctest::Approx(area).epsilon(1e-12));
    // newest-vertex bisection produces finitely many similarity classes
    double min_angle = 10;
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) min_angle = std::min(min_angle, m.min_angle(c));
    CHECK(min_angle >= 0.5 * min_angle0);
    for (const Edge& e : m.edges()) CHECK(e.cells[0] >= 0);
  }
}

TEST_CASE("mesh text round trip") {
  Mesh m = refine(build_structured(Domain::UnitSquare, 2), std::vector<int>{3}).mesh;
  std::stringstream ss;
  write_mesh_text(m, ss);
  Mesh back = read_mesh_text(ss);
  REQUIRE(back.num_cells() == m.num_cells());
  REQUIRE(back.num_vertices() == m.num_vertices());
  for (int v = 0; v < static_cast<int>(m.num_vertices()); ++v) {
    CHECK(back.vertex(v).x == m.vertex(v).x);
    CHECK(back.vertex(v).y == m.vertex(v).y);
  }
}
