#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gbhe {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double norm(Point a);

enum class Domain { UnitSquare, LShape, UnitIntervalProduct };

Domain parse_domain(const std::string& name);

/// Triangle as three vertex indices. v[0] is the newest vertex; the
/// refinement edge is (v[1], v[2]).
using CellVertices = std::array<int, 3>;

/// An undirected edge. cells[0] is the lower-indexed incident cell and the
/// stored normal points out of it. cells[1] is -1 on the boundary.
struct Edge {
  std::array<int, 2> v{};
  std::array<int, 2> cells{-1, -1};
  std::array<int, 2> local{-1, -1};  // local edge index inside each incident cell
  bool boundary() const { return cells[1] < 0; }
};

/// Position of a cell inside the bisection forest of its initial mesh.
/// Two cells of meshes with the same family either coincide, are nested,
/// or are disjoint; the key (root, depth, path) decides which.
struct Lineage {
  std::uint32_t root = 0;
  std::uint32_t depth = 0;
  std::uint64_t path = 0;  // bit d = child index chosen at bisection level d
};

/// Affine map x = origin + J * xi from the reference triangle
/// (0,0), (1,0), (0,1) onto a cell.
struct AffineMap {
  Point origin;
  std::array<double, 4> jac{};      // row-major J
  std::array<double, 4> inv_jac{};  // row-major J^{-1}
  double det = 0.0;

  Point map(double xi, double eta) const {
    return {origin.x + jac[0] * xi + jac[1] * eta, origin.y + jac[2] * xi + jac[3] * eta};
  }
  std::array<double, 2> inverse(Point p) const {
    const double dx = p.x - origin.x, dy = p.y - origin.y;
    return {inv_jac[0] * dx + inv_jac[1] * dy, inv_jac[2] * dx + inv_jac[3] * dy};
  }
  /// Physical gradient from a reference gradient: J^{-T} g.
  std::array<double, 2> grad(double gxi, double geta) const {
    return {inv_jac[0] * gxi + inv_jac[2] * geta, inv_jac[1] * gxi + inv_jac[3] * geta};
  }
};

/// Conforming triangulation with edge topology and cached geometry.
/// Immutable after construction.
class Mesh {
 public:
  /// Builds topology and validates: every cell must be positively oriented
  /// and every edge shared by at most two cells.
  Mesh(std::vector<Point> vertices, std::vector<CellVertices> cells);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_boundary_edges() const;

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int i) const { return vertices_[i]; }
  const CellVertices& cell(int c) const { return cells_[c]; }
  const std::vector<CellVertices>& cells() const { return cells_; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Edge opposite local vertex i of cell c.
  int cell_edge(int c, int i) const { return cell_edges_[c][i]; }

  const AffineMap& map(int c) const { return maps_[c]; }
  double area(int c) const { return areas_[c]; }
  /// Longest side of the cell.
  double diameter(int c) const { return diameters_[c]; }
  double edge_length(int e) const { return edge_lengths_[e]; }
  /// Unit normal of edge e, outward from edge(e).cells[0].
  Point edge_normal(int e) const { return normals_[e]; }
  Point centroid(int c) const;
  Point edge_midpoint(int e) const;
  double min_angle(int c) const;
  double max_diameter() const;
  double total_area() const;

  const Lineage& lineage(int c) const { return lineage_[c]; }
  std::uint32_t generation(int c) const { return lineage_[c].depth; }
  /// Identifier shared by all meshes refined from the same initial mesh.
  std::uint64_t family() const { return family_; }

  /// Reorders each cell so its refinement edge is its longest edge.
  /// Only meaningful for initial meshes (resets the lineage).
  static Mesh with_longest_edge_tags(std::vector<Point> vertices, std::vector<CellVertices> cells);

 private:
  friend struct MeshBuilder;
  Mesh(std::vector<Point> vertices, std::vector<CellVertices> cells, std::vector<Lineage> lineage,
       std::uint64_t family);
  void build();

  std::vector<Point> vertices_;
  std::vector<CellVertices> cells_;
  std::vector<Lineage> lineage_;
  std::uint64_t family_ = 0;

  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<AffineMap> maps_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  std::vector<double> edge_lengths_;
  std::vector<Point> normals_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Structured triangulation: each square of an n x n grid split into two
/// triangles along its (0,0)-(1,1) diagonal. The L-shape is (-1,1)^2 minus
/// [0,1)^2 with n squares per side of the bounding box (n must be even).
Mesh build_structured(Domain domain, int n);

struct RefineResult {
  Mesh mesh;
  /// children[old] lists the new cells covering old cell `old`; unrefined
  /// cells map to a single entry.
  std::vector<std::vector<int>> children;
};

/// Newest-vertex bisection of the marked cells plus conforming closure.
RefineResult refine(const Mesh& mesh, std::span<const int> marked);

/// Text format: "nv nc", nv lines "x y", nc lines "i j k" (0-based).
void write_mesh_text(const Mesh& mesh, std::ostream& os);
Mesh read_mesh_text(std::istream& is);

}  // namespace gbhe
