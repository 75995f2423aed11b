#include "gbhe/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace gbhe {

double norm(Point a) { return std::hypot(a.x, a.y); }

Domain parse_domain(const std::string& name) {
  if (name == "unit-square") return Domain::UnitSquare;
  if (name == "l-shape") return Domain::LShape;
  if (name == "unit-interval-product") return Domain::UnitIntervalProduct;
  throw std::invalid_argument("unknown domain: " + name);
}

namespace {

std::atomic<std::uint64_t> next_family{1};

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<CellVertices> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)), family_(next_family++) {
  lineage_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) lineage_[c].root = static_cast<std::uint32_t>(c);
  build();
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<CellVertices> cells, std::vector<Lineage> lineage,
           std::uint64_t family)
    : vertices_(std::move(vertices)), cells_(std::move(cells)), lineage_(std::move(lineage)), family_(family) {
  build();
}

Mesh Mesh::with_longest_edge_tags(std::vector<Point> vertices, std::vector<CellVertices> cells) {
  for (auto& c : cells) {
    int best = 0;
    double best_len = -1.0;
    for (int i = 0; i < 3; ++i) {
      const double len = norm(vertices[c[(i + 1) % 3]] - vertices[c[(i + 2) % 3]]);
      if (len > best_len * (1.0 + 1e-12)) {
        best_len = len;
        best = i;
      }
    }
    std::rotate(c.begin(), c.begin() + best, c.end());
  }
  return Mesh(std::move(vertices), std::move(cells));
}

void Mesh::build() {
  const std::size_t nc = cells_.size();
  if (nc == 0) throw std::invalid_argument("mesh has no cells");
  cell_edges_.assign(nc, {-1, -1, -1});
  maps_.resize(nc);
  areas_.resize(nc);
  diameters_.resize(nc);
  edges_.clear();

  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(nc * 2);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& v = cells_[c];
    for (int i = 0; i < 3; ++i) {
      if (v[i] < 0 || static_cast<std::size_t>(v[i]) >= vertices_.size())
        throw std::invalid_argument("cell references a missing vertex");
    }
    const Point& p0 = vertices_[v[0]];
    const Point& p1 = vertices_[v[1]];
    const Point& p2 = vertices_[v[2]];
    const double a = signed_area(p0, p1, p2);
    if (!(a > 0.0)) throw std::invalid_argument("cell " + std::to_string(c) + " is not positively oriented");
    areas_[c] = a;
    diameters_[c] = std::max({norm(p1 - p0), norm(p2 - p1), norm(p0 - p2)});

    AffineMap& m = maps_[c];
    m.origin = p0;
    m.jac = {p1.x - p0.x, p2.x - p0.x, p1.y - p0.y, p2.y - p0.y};
    m.det = m.jac[0] * m.jac[3] - m.jac[1] * m.jac[2];
    m.inv_jac = {m.jac[3] / m.det, -m.jac[1] / m.det, -m.jac[2] / m.det, m.jac[0] / m.det};

    for (int i = 0; i < 3; ++i) {
      const int a0 = v[(i + 1) % 3], a1 = v[(i + 2) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a0, a1), static_cast<int>(edges_.size()));
      if (inserted) {
        Edge e;
        e.v = {a0, a1};
        e.cells = {static_cast<int>(c), -1};
        e.local = {i, -1};
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.cells[1] >= 0) throw std::invalid_argument("edge shared by more than two cells");
        e.cells[1] = static_cast<int>(c);
        e.local[1] = i;
      }
      cell_edges_[c][i] = it->second;
    }
  }

  edge_lengths_.resize(edges_.size());
  normals_.resize(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    // Stored vertex order is counter-clockwise for cells[0], so the
    // outward normal is the tangent rotated clockwise.
    const Point d = vertices_[edges_[e].v[1]] - vertices_[edges_[e].v[0]];
    const double len = norm(d);
    edge_lengths_[e] = len;
    normals_[e] = {d.y / len, -d.x / len};
  }
}

std::size_t Mesh::num_boundary_edges() const {
  return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.boundary(); }));
}

Point Mesh::centroid(int c) const {
  const auto& v = cells_[c];
  return (1.0 / 3.0) * (vertices_[v[0]] + vertices_[v[1]] + vertices_[v[2]]);
}

Point Mesh::edge_midpoint(int e) const {
  return 0.5 * (vertices_[edges_[e].v[0]] + vertices_[edges_[e].v[1]]);
}

double Mesh::min_angle(int c) const {
  const auto& v = cells_[c];
  double best = std::numbers::pi;
  for (int i = 0; i < 3; ++i) {
    const Point a = vertices_[v[(i + 1) % 3]] - vertices_[v[i]];
    const Point b = vertices_[v[(i + 2) % 3]] - vertices_[v[i]];
    best = std::min(best, std::acos(std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0)));
  }
  return best;
}

double Mesh::max_diameter() const { return *std::max_element(diameters_.begin(), diameters_.end()); }

double Mesh::total_area() const {
  double s = 0.0;
  for (double a : areas_) s += a;
  return s;
}

Mesh build_structured(Domain domain, int n) {
  if (n < 1) throw std::invalid_argument("build_structured: n must be >= 1");
  double x0 = 0.0, y0 = 0.0, width = 1.0;
  if (domain == Domain::LShape) {
    if (n % 2 != 0) throw std::invalid_argument("build_structured: l-shape needs an even n");
    x0 = y0 = -1.0;
    width = 2.0;
  }
  auto present = [&](int i, int j) {
    return domain != Domain::LShape || i < n / 2 || j < n / 2;
  };

  std::vector<int> id((n + 1) * (n + 1), -1);
  std::vector<Point> vertices;
  auto vert = [&](int i, int j) {
    int& slot = id[j * (n + 1) + i];
    if (slot < 0) {
      slot = static_cast<int>(vertices.size());
      vertices.push_back({x0 + width * i / n, y0 + width * j / n});
    }
    return slot;
  };

  std::vector<CellVertices> cells;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!present(i, j)) continue;
      const int p00 = vert(i, j), p10 = vert(i + 1, j), p01 = vert(i, j + 1), p11 = vert(i + 1, j + 1);
      cells.push_back({p10, p11, p00});
      cells.push_back({p01, p00, p11});
    }
  }
  return Mesh(std::move(vertices), std::move(cells));
}

struct MeshBuilder {
  static Mesh make(std::vector<Point> v, std::vector<CellVertices> c, std::vector<Lineage> l, std::uint64_t fam) {
    return Mesh(std::move(v), std::move(c), std::move(l), fam);
  }
};

RefineResult refine(const Mesh& mesh, std::span<const int> marked) {
  const int nc = static_cast<int>(mesh.num_cells());
  std::vector<char> edge_marked(mesh.num_edges(), 0);
  for (int c : marked) {
    if (c < 0 || c >= nc) throw std::out_of_range("refine: marked cell out of range");
    edge_marked[mesh.cell_edge(c, 0)] = 1;
  }

  // Closure: a cell with any marked edge must bisect its refinement edge.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int c = 0; c < nc; ++c) {
      const int re = mesh.cell_edge(c, 0);
      if (edge_marked[re]) continue;
      if (edge_marked[mesh.cell_edge(c, 1)] || edge_marked[mesh.cell_edge(c, 2)]) {
        edge_marked[re] = 1;
        changed = true;
      }
    }
  }

  std::vector<Point> vertices = mesh.vertices();
  std::vector<int> midpoint(mesh.num_edges(), -1);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    if (!edge_marked[e]) continue;
    midpoint[e] = static_cast<int>(vertices.size());
    vertices.push_back(mesh.edge_midpoint(static_cast<int>(e)));
  }
  std::unordered_map<std::uint64_t, int> mid_by_key;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e)
    if (midpoint[e] >= 0) mid_by_key[edge_key(mesh.edge(e).v[0], mesh.edge(e).v[1])] = midpoint[e];
  auto mid_of = [&](int a, int b) {
    auto it = mid_by_key.find(edge_key(a, b));
    return it == mid_by_key.end() ? -1 : it->second;
  };

  RefineResult out{mesh, {}};
  std::vector<CellVertices> cells;
  std::vector<Lineage> lineage;
  cells.reserve(nc * 2);
  lineage.reserve(nc * 2);
  out.children.resize(nc);

  auto child = [](const Lineage& p, int bit) {
    if (p.depth >= 63) throw std::runtime_error("refine: bisection depth limit reached");
    Lineage l = p;
    l.path |= static_cast<std::uint64_t>(bit) << p.depth;
    ++l.depth;
    return l;
  };

  // Bisection recurses at most twice per round: only the two parent edges
  // can be refinement edges of the children.
  auto bisect = [&](auto&& self, const CellVertices& v, const Lineage& lin, std::vector<int>& sink) -> void {
    const int m = mid_of(v[1], v[2]);
    if (m < 0) {
      sink.push_back(static_cast<int>(cells.size()));
      cells.push_back(v);
      lineage.push_back(lin);
      return;
    }
    self(self, CellVertices{m, v[0], v[1]}, child(lin, 0), sink);
    self(self, CellVertices{m, v[2], v[0]}, child(lin, 1), sink);
  };

  for (int c = 0; c < nc; ++c) bisect(bisect, mesh.cell(c), mesh.lineage(c), out.children[c]);

  out.mesh = MeshBuilder::make(std::move(vertices), std::move(cells), std::move(lineage), mesh.family());
  return out;
}

void write_mesh_text(const Mesh& mesh, std::ostream& os) {
  os.precision(17);
  os << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  for (const auto& p : mesh.vertices()) os << p.x << ' ' << p.y << '\n';
  for (const auto& c : mesh.cells()) os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
}

Mesh read_mesh_text(std::istream& is) {
  std::size_t nv = 0, nc = 0;
  if (!(is >> nv >> nc)) throw std::runtime_error("mesh text: bad header");
  std::vector<Point> v(nv);
  for (auto& p : v)
    if (!(is >> p.x >> p.y)) throw std::runtime_error("mesh text: truncated vertex list");
  std::vector<CellVertices> c(nc);
  for (auto& t : c)
    if (!(is >> t[0] >> t[1] >> t[2])) throw std::runtime_error("mesh text: truncated cell list");
  return Mesh(std::move(v), std::move(c));
}

}  // namespace gbhe
