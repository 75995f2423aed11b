#include "gbhe/dgspace.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace gbhe {

int local_dofs(int degree) {
  if (degree != 1 && degree != 2) throw std::invalid_argument("unsupported polynomial degree " + std::to_string(degree));
  return (degree + 1) * (degree + 2) / 2;
}

BasisEval eval_basis(int degree, double xi, double eta) {
  BasisEval b;
  b.n = local_dofs(degree);
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  // Reference gradients of the barycentrics.
  constexpr std::array<double, 2> g0{-1.0, -1.0}, g1{1.0, 0.0}, g2{0.0, 1.0};
  if (degree == 1) {
    b.value = {l0, l1, l2};
    b.grad[0] = g0;
    b.grad[1] = g1;
    b.grad[2] = g2;
    return b;
  }
  const double l[3] = {l0, l1, l2};
  const std::array<double, 2> g[3] = {g0, g1, g2};
  for (int i = 0; i < 3; ++i) {
    b.value[i] = l[i] * (2.0 * l[i] - 1.0);
    for (int d = 0; d < 2; ++d) b.grad[i][d] = (4.0 * l[i] - 1.0) * g[i][d];
  }
  constexpr int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int m = 0; m < 3; ++m) {
    const int a = pairs[m][0], c = pairs[m][1];
    b.value[3 + m] = 4.0 * l[a] * l[c];
    for (int d = 0; d < 2; ++d) b.grad[3 + m][d] = 4.0 * (g[a][d] * l[c] + l[a] * g[c][d]);
  }
  return b;
}

std::array<double, 2> reference_node(int degree, int i) {
  static constexpr std::array<double, 2> nodes[6] = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};
  if (i < 0 || i >= local_dofs(degree)) throw std::out_of_range("reference_node");
  return nodes[i];
}

std::array<double, 3> basis_hessian(int degree, int i) {
  if (degree == 1) return {0.0, 0.0, 0.0};
  if (degree != 2) throw std::invalid_argument("unsupported polynomial degree");
  // Products of constant barycentric gradients.
  constexpr std::array<double, 2> g[3] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  auto outer = [&](int a, int c, double s) {
    return std::array<double, 3>{s * g[a][0] * g[c][0], s * 0.5 * (g[a][0] * g[c][1] + g[a][1] * g[c][0]),
                                 s * g[a][1] * g[c][1]};
  };
  if (i < 3) return outer(i, i, 4.0);
  constexpr int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  auto h = outer(pairs[i - 3][0], pairs[i - 3][1], 8.0);
  return h;
}

namespace {

void tabulate(int degree, const std::array<double, 2>& p, std::vector<double>& val, std::vector<double>& dxi,
              std::vector<double>& deta) {
  const BasisEval b = eval_basis(degree, p[0], p[1]);
  for (int i = 0; i < b.n; ++i) {
    val.push_back(b.value[i]);
    dxi.push_back(b.grad[i][0]);
    deta.push_back(b.grad[i][1]);
  }
}

constexpr std::array<double, 2> kRefVertex[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};

}  // namespace

const CellTable& cell_table(int degree, int qdeg) {
  static std::map<std::pair<int, int>, std::unique_ptr<CellTable>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[{degree, qdeg}];
  if (!slot) {
    slot = std::make_unique<CellTable>();
    slot->rule = &cell_quadrature(qdeg);
    slot->n = local_dofs(degree);
    for (const auto& p : slot->rule->points) tabulate(degree, p, slot->val, slot->dxi, slot->deta);
  }
  return *slot;
}

const EdgeTable& edge_table(int degree, int qdeg) {
  static std::map<std::pair<int, int>, std::unique_ptr<EdgeTable>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[{degree, qdeg}];
  if (!slot) {
    slot = std::make_unique<EdgeTable>();
    slot->rule = &edge_quadrature(qdeg);
    slot->n = local_dofs(degree);
    for (int i = 0; i < 3; ++i) {
      for (int flip = 0; flip < 2; ++flip) {
        const int side = 2 * i + flip;
        auto a = kRefVertex[(i + 1) % 3], b = kRefVertex[(i + 2) % 3];
        if (flip) std::swap(a, b);
        for (const auto& q : slot->rule->points) {
          const double s = q[0];
          const std::array<double, 2> p{(1.0 - s) * a[0] + s * b[0], (1.0 - s) * a[1] + s * b[1]};
          tabulate(degree, p, slot->val[side], slot->dxi[side], slot->deta[side]);
        }
      }
    }
  }
  return *slot;
}

int edge_side(const Mesh& mesh, int c, int e) {
  const Edge& ed = mesh.edge(e);
  const int i = (ed.cells[0] == c) ? ed.local[0] : ed.local[1];
  if (i < 0 || mesh.cell_edge(c, i) != e) throw std::invalid_argument("edge_side: cell not incident to edge");
  const int flip = mesh.cell(c)[(i + 1) % 3] == ed.v[0] ? 0 : 1;
  return 2 * i + flip;
}

std::array<double, 2> edge_reference_point(const Mesh& mesh, int c, int e, double s) {
  const int side = edge_side(mesh, c, e);
  const int i = side / 2;
  auto a = kRefVertex[(i + 1) % 3], b = kRefVertex[(i + 2) % 3];
  if (side % 2) std::swap(a, b);
  return {(1.0 - s) * a[0] + s * b[0], (1.0 - s) * a[1] + s * b[1]};
}

DofMap::DofMap(MeshPtr mesh, int degree) : mesh_(std::move(mesh)), degree_(degree), n_loc_(local_dofs(degree)) {
  if (!mesh_) throw std::invalid_argument("DofMap: null mesh");
}

DgField::DgField(DofMap d, Eigen::VectorXd c) : dofs(std::move(d)), coeffs(std::move(c)) {
  if (coeffs.size() != dofs.size()) throw std::invalid_argument("DgField: coefficient length does not match dofmap");
}

PointValue evaluate(const DgField& u, int cell, double xi, double eta) {
  if (cell < 0 || cell >= static_cast<int>(u.dofs.mesh().num_cells())) throw std::out_of_range("evaluate: cell id");
  const BasisEval b = eval_basis(u.dofs.degree(), xi, eta);
  const auto c = u.local(cell);
  PointValue out;
  double gx = 0.0, gy = 0.0;
  for (int i = 0; i < b.n; ++i) {
    out.value += c[i] * b.value[i];
    gx += c[i] * b.grad[i][0];
    gy += c[i] * b.grad[i][1];
  }
  out.grad = u.dofs.mesh().map(cell).grad(gx, gy);
  return out;
}

PointValue evaluate_at(const DgField& u, Point p) {
  const Mesh& mesh = u.dofs.mesh();
  int best = -1;
  double best_out = std::numeric_limits<double>::infinity();
  std::array<double, 2> best_ref{};
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto r = mesh.map(c).inverse(p);
    const double outside = std::max({-r[0], -r[1], r[0] + r[1] - 1.0});
    if (outside < best_out) {
      best_out = outside;
      best = c;
      best_ref = r;
      if (outside <= 0.0) break;
    }
  }
  return evaluate(u, best, best_ref[0], best_ref[1]);
}

DgField l2_project(const SpaceFn& f, const DofMap& dofs, int qdeg) {
  if (qdeg < 0) qdeg = 2 * dofs.degree() + 2;
  const CellTable& t = cell_table(dofs.degree(), qdeg);
  const Mesh& mesh = dofs.mesh();
  const int n = t.n;
  // Mass on the reference cell; the physical one is a multiple of it.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < t.rule->size(); ++q)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) += t.rule->weights[q] * t.val[q * n + i] * t.val[q * n + j];
  const Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw std::logic_error("l2_project: singular reference mass");

  DgField out(dofs);
  Eigen::VectorXd rhs(n);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    rhs.setZero();
    const AffineMap& map = mesh.map(c);
    for (std::size_t q = 0; q < t.rule->size(); ++q) {
      const Point x = map.map(t.rule->points[q][0], t.rule->points[q][1]);
      const double fw = f(x.x, x.y) * t.rule->weights[q];
      for (int i = 0; i < n; ++i) rhs[i] += fw * t.val[q * n + i];
    }
    out.local(c) = llt.solve(rhs);
  }
  return out;
}

DgField interpolate(const SpaceFn& f, const DofMap& dofs) {
  DgField out(dofs);
  const Mesh& mesh = dofs.mesh();
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    for (int i = 0; i < dofs.n_loc(); ++i) {
      const auto r = reference_node(dofs.degree(), i);
      const Point x = mesh.map(c).map(r[0], r[1]);
      out.coeffs[dofs.dof(c, i)] = f(x.x, x.y);
    }
  }
  return out;
}

double l2_error(const DgField& u, const SpaceFn& exact, int qdeg) {
  const CellTable& t = cell_table(u.dofs.degree(), qdeg);
  const Mesh& mesh = u.dofs.mesh();
  const int n = t.n;
  double s = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto uc = u.local(c);
    const AffineMap& map = mesh.map(c);
    double local = 0.0;
    for (std::size_t q = 0; q < t.rule->size(); ++q) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += uc[i] * t.val[q * n + i];
      const Point x = map.map(t.rule->points[q][0], t.rule->points[q][1]);
      const double e = exact ? v - exact(x.x, x.y) : v;
      local += t.rule->weights[q] * e * e;
    }
    s += local * map.det;
  }
  return std::sqrt(s);
}

double l2_norm(const DgField& u) { return l2_error(u, nullptr, 2 * u.dofs.degree()); }

}  // namespace gbhe
