#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gbhe/mesh.hpp"

namespace gbhe {

/// Quadrature on the reference triangle (points in (xi, eta)) or on the
/// unit interval [0,1] (points[i][0] only, points[i][1] = 0).
struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int degree = 0;
  std::size_t size() const { return weights.size(); }
};

/// Highest exactness degree served by cell_quadrature / edge_quadrature.
inline constexpr int kMaxQuadratureDegree = 40;

/// Rules are cached; the returned references stay valid for the program's
/// lifetime. Degrees 0/1 give the centroid rule and degree 2 the 3-point
/// interior rule; higher degrees use a collapsed Gauss-Jacobi x Gauss-Legendre
/// product, which is exact but not symmetric.
const QuadratureRule& cell_quadrature(int degree);
/// Gauss-Legendre on [0,1] with ceil((degree+1)/2) points.
const QuadratureRule& edge_quadrature(int degree);

int local_dofs(int degree);

struct BasisEval {
  int n = 0;
  std::array<double, 6> value{};
  std::array<std::array<double, 2>, 6> grad{};  // reference gradients
};

/// Lagrange basis on the reference triangle. P2 node order: the three
/// vertices, then midpoints (0.5,0), (0.5,0.5), (0,0.5).
BasisEval eval_basis(int degree, double xi, double eta);
std::array<double, 2> reference_node(int degree, int i);
/// Constant reference Hessian (d_xixi, d_xieta, d_etaeta) of basis i.
std::array<double, 3> basis_hessian(int degree, int i);

/// Basis values and reference gradients tabulated at the points of a cell
/// rule; entry (q, i) is at q * n + i.
struct CellTable {
  const QuadratureRule* rule = nullptr;
  int n = 0;
  std::vector<double> val, dxi, deta;
};

/// Tabulation along each local edge of a cell. side = 2 * local_edge + flip;
/// flip = 0 walks the edge from local vertex (i+1)%3 to (i+2)%3.
struct EdgeTable {
  const QuadratureRule* rule = nullptr;
  int n = 0;
  std::array<std::vector<double>, 6> val, dxi, deta;
};

const CellTable& cell_table(int degree, int qdeg);
const EdgeTable& edge_table(int degree, int qdeg);

/// Reference coordinates of the point at parameter s along edge e (from
/// edge(e).v[0] to edge(e).v[1]) as seen from cell c.
std::array<double, 2> edge_reference_point(const Mesh& mesh, int c, int e, double s);
/// Table side index (see EdgeTable) for cell c on edge e.
int edge_side(const Mesh& mesh, int c, int e);

/// Fully discontinuous numbering: dof = cell * n_loc + local.
class DofMap {
 public:
  DofMap(MeshPtr mesh, int degree);
  const Mesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int n_loc() const { return n_loc_; }
  int size() const { return n_loc_ * static_cast<int>(mesh_->num_cells()); }
  int dof(int cell, int local) const { return cell * n_loc_ + local; }
  bool operator==(const DofMap& o) const { return mesh_ == o.mesh_ && degree_ == o.degree_; }
  bool operator!=(const DofMap& o) const { return !(*this == o); }

 private:
  MeshPtr mesh_;
  int degree_;
  int n_loc_;
};

using SpaceFn = std::function<double(double, double)>;

struct DgField {
  DofMap dofs;
  Eigen::VectorXd coeffs;

  explicit DgField(DofMap d) : dofs(std::move(d)), coeffs(Eigen::VectorXd::Zero(dofs.size())) {}
  DgField(DofMap d, Eigen::VectorXd c);

  auto local(int cell) const { return coeffs.segment(cell * dofs.n_loc(), dofs.n_loc()); }
  auto local(int cell) { return coeffs.segment(cell * dofs.n_loc(), dofs.n_loc()); }
};

struct PointValue {
  double value = 0.0;
  std::array<double, 2> grad{};
};

PointValue evaluate(const DgField& u, int cell, double xi, double eta);
/// Locates the containing cell by brute force; for tests and probes only.
PointValue evaluate_at(const DgField& u, Point p);

DgField l2_project(const SpaceFn& f, const DofMap& dofs, int qdeg = -1);
/// Nodal interpolation at the Lagrange nodes.
DgField interpolate(const SpaceFn& f, const DofMap& dofs);

double l2_norm(const DgField& u);
double l2_error(const DgField& u, const SpaceFn& exact, int qdeg);

}  // namespace gbhe
