#include "gbhe/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gbhe {

void ModelParams::validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be > 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
  if (delta < 1 || delta > 3) throw std::invalid_argument("delta must be 1, 2 or 3");
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
  if (penalty < 0.0) throw std::invalid_argument("penalty must be > 0 (0 selects the default)");
}

double reaction(double u, double gamma, int delta) {
  const double ud = std::pow(u, delta);
  return (1.0 + gamma) * ud * u - gamma * u - ud * ud * u;
}

double reaction_derivative(double u, double gamma, int delta) {
  const double ud = std::pow(u, delta);
  return (1.0 + gamma) * (delta + 1) * ud - gamma - (2 * delta + 1) * ud * ud;
}

int assembly_degree(int k, int delta) { return std::max(2 * k + 2 * delta + 1, (2 * delta + 2) * k); }
int edge_assembly_degree(int k, int delta) { return 2 * k + 2 * delta + 1; }

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Physical gradients of all basis functions at all points of a table.
void physical_grads(const AffineMap& m, const std::vector<double>& dxi, const std::vector<double>& deta,
                    std::vector<double>& gx, std::vector<double>& gy) {
  gx.resize(dxi.size());
  gy.resize(dxi.size());
  for (std::size_t i = 0; i < dxi.size(); ++i) {
    const auto g = m.grad(dxi[i], deta[i]);
    gx[i] = g[0];
    gy[i] = g[1];
  }
}

SparseMatrix from_triplets(int n, const Triplets& t) {
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

struct Side {
  int cell;
  int table_side;
};

std::array<Side, 2> sides_of(const Mesh& mesh, int e) {
  const Edge& ed = mesh.edge(e);
  std::array<Side, 2> s{Side{ed.cells[0], edge_side(mesh, ed.cells[0], e)}, Side{-1, -1}};
  if (!ed.boundary()) s[1] = Side{ed.cells[1], edge_side(mesh, ed.cells[1], e)};
  return s;
}

void require_same(const DofMap& a, const DofMap& b) {
  if (a != b) throw std::invalid_argument("fields live on different dofmaps");
}

}  // namespace

SparseMatrix assemble_mass(const DofMap& dofs) {
  const CellTable& t = cell_table(dofs.degree(), 2 * dofs.degree());
  const int n = t.n;
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < t.rule->size(); ++q)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ref(i, j) += t.rule->weights[q] * t.val[q * n + i] * t.val[q * n + j];
  Triplets trip;
  const Mesh& mesh = dofs.mesh();
  trip.reserve(mesh.num_cells() * n * n);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const double det = mesh.map(c).det;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) trip.emplace_back(dofs.dof(c, i), dofs.dof(c, j), det * ref(i, j));
  }
  return from_triplets(dofs.size(), trip);
}

SparseMatrix assemble_adg(const DofMap& dofs, double penalty) {
  if (!(penalty > 0.0)) throw std::invalid_argument("assemble_adg: penalty must be positive");
  const Mesh& mesh = dofs.mesh();
  const int k = dofs.degree();
  const CellTable& ct = cell_table(k, std::max(1, 2 * k - 2));
  const EdgeTable& et = edge_table(k, 2 * k);
  const int n = ct.n;
  Triplets trip;
  trip.reserve(mesh.num_cells() * n * n * 7);
  std::vector<double> gx, gy;

  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const AffineMap& m = mesh.map(c);
    physical_grads(m, ct.dxi, ct.deta, gx, gy);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t q = 0; q < ct.rule->size(); ++q)
          s += ct.rule->weights[q] * (gx[q * n + i] * gx[q * n + j] + gy[q * n + i] * gy[q * n + j]);
        trip.emplace_back(dofs.dof(c, i), dofs.dof(c, j), s * m.det);
      }
    }
  }

  const std::size_t nq = et.rule->size();
  std::array<std::vector<double>, 2> val, dn;
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const auto sides = sides_of(mesh, e);
    const bool interior = sides[1].cell >= 0;
    const int ns = interior ? 2 : 1;
    const Point nrm = mesh.edge_normal(e);
    const double h = mesh.edge_length(e);
    const double avg = interior ? 0.5 : 1.0;
    const double sgn[2] = {1.0, -1.0};
    for (int a = 0; a < ns; ++a) {
      const int side = sides[a].table_side;
      physical_grads(mesh.map(sides[a].cell), et.dxi[side], et.deta[side], gx, gy);
      val[a] = et.val[side];
      dn[a].resize(gx.size());
      for (std::size_t i = 0; i < gx.size(); ++i) dn[a][i] = gx[i] * nrm.x + gy[i] * nrm.y;
    }
    for (int a = 0; a < ns; ++a) {
      for (int b = 0; b < ns; ++b) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t q = 0; q < nq; ++q) {
              const double w = et.rule->weights[q] * h;
              const double vi = val[a][q * n + i], uj = val[b][q * n + j];
              s += w * (-avg * dn[b][q * n + j] * sgn[a] * vi - avg * dn[a][q * n + i] * sgn[b] * uj +
                        penalty / h * sgn[a] * sgn[b] * vi * uj);
            }
            trip.emplace_back(dofs.dof(sides[a].cell, i), dofs.dof(sides[b].cell, j), s);
          }
        }
      }
    }
  }
  return from_triplets(dofs.size(), trip);
}

Vector dirichlet_lift(const DofMap& dofs, double penalty, const SpaceFn& g, int qdeg) {
  const Mesh& mesh = dofs.mesh();
  Vector out = Vector::Zero(dofs.size());
  if (!g) return out;
  const int k = dofs.degree();
  if (qdeg < 0) qdeg = 2 * k + 6;
  const EdgeTable& et = edge_table(k, qdeg);
  const int n = et.n;
  std::vector<double> gx, gy;
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& ed = mesh.edge(e);
    if (!ed.boundary()) continue;
    const int c = ed.cells[0];
    const int side = edge_side(mesh, c, e);
    physical_grads(mesh.map(c), et.dxi[side], et.deta[side], gx, gy);
    const Point nrm = mesh.edge_normal(e);
    const double h = mesh.edge_length(e);
    const Point p0 = mesh.vertex(ed.v[0]), p1 = mesh.vertex(ed.v[1]);
    for (std::size_t q = 0; q < et.rule->size(); ++q) {
      const double s = et.rule->points[q][0];
      const Point x = (1.0 - s) * p0 + s * p1;
      const double gw = g(x.x, x.y) * et.rule->weights[q] * h;
      for (int i = 0; i < n; ++i) {
        const double dnv = gx[q * n + i] * nrm.x + gy[q * n + i] * nrm.y;
        out[dofs.dof(c, i)] += gw * (-dnv + penalty / h * et.val[side][q * n + i]);
      }
    }
  }
  return out;
}

double bdg_form(const DgField& w, const DgField& u, const DgField& v, int delta, int qdeg) {
  require_same(w.dofs, u.dofs);
  require_same(u.dofs, v.dofs);
  const DofMap& dofs = u.dofs;
  const Mesh& mesh = dofs.mesh();
  const int k = dofs.degree();
  if (qdeg < 0) qdeg = 3 * k;
  const CellTable& ct = cell_table(k, qdeg);
  const EdgeTable& et = edge_table(k, qdeg);
  const int n = ct.n;
  std::vector<double> gx, gy;
  double total = 0.0;

  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const AffineMap& m = mesh.map(c);
    physical_grads(m, ct.dxi, ct.deta, gx, gy);
    const auto wc = w.local(c), uc = u.local(c), vc = v.local(c);
    double s = 0.0;
    for (std::size_t q = 0; q < ct.rule->size(); ++q) {
      double wq = 0, uq = 0, vq = 0, du = 0, dv = 0;
      for (int i = 0; i < n; ++i) {
        const double phi = ct.val[q * n + i], d = gx[q * n + i] + gy[q * n + i];
        wq += wc[i] * phi;
        uq += uc[i] * phi;
        vq += vc[i] * phi;
        du += uc[i] * d;
        dv += vc[i] * d;
      }
      s += ct.rule->weights[q] * (wq * du * vq - wq * dv * uq);
    }
    total += s * m.det;
  }

  // With the same edge velocity on both sides the upwind |w.n| parts of the
  // two one-sided fluxes cancel; what remains is a (u^- v^+ - u^+ v^-) with
  // a = {{w}} (n_x + n_y). On the boundary the two flux sums cancel.
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    if (mesh.edge(e).boundary()) continue;
    const auto sides = sides_of(mesh, e);
    const Point nrm = mesh.edge_normal(e);
    const double h = mesh.edge_length(e);
    double s = 0.0;
    for (std::size_t q = 0; q < et.rule->size(); ++q) {
      double tw[2] = {0, 0}, tu[2] = {0, 0}, tv[2] = {0, 0};
      for (int a = 0; a < 2; ++a) {
        const int c = sides[a].cell, side = sides[a].table_side;
        for (int i = 0; i < n; ++i) {
          const double phi = et.val[side][q * n + i];
          tw[a] += w.coeffs[dofs.dof(c, i)] * phi;
          tu[a] += u.coeffs[dofs.dof(c, i)] * phi;
          tv[a] += v.coeffs[dofs.dof(c, i)] * phi;
        }
      }
      const double an = 0.5 * (tw[0] + tw[1]) * (nrm.x + nrm.y);
      s += et.rule->weights[q] * an * (tu[1] * tv[0] - tu[0] * tv[1]);
    }
    total += s * h;
  }
  return total / (delta + 2);
}

Assembled assemble_bdg(const DgField& u, int delta, const SpaceFn& g, bool with_jacobian) {
  const DofMap& dofs = u.dofs;
  const Mesh& mesh = dofs.mesh();
  const int k = dofs.degree();
  const CellTable& ct = cell_table(k, assembly_degree(k, delta));
  const EdgeTable& et = edge_table(k, edge_assembly_degree(k, delta));
  const int n = ct.n;
  const double cf = 1.0 / (delta + 2);
  Assembled out{Vector::Zero(dofs.size()), std::nullopt};
  Triplets trip;
  if (with_jacobian) trip.reserve(mesh.num_cells() * n * n * 7);
  std::vector<double> gx, gy;
  Eigen::MatrixXd loc(n, n);
  Eigen::VectorXd res(n);

  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const AffineMap& m = mesh.map(c);
    physical_grads(m, ct.dxi, ct.deta, gx, gy);
    const auto uc = u.local(c);
    res.setZero();
    loc.setZero();
    for (std::size_t q = 0; q < ct.rule->size(); ++q) {
      double uq = 0, su = 0;
      for (int i = 0; i < n; ++i) {
        uq += uc[i] * ct.val[q * n + i];
        su += uc[i] * (gx[q * n + i] + gy[q * n + i]);
      }
      const double w = std::pow(uq, delta);
      const double dw = delta * std::pow(uq, delta - 1);
      const double wt = ct.rule->weights[q] * m.det * cf;
      for (int i = 0; i < n; ++i) {
        const double phi = ct.val[q * n + i], sphi = gx[q * n + i] + gy[q * n + i];
        res[i] += wt * (w * su * phi - w * sphi * uq);
        if (!with_jacobian) continue;
        for (int j = 0; j < n; ++j) {
          const double pj = ct.val[q * n + j], spj = gx[q * n + j] + gy[q * n + j];
          loc(i, j) += wt * (dw * pj * su * phi + w * spj * phi - (delta + 1) * w * pj * sphi);
        }
      }
    }
    out.value.segment(dofs.dof(c, 0), n) += res;
    if (with_jacobian)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) trip.emplace_back(dofs.dof(c, i), dofs.dof(c, j), loc(i, j));
  }

  std::vector<double> tu(2), tw(2), tdw(2);
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& ed = mesh.edge(e);
    const Point nrm = mesh.edge_normal(e);
    const double h = mesh.edge_length(e);
    const double ns = nrm.x + nrm.y;
    const auto sides = sides_of(mesh, e);
    if (ed.boundary()) {
      if (!g) continue;
      const int c = sides[0].cell, side = sides[0].table_side;
      const auto uc = u.local(c);
      const Point p0 = mesh.vertex(ed.v[0]), p1 = mesh.vertex(ed.v[1]);
      res.setZero();
      loc.setZero();
      for (std::size_t q = 0; q < et.rule->size(); ++q) {
        double uq = 0;
        for (int i = 0; i < n; ++i) uq += uc[i] * et.val[side][q * n + i];
        const double s = et.rule->points[q][0];
        const Point x = (1.0 - s) * p0 + s * p1;
        const double wt = et.rule->weights[q] * h * cf * ns * g(x.x, x.y);
        const double w = std::pow(uq, delta), dw = delta * std::pow(uq, delta - 1);
        for (int i = 0; i < n; ++i) {
          const double phi = et.val[side][q * n + i];
          res[i] += wt * w * phi;
          if (with_jacobian)
            for (int j = 0; j < n; ++j) loc(i, j) += wt * dw * et.val[side][q * n + j] * phi;
        }
      }
      out.value.segment(dofs.dof(c, 0), n) += res;
      if (with_jacobian)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) trip.emplace_back(dofs.dof(c, i), dofs.dof(c, j), loc(i, j));
      continue;
    }

    // Residual: side 0 gets c a u1 v0, side 1 gets -c a u0 v1.
    Eigen::MatrixXd blk[2][2];
    for (auto& r : blk)
      for (auto& b : r) b = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd r0 = Eigen::VectorXd::Zero(n), r1 = Eigen::VectorXd::Zero(n);
    const auto u0 = u.local(sides[0].cell), u1 = u.local(sides[1].cell);
    const int s0 = sides[0].table_side, s1 = sides[1].table_side;
    for (std::size_t q = 0; q < et.rule->size(); ++q) {
      double a0 = 0, a1 = 0;
      for (int i = 0; i < n; ++i) {
        a0 += u0[i] * et.val[s0][q * n + i];
        a1 += u1[i] * et.val[s1][q * n + i];
      }
      const double w0 = std::pow(a0, delta), w1 = std::pow(a1, delta);
      const double a = 0.5 * (w0 + w1) * ns;
      const double da0 = 0.5 * delta * std::pow(a0, delta - 1) * ns, da1 = 0.5 * delta * std::pow(a1, delta - 1) * ns;
      const double wt = et.rule->weights[q] * h * cf;
      for (int i = 0; i < n; ++i) {
        const double p0 = et.val[s0][q * n + i], p1 = et.val[s1][q * n + i];
        r0[i] += wt * a * a1 * p0;
        r1[i] -= wt * a * a0 * p1;
        if (!with_jacobian) continue;
        for (int j = 0; j < n; ++j) {
          const double q0 = et.val[s0][q * n + j], q1 = et.val[s1][q * n + j];
          blk[0][0](i, j) += wt * da0 * q0 * a1 * p0;
          blk[0][1](i, j) += wt * (da1 * q1 * a1 + a * q1) * p0;
          blk[1][0](i, j) -= wt * (da0 * q0 * a0 + a * q0) * p1;
          blk[1][1](i, j) -= wt * da1 * q1 * a0 * p1;
        }
      }
    }
    out.value.segment(dofs.dof(sides[0].cell, 0), n) += r0;
    out.value.segment(dofs.dof(sides[1].cell, 0), n) += r1;
    if (with_jacobian)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              trip.emplace_back(dofs.dof(sides[a].cell, i), dofs.dof(sides[b].cell, j), blk[a][b](i, j));
  }
  if (with_jacobian) out.jacobian = from_triplets(dofs.size(), trip);
  return out;
}

Assembled assemble_reaction(const DgField& u, double gamma, int delta, bool with_jacobian) {
  const DofMap& dofs = u.dofs;
  const Mesh& mesh = dofs.mesh();
  const int k = dofs.degree();
  const CellTable& ct = cell_table(k, assembly_degree(k, delta));
  const int n = ct.n;
  Assembled out{Vector::Zero(dofs.size()), std::nullopt};
  Triplets trip;
  if (with_jacobian) trip.reserve(mesh.num_cells() * n * n);
  Eigen::MatrixXd loc(n, n);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const double det = mesh.map(c).det;
    const auto uc = u.local(c);
    loc.setZero();
    for (std::size_t q = 0; q < ct.rule->size(); ++q) {
      double uq = 0;
      for (int i = 0; i < n; ++i) uq += uc[i] * ct.val[q * n + i];
      const double wt = ct.rule->weights[q] * det;
      const double cv = reaction(uq, gamma, delta) * wt;
      const double dc = with_jacobian ? reaction_derivative(uq, gamma, delta) * wt : 0.0;
      for (int i = 0; i < n; ++i) {
        out.value[dofs.dof(c, i)] += cv * ct.val[q * n + i];
        if (with_jacobian)
          for (int j = 0; j < n; ++j) loc(i, j) += dc * ct.val[q * n + i] * ct.val[q * n + j];
      }
    }
    if (with_jacobian)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) trip.emplace_back(dofs.dof(c, i), dofs.dof(c, j), loc(i, j));
  }
  if (with_jacobian) out.jacobian = from_triplets(dofs.size(), trip);
  return out;
}

DgOperator::DgOperator(DofMap dofs, ModelParams params)
    : dofs_(std::move(dofs)), params_(params), penalty_(params.penalty_for(dofs_.degree())) {
  params_.validate();
  mass_ = assemble_mass(dofs_);
  stiffness_ = assemble_adg(dofs_, penalty_);
}

Vector DgOperator::lift(const SpaceFn& g) const { return dirichlet_lift(dofs_, penalty_, g); }

Assembled DgOperator::nonlinear(const DgField& u, const SpaceFn& g, bool with_jacobian) const {
  require_same(u.dofs, dofs_);
  Assembled out{Vector::Zero(dofs_.size()), std::nullopt};
  if (with_jacobian) out.jacobian = SparseMatrix(dofs_.size(), dofs_.size());
  if (params_.alpha != 0.0) {
    Assembled b = assemble_bdg(u, params_.delta, g, with_jacobian);
    out.value += params_.alpha * b.value;
    if (with_jacobian) *out.jacobian += params_.alpha * *b.jacobian;
  }
  if (params_.beta != 0.0) {
    Assembled r = assemble_reaction(u, params_.gamma, params_.delta, with_jacobian);
    out.value -= params_.beta * r.value;
    if (with_jacobian) *out.jacobian -= params_.beta * *r.jacobian;
  }
  return out;
}

Vector stationary_residual(const DgOperator& op, const DgField& u, const DgField& f_h, const SpaceFn& g) {
  const double nu = op.params().nu;
  Vector r = nu * (op.stiffness() * u.coeffs) - op.mass() * f_h.coeffs;
  if (g) r -= nu * op.lift(g);
  r += op.nonlinear(u, g, false).value;
  return r;
}

SparseMatrix stationary_jacobian(const DgOperator& op, const DgField& u, const SpaceFn& g) {
  SparseMatrix j = op.params().nu * op.stiffness();
  if (!op.is_linear()) j += *op.nonlinear(u, g, true).jacobian;
  return j;
}

}  // namespace gbhe
