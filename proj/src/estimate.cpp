#include "gbhe/estimate.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace gbhe {

namespace {

constexpr double kG4x[4] = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281, 0.9305681557970263};
constexpr double kG4w[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731, 0.1739274225687269};

struct Samples {
  std::vector<double> v, gx, gy;
};

void sample(const DgField& u, int c, const std::vector<double>& val, const std::vector<double>& dxi,
            const std::vector<double>& deta, int n, std::size_t nq, Samples& s) {
  s.v.assign(nq, 0.0);
  s.gx.assign(nq, 0.0);
  s.gy.assign(nq, 0.0);
  const auto uc = u.local(c);
  const AffineMap& m = u.dofs.mesh().map(c);
  for (std::size_t q = 0; q < nq; ++q) {
    double v = 0, a = 0, b = 0;
    for (int i = 0; i < n; ++i) {
      v += uc[i] * val[q * n + i];
      a += uc[i] * dxi[q * n + i];
      b += uc[i] * deta[q * n + i];
    }
    const auto g = m.grad(a, b);
    s.v[q] = v;
    s.gx[q] = g[0];
    s.gy[q] = g[1];
  }
}

void sample_cell(const DgField& u, int c, const CellTable& t, Samples& s) {
  sample(u, c, t.val, t.dxi, t.deta, t.n, t.rule->size(), s);
}

void sample_edge(const DgField& u, int c, int side, const EdgeTable& t, Samples& s) {
  sample(u, c, t.val[side], t.dxi[side], t.deta[side], t.n, t.rule->size(), s);
}

// Laplacian of a DG field on one cell; constant for k <= 2.
double cell_laplacian(const DgField& u, int c) {
  const int k = u.dofs.degree();
  if (k < 2) return 0.0;
  const auto& J = u.dofs.mesh().map(c).inv_jac;
  const auto uc = u.local(c);
  double s = 0.0;
  for (int i = 0; i < u.dofs.n_loc(); ++i) {
    const auto h = basis_hessian(k, i);
    double lap = 0.0;
    for (int a = 0; a < 2; ++a) {
      const double j0 = J[a], j1 = J[2 + a];
      lap += j0 * j0 * h[0] + 2.0 * j0 * j1 * h[1] + j1 * j1 * h[2];
    }
    s += uc[i] * lap;
  }
  return s;
}

std::vector<Point> edge_points(const Mesh& mesh, int e, const QuadratureRule& rule) {
  const Point a = mesh.vertex(mesh.edge(e).v[0]), b = mesh.vertex(mesh.edge(e).v[1]);
  std::vector<Point> x(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) x[q] = (1.0 - rule.points[q][0]) * a + rule.points[q][0] * b;
  return x;
}

int residual_degree(int k, int delta) {
  return std::min(kMaxQuadratureDegree, std::max(assembly_degree(k, delta), 2 * (2 * delta + 1) * k));
}

// Everything the residual estimator needs; the stationary and both transient
// estimators are instances.
struct ResidualInput {
  const DgOperator* op = nullptr;
  std::vector<std::pair<double, const DgField*>> terms;  // weighted arguments of the spatial operator
  const DgField* f_h = nullptr;
  const DgField* dudt = nullptr;    // subtracted in R_K
  const DgField* memory = nullptr;  // Laplacian in R_K, normal-gradient jump in R_E2
  double memory_coef = 0.0;
  double e2_factor = 0.5;
  const DgField* memory_jump = nullptr;
  SpaceFn memory_jump_g;
  bool memory_jump_gradient = false;
  double jump_coef = 1.0;
  SpaceFn g;  // boundary data of the averaged argument
};

struct ResidualOutput {
  std::vector<double> r_sq, e_sq, j_sq;
  double e2_sq = 0.0;
  std::vector<double> local_sq() const {
    std::vector<double> s(r_sq.size());
    for (std::size_t c = 0; c < s.size(); ++c) s[c] = r_sq[c] + e_sq[c] + j_sq[c];
    return s;
  }
  double total_sq() const {
    double s = 0.0;
    for (double v : local_sq()) s += v;
    return s;
  }
};

ResidualOutput residual_estimate(const ResidualInput& in) {
  const DgOperator& op = *in.op;
  const DofMap& dofs = op.dofs();
  const Mesh& mesh = dofs.mesh();
  const ModelParams& p = op.params();
  const int k = dofs.degree();
  const int nc = static_cast<int>(mesh.num_cells());

  DgField W(dofs);
  for (const auto& [wt, f] : in.terms) {
    if (f->dofs != dofs) throw std::invalid_argument("estimate: field on a different dofmap");
    W.coeffs += wt * f->coeffs;
  }

  ResidualOutput out;
  out.r_sq.assign(nc, 0.0);
  out.e_sq.assign(nc, 0.0);
  out.j_sq.assign(nc, 0.0);

  const CellTable& ct = cell_table(k, residual_degree(k, p.delta));
  const std::size_t nq = ct.rule->size();
  Samples sw, sf, sd;
  std::vector<double> R(nq);
  for (int c = 0; c < nc; ++c) {
    std::fill(R.begin(), R.end(), 0.0);
    sample_cell(*in.f_h, c, ct, sf);
    for (std::size_t q = 0; q < nq; ++q) R[q] = sf.v[q];
    if (in.dudt) {
      sample_cell(*in.dudt, c, ct, sd);
      for (std::size_t q = 0; q < nq; ++q) R[q] -= sd.v[q];
    }
    for (const auto& [wt, f] : in.terms) {
      sample_cell(*f, c, ct, sw);
      const double lap = cell_laplacian(*f, c);
      for (std::size_t q = 0; q < nq; ++q) {
        const double w = sw.v[q];
        R[q] += wt * (p.nu * lap - p.alpha * std::pow(w, p.delta) * (sw.gx[q] + sw.gy[q]) +
                      p.beta * reaction(w, p.gamma, p.delta));
      }
    }
    if (in.memory && in.memory_coef != 0.0) {
      const double lap = in.memory_coef * cell_laplacian(*in.memory, c);
      for (std::size_t q = 0; q < nq; ++q) R[q] += lap;
    }
    double s = 0.0;
    for (std::size_t q = 0; q < nq; ++q) s += ct.rule->weights[q] * R[q] * R[q];
    const double h = mesh.diameter(c);
    out.r_sq[c] = h * h * s * mesh.map(c).det;
  }

  const EdgeTable& et = edge_table(k, std::min(kMaxQuadratureDegree, edge_assembly_degree(k, p.delta) + 1));
  const QuadratureRule& er = *et.rule;
  const std::size_t ne = er.size();
  Samples w0, w1, m0, m1, j0, j1;
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& ed = mesh.edge(e);
    const double hE = mesh.edge_length(e);
    const Point n = mesh.edge_normal(e);
    const double kap = op.penalty() / hE;
    const int c0 = ed.cells[0];
    sample_edge(W, c0, edge_side(mesh, c0, e), et, w0);
    if (in.memory_jump) sample_edge(*in.memory_jump, c0, edge_side(mesh, c0, e), et, j0);
    double eterm = 0.0, jterm = 0.0;
    if (!ed.boundary()) {
      const int c1 = ed.cells[1];
      sample_edge(W, c1, edge_side(mesh, c1, e), et, w1);
      if (in.memory) {
        sample_edge(*in.memory, c0, edge_side(mesh, c0, e), et, m0);
        sample_edge(*in.memory, c1, edge_side(mesh, c1, e), et, m1);
      }
      if (in.memory_jump) sample_edge(*in.memory_jump, c1, edge_side(mesh, c1, e), et, j1);
      double e2 = 0.0;
      for (std::size_t q = 0; q < ne; ++q) {
        const double wq = er.weights[q] * hE;
        const double jn = (w0.gx[q] - w1.gx[q]) * n.x + (w0.gy[q] - w1.gy[q]) * n.y;
        const double r1 = 0.5 * p.nu * jn;
        double r2 = 0.0;
        if (in.memory) {
          const double mn = (m0.gx[q] - m1.gx[q]) * n.x + (m0.gy[q] - m1.gy[q]) * n.y;
          r2 = in.e2_factor * in.memory_coef * mn;
        }
        eterm += wq * (r1 * r1 + r2 * r2);
        e2 += wq * r2 * r2;
        const double jw = w0.v[q] - w1.v[q];
        jterm += wq * in.jump_coef * p.nu * p.nu * jw * jw;
        if (in.memory_jump) {
          double jm2;
          if (in.memory_jump_gradient) {
            const double dx = j0.gx[q] - j1.gx[q], dy = j0.gy[q] - j1.gy[q];
            jm2 = dx * dx + dy * dy;
          } else {
            const double d = j0.v[q] - j1.v[q];
            jm2 = d * d;
          }
          jterm += wq * p.eta * p.eta * jm2;
        }
      }
      eterm *= hE;
      out.e2_sq += 2.0 * hE * e2;
      jterm *= kap;
      out.e_sq[c0] += eterm;
      out.e_sq[c1] += eterm;
      out.j_sq[c0] += jterm;
      out.j_sq[c1] += jterm;
    } else {
      const auto x = edge_points(mesh, e, er);
      for (std::size_t q = 0; q < ne; ++q) {
        const double wq = er.weights[q] * hE;
        const double jw = w0.v[q] - (in.g ? in.g(x[q].x, x[q].y) : 0.0);
        jterm += wq * in.jump_coef * p.nu * p.nu * jw * jw;
        if (in.memory_jump && !in.memory_jump_gradient) {
          const double d = j0.v[q] - (in.memory_jump_g ? in.memory_jump_g(x[q].x, x[q].y) : 0.0);
          jterm += wq * p.eta * p.eta * d * d;
        }
      }
      out.j_sq[c0] += kap * jterm;
    }
  }
  return out;
}

// sum_E h_E^2 ||[[a]]||^2, where the side-1 trace (or the boundary value) is
// supplied by `other`.
template <class Other>
double weighted_jump_sq(const DgField& a, Other other) {
  const Mesh& mesh = a.dofs.mesh();
  const int k = a.dofs.degree();
  const EdgeTable& et = edge_table(k, 2 * k + 2);
  const QuadratureRule& er = *et.rule;
  Samples s0;
  double total = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& ed = mesh.edge(e);
    const double hE = mesh.edge_length(e);
    const auto x = edge_points(mesh, e, er);
    sample_edge(a, ed.cells[0], edge_side(mesh, ed.cells[0], e), et, s0);
    double s = 0.0;
    for (std::size_t q = 0; q < er.size(); ++q) {
      const double d = s0.v[q] - other(e, static_cast<int>(q), x[q]);
      s += er.weights[q] * d * d;
    }
    total += hE * hE * hE * s;
  }
  return total;
}

double l2_sq_diff(const DgField& u, const SpaceFn& f, int qdeg) {
  const double e = l2_error(u, f, qdeg);
  return e * e;
}

}  // namespace

StationaryEstimate estimate_stationary(const DgOperator& op, const DgField& u, const SpaceFn& f, const DgField& f_h,
                                       const SpaceFn& g) {
  if (u.dofs != op.dofs() || f_h.dofs != op.dofs())
    throw std::invalid_argument("estimate_stationary: fields on different dofmaps");
  ResidualInput in;
  in.op = &op;
  in.terms = {{1.0, &u}};
  in.f_h = &f_h;
  in.g = g;
  const ResidualOutput r = residual_estimate(in);

  const Mesh& mesh = u.dofs.mesh();
  const int nc = static_cast<int>(mesh.num_cells());
  StationaryEstimate est;
  est.residual.resize(nc);
  est.edge.resize(nc);
  est.jump.resize(nc);
  est.local.resize(nc);
  est.oscillation_local.assign(nc, 0.0);
  double tot = 0.0;
  for (int c = 0; c < nc; ++c) {
    est.residual[c] = std::sqrt(r.r_sq[c]);
    est.edge[c] = std::sqrt(r.e_sq[c]);
    est.jump[c] = std::sqrt(r.j_sq[c]);
    const double l = r.r_sq[c] + r.e_sq[c] + r.j_sq[c];
    est.local[c] = std::sqrt(l);
    tot += l;
  }
  est.total = std::sqrt(tot);

  if (f) {
    const int k = u.dofs.degree();
    const CellTable& t = cell_table(k, 2 * k + 6);
    Samples s;
    double osc = 0.0;
    for (int c = 0; c < nc; ++c) {
      sample_cell(f_h, c, t, s);
      const AffineMap& m = mesh.map(c);
      double loc = 0.0;
      for (std::size_t q = 0; q < t.rule->size(); ++q) {
        const Point x = m.map(t.rule->points[q][0], t.rule->points[q][1]);
        const double d = f(x.x, x.y) - s.v[q];
        loc += t.rule->weights[q] * d * d;
      }
      const double h = mesh.diameter(c);
      loc *= h * h * m.det;
      est.oscillation_local[c] = std::sqrt(loc);
      osc += loc;
    }
    est.oscillation = std::sqrt(osc);
  }
  return est;
}

ErrorNorms error_norms(const DgField& u, const SpaceFn& exact, const std::function<std::array<double, 2>(double, double)>& grad,
                       double penalty, int qdeg) {
  const Mesh& mesh = u.dofs.mesh();
  const int k = u.dofs.degree();
  if (qdeg < 0) qdeg = std::min(kMaxQuadratureDegree, 2 * k + 6);
  const CellTable& ct = cell_table(k, qdeg);
  Samples s;
  double l2 = 0.0, gr = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    sample_cell(u, c, ct, s);
    const AffineMap& m = mesh.map(c);
    double a = 0.0, b = 0.0;
    for (std::size_t q = 0; q < ct.rule->size(); ++q) {
      const Point x = m.map(ct.rule->points[q][0], ct.rule->points[q][1]);
      const double d = exact(x.x, x.y) - s.v[q];
      const auto ge = grad(x.x, x.y);
      const double dx = ge[0] - s.gx[q], dy = ge[1] - s.gy[q];
      a += ct.rule->weights[q] * d * d;
      b += ct.rule->weights[q] * (dx * dx + dy * dy);
    }
    l2 += a * m.det;
    gr += b * m.det;
  }
  const EdgeTable& et = edge_table(k, qdeg);
  const QuadratureRule& er = *et.rule;
  Samples s0, s1;
  double jp = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& ed = mesh.edge(e);
    sample_edge(u, ed.cells[0], edge_side(mesh, ed.cells[0], e), et, s0);
    double loc = 0.0;
    if (!ed.boundary()) {
      sample_edge(u, ed.cells[1], edge_side(mesh, ed.cells[1], e), et, s1);
      for (std::size_t q = 0; q < er.size(); ++q) {
        const double d = s0.v[q] - s1.v[q];
        loc += er.weights[q] * d * d;
      }
    } else {
      const auto x = edge_points(mesh, e, er);
      for (std::size_t q = 0; q < er.size(); ++q) {
        const double d = s0.v[q] - exact(x[q].x, x[q].y);
        loc += er.weights[q] * d * d;
      }
    }
    jp += penalty * loc;  // (penalty / h_E) * h_E * int_0^1
  }
  ErrorNorms out;
  out.l2 = std::sqrt(l2);
  out.grad = std::sqrt(gr);
  out.jump = std::sqrt(jp);
  out.dg = std::sqrt(gr + jp);
  return out;
}

ErrorNorms error_norms(const DgField& u, const ExactSolution& ex, double t, double penalty) {
  const auto& gfn = ex.grad;
  return error_norms(u, at_time(ex.u, t), [&gfn, t](double x, double y) { return gfn(x, y, t); }, penalty);
}

void TimeEstimate::add(const TimeStepEstimate& s, double tau) {
  xi_sq += s.xi * s.xi;
  upsilon_sq += tau * (s.upsilon_sq_new + s.upsilon_sq_prev);
  kappa_sq += s.kappa_sq;
  source_sq += s.source_sq;
  steps.push_back(s);
}

TimeStepEstimate estimate_step(const TransientSolver& solver, const StepSolution& step, const DgField& prev,
                               const EstimatorOptions& opts) {
  const int k = step.k;
  if (solver.current_step() != k - 1) throw std::logic_error("estimate_step: step already committed or out of order");
  const MemoryWeights& w = solver.weights();
  const TimeGrid& grid = w.grid();
  const double t0 = grid.t(k - 1), t1 = grid.t(k), tau = grid.tau(k);
  const ModelParams& p = solver.params();
  const bool cn = solver.options().scheme == Scheme::CrankNicolson;
  const double mf = solver.memory_factor();
  const DgOperator& op = *step.op;
  const DofMap& dofs = op.dofs();
  const DgField& u = step.u;
  const DgField& ub = step.prev_transferred;
  const SpaceTimeFn& gfun = solver.boundary();
  const History& hist = solver.history();

  TimeStepEstimate out;
  out.k = k;
  out.time = t1;

  DgField dudt(dofs, (u.coeffs - ub.coeffs) / tau);

  // Current memory record and its boundary data.
  DgField rk = u;
  std::vector<std::pair<double, double>> rk_bdry{{t1, 1.0}};
  if (cn) {
    rk.coeffs = 0.5 * (u.coeffs + ub.coeffs);
    rk_bdry = {{t1, 0.5}, {t0, 0.5}};
  }

  std::unique_ptr<DgField> mem_tau, mem_jump;
  SpaceFn mem_jump_g;
  if (p.eta != 0.0) {
    std::vector<double> ct(k - 1), cj(k - 1);
    for (int j = 1; j < k; ++j) {
      ct[j - 1] = w.omega(k, j) * grid.tau(j);
      cj[j - 1] = w.omega(k, j) * tau;
    }
    mem_tau = std::make_unique<DgField>(history_combination(hist, dofs, ct));
    mem_tau->coeffs += w.omega(k, k) * tau * rk.coeffs;
    mem_tau->coeffs *= mf;
    mem_jump = std::make_unique<DgField>(history_combination(hist, dofs, cj));
    mem_jump->coeffs += w.omega(k, k) * tau * rk.coeffs;
    mem_jump->coeffs *= mf;
    if (gfun) {
      std::vector<std::pair<double, double>> data;
      for (int j = 1; j < k; ++j)
        for (const auto& [t, wt] : hist.record(j).boundary) data.emplace_back(t, mf * cj[j - 1] * wt);
      for (const auto& [t, wt] : rk_bdry) data.emplace_back(t, mf * w.omega(k, k) * tau * wt);
      mem_jump_g = [data, gfun](double x, double y) {
        double s = 0.0;
        for (const auto& [t, wt] : data) s += wt * gfun(x, y, t);
        return s;
      };
    }
  }

  ResidualInput in;
  in.op = &op;
  in.f_h = &step.f_h;
  in.dudt = &dudt;
  in.memory = mem_tau.get();
  in.memory_coef = p.eta;
  in.memory_jump = mem_jump.get();
  in.memory_jump_g = mem_jump_g;
  in.memory_jump_gradient = opts.memory_jump_gradient;
  const SpaceFn g1 = at_time(gfun, t1), g0 = at_time(gfun, t0);

  ResidualOutput rnew;
  if (!cn) {
    in.terms = {{1.0, &u}};
    in.g = g1;
    rnew = residual_estimate(in);
    in.terms = {{1.0, &ub}};
    in.g = g0;
    const ResidualOutput rprev = residual_estimate(in);
    out.upsilon_sq_prev = rprev.total_sq();
  } else {
    in.terms = {{0.5, &u}, {0.5, &ub}};
    if (gfun) in.g = [gfun, t0, t1](double x, double y) { return 0.5 * (gfun(x, y, t0) + gfun(x, y, t1)); };
    in.e2_factor = 0.25;
    in.jump_coef = 2.0;
    rnew = residual_estimate(in);
  }
  out.upsilon_sq_new = rnew.total_sq();
  out.residual_e2_sq = rnew.e2_sq;
  const auto loc = rnew.local_sq();
  out.upsilon_local.resize(loc.size());
  for (std::size_t c = 0; c < loc.size(); ++c) out.upsilon_local[c] = std::sqrt(loc[c]);

  // Time indicator.
  const double h1 = std::sqrt(std::pow(l2_norm(dudt) * tau, 2) + std::pow(broken_gradient_norm(dudt) * tau, 2));
  const Mesh& mesh = dofs.mesh();
  const EdgeTable& et = edge_table(dofs.degree(), 2 * dofs.degree() + 2);
  Samples s1;
  DgField d(dofs, u.coeffs - ub.coeffs);
  const double jd = std::sqrt(weighted_jump_sq(d, [&](int e, int q, Point x) {
    const Edge& ed = mesh.edge(e);
    if (ed.boundary()) return gfun ? gfun(x.x, x.y, t1) - gfun(x.x, x.y, t0) : 0.0;
    if (q == 0) sample_edge(d, ed.cells[1], edge_side(mesh, ed.cells[1], e), et, s1);
    return s1.v[q];
  }));
  double jt = 0.0;
  if (prev.dofs != dofs) {
    const FieldLocator loc_prev(prev, mesh);
    // [[I u - u]]: both traces of I u minus the traces of u seen from each side.
    Samples a0, a1;
    const int k2 = dofs.degree();
    const EdgeTable& et2 = edge_table(k2, 2 * k2 + 2);
    const QuadratureRule& er = *et2.rule;
    for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
      const Edge& ed = mesh.edge(e);
      const double hE = mesh.edge_length(e);
      const auto x = edge_points(mesh, e, er);
      sample_edge(ub, ed.cells[0], edge_side(mesh, ed.cells[0], e), et2, a0);
      if (!ed.boundary()) sample_edge(ub, ed.cells[1], edge_side(mesh, ed.cells[1], e), et2, a1);
      double s = 0.0;
      for (std::size_t q = 0; q < er.size(); ++q) {
        double j = a0.v[q] - loc_prev.eval(ed.cells[0], x[q]).value;
        if (!ed.boundary()) j -= a1.v[q] - loc_prev.eval(ed.cells[1], x[q]).value;
        s += er.weights[q] * j * j;
      }
      jt += hE * hE * hE * s;
    }
    jt = std::sqrt(jt);
  }
  out.transfer_jump = jt;
  out.xi = tau * h1 + (jt + jd) / tau;

  // Memory oscillation.
  if (p.eta != 0.0) {
    std::vector<double> gn = solver.record_gradient_norms();
    gn.resize(k - 1);
    gn.push_back(broken_gradient_norm(rk));
    const KernelSpec& K = w.kernel();
    auto integrand = [&](double t) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) {
        const double tj0 = grid.t(j - 1), tj = grid.t(j);
        const double exact = K.integral(t - tj0) - K.integral(t - std::min(t, tj));
        s += std::abs(mf * w.omega(k, j) * grid.tau(j) - exact) * gn[j - 1];
      }
      return s * s;
    };
    out.kappa_sq = p.eta * p.eta * boost::math::quadrature::gauss<double, 16>::integrate(integrand, t0, t1);
  }

  // Source oscillation.
  const SpaceTimeFn& f = solver.forcing();
  if (f) {
    const int qd = std::min(kMaxQuadratureDegree, 2 * dofs.degree() + 6);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += kG4w[i] * l2_sq_diff(step.f_h, at_time(f, t0 + kG4x[i] * tau), qd);
    out.source_sq = tau * s;
  }
  return out;
}

void TransientError::add_step(const DgField& prev_transferred, const DgField& u, double t0, double t1) {
  const double tau = t1 - t0;
  const double off = 0.5 / std::sqrt(3.0);
  for (double sgn : {-1.0, 1.0}) {
    const double t = t0 + (0.5 + sgn * off) * tau;
    const DgField ur = reconstruct(prev_transferred, u, t0, t1, t);
    const ErrorNorms e = error_norms(ur, ex_, t, penalty_);
    dg_sq_ += 0.5 * tau * e.dg * e.dg;
  }
}

void TransientError::set_final(const DgField& u, double t) { final_l2_ = l2_error(u, at_time(ex_.u, t), std::min(kMaxQuadratureDegree, 2 * u.dofs.degree() + 6)); }

Efficiency efficiency(double indicator, double error) {
  Efficiency e;
  if (!(error > 1e-300)) {
    e.degenerate = true;
    e.value = std::numeric_limits<double>::infinity();
    return e;
  }
  e.value = indicator / error;
  return e;
}

}  // namespace gbhe
