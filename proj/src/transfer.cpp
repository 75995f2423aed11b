#include "gbhe/transfer.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace gbhe {

namespace {

struct KeyHash {
  std::size_t operator()(const Lineage& l) const {
    return std::hash<std::uint64_t>()(l.path * 0x9E3779B97F4A7C15ull ^ (static_cast<std::uint64_t>(l.root) << 7) ^
                                      l.depth);
  }
};
struct KeyEq {
  bool operator()(const Lineage& a, const Lineage& b) const {
    return a.root == b.root && a.depth == b.depth && a.path == b.path;
  }
};

std::uint64_t prefix(std::uint64_t path, std::uint32_t depth) {
  return depth >= 64 ? path : (path & ((std::uint64_t{1} << depth) - 1));
}

using CellIndex = std::unordered_map<Lineage, int, KeyHash, KeyEq>;

CellIndex index_cells(const Mesh& m) {
  CellIndex idx;
  idx.reserve(m.num_cells() * 2);
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) idx.emplace(m.lineage(c), c);
  return idx;
}

// Source cell containing target cell lineage `l`, or -1.
int find_ancestor(const CellIndex& idx, const Lineage& l) {
  for (int d = static_cast<int>(l.depth); d >= 0; --d) {
    const Lineage a{l.root, static_cast<std::uint32_t>(d), prefix(l.path, d)};
    auto it = idx.find(a);
    if (it != idx.end()) return it->second;
  }
  return -1;
}

}  // namespace

bool is_nested_refinement(const Mesh& coarse, const Mesh& fine) {
  if (coarse.family() != fine.family()) return false;
  const CellIndex idx = index_cells(coarse);
  for (int c = 0; c < static_cast<int>(fine.num_cells()); ++c)
    if (find_ancestor(idx, fine.lineage(c)) < 0) return false;
  return true;
}

DgField transfer(const DgField& u, const DofMap& target) {
  if (u.dofs == target) return u;
  const Mesh& src = u.dofs.mesh();
  const Mesh& dst = target.mesh();
  if (src.family() != dst.family()) throw std::invalid_argument("transfer: meshes are not refinements of a common mesh");
  const int k = target.degree();
  const CellIndex idx = index_cells(src);

  // Source cells grouped by root, for the coarsening direction.
  std::unordered_map<std::uint32_t, std::vector<int>> by_root;
  for (int c = 0; c < static_cast<int>(src.num_cells()); ++c) by_root[src.lineage(c).root].push_back(c);

  const int qdeg = u.dofs.degree() + k;
  const CellTable& tt = cell_table(k, qdeg);
  const int n = tt.n;
  Eigen::MatrixXd ref_mass = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < tt.rule->size(); ++q)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ref_mass(i, j) += tt.rule->weights[q] * tt.val[q * n + i] * tt.val[q * n + j];
  const Eigen::LLT<Eigen::MatrixXd> llt(ref_mass);
  const CellTable& st = cell_table(u.dofs.degree(), qdeg);

  DgField out(target);
  Eigen::VectorXd rhs(n);
  for (int c = 0; c < static_cast<int>(dst.num_cells()); ++c) {
    const Lineage& l = dst.lineage(c);
    const int s = find_ancestor(idx, l);
    if (s >= 0) {
      for (int i = 0; i < n; ++i) {
        const auto r = reference_node(k, i);
        const Point x = dst.map(c).map(r[0], r[1]);
        const auto rs = src.map(s).inverse(x);
        out.coeffs[target.dof(c, i)] = evaluate(u, s, rs[0], rs[1]).value;
      }
      continue;
    }
    rhs.setZero();
    double covered = 0.0;
    auto it = by_root.find(l.root);
    if (it != by_root.end()) {
      for (int sc : it->second) {
        const Lineage& ls = src.lineage(sc);
        if (ls.depth <= l.depth || prefix(ls.path, l.depth) != l.path) continue;
        covered += src.area(sc);
        const auto us = u.local(sc);
        const int ns = st.n;
        for (std::size_t q = 0; q < st.rule->size(); ++q) {
          double v = 0.0;
          for (int i = 0; i < ns; ++i) v += us[i] * st.val[q * ns + i];
          const Point x = src.map(sc).map(st.rule->points[q][0], st.rule->points[q][1]);
          const auto rt = dst.map(c).inverse(x);
          const BasisEval b = eval_basis(k, rt[0], rt[1]);
          const double w = st.rule->weights[q] * src.map(sc).det / dst.map(c).det;
          for (int i = 0; i < n; ++i) rhs[i] += w * v * b.value[i];
        }
      }
    }
    if (std::abs(covered - dst.area(c)) > 1e-10 * dst.area(c))
      throw std::invalid_argument("transfer: target cell not covered by source cells");
    out.local(c) = llt.solve(rhs);
  }
  return out;
}

FieldLocator::FieldLocator(DgField u, const Mesh& target) : u_(std::move(u)) {
  const Mesh& src = u_.dofs.mesh();
  if (src.family() != target.family()) throw std::invalid_argument("FieldLocator: meshes of different families");
  const int nt = static_cast<int>(target.num_cells());
  ancestor_.assign(nt, -1);
  pieces_.assign(nt, {});
  const CellIndex sidx = index_cells(src);
  for (int c = 0; c < nt; ++c) ancestor_[c] = find_ancestor(sidx, target.lineage(c));
  const CellIndex tidx = index_cells(target);
  for (int s = 0; s < static_cast<int>(src.num_cells()); ++s) {
    const Lineage& l = src.lineage(s);
    if (l.depth == 0) continue;
    const Lineage parent{l.root, l.depth - 1, prefix(l.path, l.depth - 1)};
    const int t = find_ancestor(tidx, parent);
    if (t >= 0 && ancestor_[t] < 0) pieces_[t].push_back(s);
  }
}

PointValue FieldLocator::eval(int target_cell, Point p) const {
  const Mesh& src = u_.dofs.mesh();
  int best = ancestor_[target_cell];
  if (best < 0) {
    double best_margin = -std::numeric_limits<double>::infinity();
    for (int s : pieces_[target_cell]) {
      const auto r = src.map(s).inverse(p);
      const double margin = std::min({r[0], r[1], 1.0 - r[0] - r[1]});
      if (margin > best_margin) {
        best_margin = margin;
        best = s;
      }
    }
    if (best < 0) throw std::logic_error("FieldLocator: target cell not covered");
  }
  const auto r = src.map(best).inverse(p);
  return evaluate(u_, best, r[0], r[1]);
}

}  // namespace gbhe
