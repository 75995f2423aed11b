#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gbhe/dgspace.hpp"
#include "gbhe/linalg.hpp"

namespace gbhe {

/// K(t) = scale * t^(tau - 1) for the power and constant kinds; a custom
/// kernel is any positive integrable function of t > 0.
struct KernelSpec {
  enum class Kind { Power, Constant, Custom };
  Kind kind = Kind::Power;
  double tau = 0.5;
  double scale = 1.0;
  std::function<double(double)> custom;

  static KernelSpec power(double tau, double scale = 1.0);
  /// Scale chosen as 1/Gamma(tau).
  static KernelSpec riemann_liouville(double tau);
  static KernelSpec constant(double value = 1.0);
  static KernelSpec make_custom(std::function<double(double)> k);

  void validate() const;
  double value(double t) const;
  /// int_0^t K(s) ds
  double integral(double t) const;
  /// int_0^x int_0^r K(s) ds dr = int_0^x (x - s) K(s) ds
  double double_integral(double x) const;
};

class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> t);
  static TimeGrid uniform(double T, int steps);
  /// Steps growing by `ratio` from the first one.
  static TimeGrid geometric(double T, int steps, double ratio);

  int steps() const { return static_cast<int>(t_.size()) - 1; }
  double t(int k) const { return t_[k]; }
  double tau(int k) const { return t_[k] - t_[k - 1]; }
  double mid(int k) const { return 0.5 * (t_[k] + t_[k - 1]); }
  double final_time() const { return t_.back(); }
  const std::vector<double>& points() const { return t_; }

 private:
  std::vector<double> t_;
};

/// omega_kj = (1/(tau_k tau_j)) int_{t_{k-1}}^{t_k} int_{t_{j-1}}^{min(t,t_j)} K(t-s) ds dt,
/// stored for 1 <= j <= k <= N.
class MemoryWeights {
 public:
  MemoryWeights(TimeGrid grid, KernelSpec kernel);

  const TimeGrid& grid() const { return grid_; }
  const KernelSpec& kernel() const { return kernel_; }
  int steps() const { return grid_.steps(); }
  double omega(int k, int j) const { return table_[index(k, j)]; }
  /// sum_{j<=k} omega_kj tau_j psi_j (psi indexed from 1).
  double weighted_sum(int k, const std::vector<double>& psi) const;

  void write_csv(std::ostream& os) const;

 private:
  static std::size_t index(int k, int j) { return static_cast<std::size_t>(k) * (k - 1) / 2 + (j - 1); }
  TimeGrid grid_;
  KernelSpec kernel_;
  std::vector<double> table_;
};

MemoryWeights weights_be(const TimeGrid& grid, const KernelSpec& kernel);
/// Same table; the schemes differ only in what the weights multiply.
MemoryWeights weights_cn(const TimeGrid& grid, const KernelSpec& kernel);

/// J(psi) = (1/2) sum_{j<=k} omega_kj tau_j psi^{j-1/2} for scalar histories.
double cn_memory_functional(const MemoryWeights& w, int k, const std::vector<double>& psi_half);

struct PositivityReport {
  int trials = 0;
  double min_value = 0.0;
  std::vector<double> violations;  // values below -1e-12 * scale
};

/// Q(xi) = sum_k sum_{j<=k} omega_kj tau_j tau_k xi_j xi_k over random xi.
PositivityReport discrete_positivity_check(const MemoryWeights& w, int trials, unsigned seed = 12345);
double memory_quadratic_form(const MemoryWeights& w, const std::vector<double>& xi);

/// One stored step of a transient run.
struct HistoryRecord {
  DgField field;  // BE: u^j, CN: u^{j-1/2}
  /// Dirichlet data contributing to this record as (time, weight) pairs.
  std::vector<std::pair<double, double>> boundary;
};

class History {
 public:
  void push(HistoryRecord r) { records_.push_back(std::move(r)); }
  int size() const { return static_cast<int>(records_.size()); }
  const HistoryRecord& record(int j) const;  // 1-based
  HistoryRecord& record(int j);
  /// Replace every field by its transfer to `dofs` (used when the mesh is
  /// reset and the old meshes are no longer needed).
  void transfer_all(const DofMap& dofs);
  void clear() { records_.clear(); }

 private:
  std::vector<HistoryRecord> records_;
};

using SpaceTimeFn = std::function<double(double, double, double)>;

class DgOperator;

struct HistoryAction {
  Vector explicit_part;      // eta sum_{j<k} omega_kj tau_j (A I u^j - lift(g^j))
  double implicit_coeff = 0;  // eta omega_kk tau_k, multiplies the step-k term
};

/// Memory action of records 1..k-1 on the operator's dofmap. Records sharing
/// a mesh are summed before transfer so that A is applied once.
HistoryAction history_action(const History& history, const MemoryWeights& w, const DgOperator& op, int k,
                             double eta, const SpaceTimeFn& g = {});

/// sum_j coef[j-1] * I u^j over records 1..coef.size(), on `dofs`.
DgField history_combination(const History& history, const DofMap& dofs, const std::vector<double>& coef);

}  // namespace gbhe
