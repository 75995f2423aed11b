#include "gbhe/memory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gbhe/forms.hpp"
#include "gbhe/transfer.hpp"

namespace gbhe {

KernelSpec KernelSpec::power(double tau, double scale) {
  KernelSpec k;
  k.kind = Kind::Power;
  k.tau = tau;
  k.scale = scale;
  k.validate();
  return k;
}

KernelSpec KernelSpec::riemann_liouville(double tau) { return power(tau, 1.0 / std::tgamma(tau)); }

KernelSpec KernelSpec::constant(double value) {
  KernelSpec k;
  k.kind = Kind::Constant;
  k.tau = 1.0;
  k.scale = value;
  k.validate();
  return k;
}

KernelSpec KernelSpec::make_custom(std::function<double(double)> fn) {
  KernelSpec k;
  k.kind = Kind::Custom;
  k.custom = std::move(fn);
  k.validate();
  return k;
}

void KernelSpec::validate() const {
  if (kind == Kind::Custom) {
    if (!custom) throw std::invalid_argument("custom kernel without a function");
    return;
  }
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("kernel exponent must lie in (0,1]");
  if (!(scale > 0.0)) throw std::invalid_argument("kernel scale must be positive");
}

double KernelSpec::value(double t) const {
  if (kind == Kind::Custom) return custom(t);
  return scale * std::pow(t, tau - 1.0);
}

double KernelSpec::integral(double t) const {
  if (t <= 0.0) return 0.0;
  if (kind != Kind::Custom) return scale * std::pow(t, tau) / tau;
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(custom, 0.0, t);
}

double KernelSpec::double_integral(double x) const {
  if (x <= 0.0) return 0.0;
  if (kind != Kind::Custom) return scale * std::pow(x, tau + 1.0) / (tau * (tau + 1.0));
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double s) { return (x - s) * custom(s); }, 0.0, x);
}

TimeGrid::TimeGrid(std::vector<double> t) : t_(std::move(t)) {
  if (t_.size() < 2) throw std::invalid_argument("time grid needs at least one step");
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double T, int steps) {
  if (steps < 1 || !(T > 0.0)) throw std::invalid_argument("uniform grid needs T > 0 and steps >= 1");
  std::vector<double> t(steps + 1);
  for (int k = 0; k <= steps; ++k) t[k] = T * k / steps;
  t.back() = T;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::geometric(double T, int steps, double ratio) {
  if (steps < 1 || !(T > 0.0) || !(ratio > 0.0)) throw std::invalid_argument("bad geometric grid");
  std::vector<double> t(steps + 1, 0.0);
  double step = 1.0;
  for (int k = 1; k <= steps; ++k) {
    t[k] = t[k - 1] + step;
    step *= ratio;
  }
  const double s = T / t.back();
  for (double& v : t) v *= s;
  t.back() = T;
  return TimeGrid(std::move(t));
}

MemoryWeights::MemoryWeights(TimeGrid grid, KernelSpec kernel) : grid_(std::move(grid)), kernel_(std::move(kernel)) {
  kernel_.validate();
  const int n = grid_.steps();
  table_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
  // The double integral over a pair of steps is a second difference of
  // G = int_0^x int_0^r K.
  auto G = [&](double x) { return kernel_.double_integral(x); };
  std::map<double, double> g_cache;
  auto Gc = [&](double x) {
    if (kernel_.kind != KernelSpec::Kind::Custom) return G(x);
    auto it = g_cache.find(x);
    if (it != g_cache.end()) return it->second;
    return g_cache[x] = G(x);
  };
  for (int k = 1; k <= n; ++k) {
    const double tk = grid_.t(k), tk1 = grid_.t(k - 1), dk = grid_.tau(k);
    for (int j = 1; j < k; ++j) {
      const double tj = grid_.t(j), tj1 = grid_.t(j - 1);
      const double v = Gc(tk - tj1) - Gc(tk - tj) - Gc(tk1 - tj1) + Gc(tk1 - tj);
      table_[index(k, j)] = v / (dk * grid_.tau(j));
    }
    if (kernel_.kind == KernelSpec::Kind::Custom)
      table_[index(k, k)] = Gc(dk) / (dk * dk);
    else
      table_[index(k, k)] = kernel_.scale * std::pow(dk, kernel_.tau - 1.0) / (kernel_.tau * (kernel_.tau + 1.0));
  }
  if (kernel_.kind != KernelSpec::Kind::Custom)
    for (double& w : table_) {
      if (w < 0.0) {
        if (w < -1e-12 * std::abs(table_[0])) throw std::logic_error("negative memory weight for a power kernel");
        w = 0.0;
      }
    }
}

double MemoryWeights::weighted_sum(int k, const std::vector<double>& psi) const {
  double s = 0.0;
  for (int j = 1; j <= k; ++j) s += omega(k, j) * grid_.tau(j) * psi.at(j - 1);
  return s;
}

void MemoryWeights::write_csv(std::ostream& os) const {
  os.precision(17);
  os << "k,j,omega\n";
  for (int k = 1; k <= steps(); ++k)
    for (int j = 1; j <= k; ++j) os << k << ',' << j << ',' << omega(k, j) << '\n';
}

MemoryWeights weights_be(const TimeGrid& grid, const KernelSpec& kernel) { return MemoryWeights(grid, kernel); }
MemoryWeights weights_cn(const TimeGrid& grid, const KernelSpec& kernel) { return MemoryWeights(grid, kernel); }

double cn_memory_functional(const MemoryWeights& w, int k, const std::vector<double>& psi_half) {
  return 0.5 * w.weighted_sum(k, psi_half);
}

double memory_quadratic_form(const MemoryWeights& w, const std::vector<double>& xi) {
  const int n = std::min<int>(w.steps(), static_cast<int>(xi.size()));
  double q = 0.0;
  for (int k = 1; k <= n; ++k) q += w.grid().tau(k) * xi[k - 1] * w.weighted_sum(k, xi);
  return q;
}

PositivityReport discrete_positivity_check(const MemoryWeights& w, int trials, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  PositivityReport rep;
  rep.trials = trials;
  rep.min_value = std::numeric_limits<double>::infinity();
  const int n = w.steps();
  std::vector<double> xi(n);
  for (int t = 0; t < trials; ++t) {
    for (double& x : xi) x = nd(rng);
    const double q = memory_quadratic_form(w, xi);
    double scale = 0.0;
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= k; ++j)
        scale += std::abs(w.omega(k, j) * w.grid().tau(j) * w.grid().tau(k) * xi[j - 1] * xi[k - 1]);
    rep.min_value = std::min(rep.min_value, q);
    if (q < -1e-12 * scale) rep.violations.push_back(q);
  }
  return rep;
}

const HistoryRecord& History::record(int j) const {
  if (j < 1 || j > size()) throw std::out_of_range("missing history record " + std::to_string(j));
  return records_[j - 1];
}

HistoryRecord& History::record(int j) {
  if (j < 1 || j > size()) throw std::out_of_range("missing history record " + std::to_string(j));
  return records_[j - 1];
}

void History::transfer_all(const DofMap& dofs) {
  for (auto& r : records_)
    if (r.field.dofs != dofs) r.field = transfer(r.field, dofs);
}

DgField history_combination(const History& history, const DofMap& dofs, const std::vector<double>& coef) {
  if (static_cast<int>(coef.size()) > history.size()) throw std::out_of_range("history_combination: missing history record");
  // Group by source dofmap, keeping first-seen order for determinism.
  std::vector<DgField> groups;
  for (std::size_t j = 0; j < coef.size(); ++j) {
    if (coef[j] == 0.0) continue;
    const DgField& f = history.record(static_cast<int>(j) + 1).field;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const DgField& g) { return g.dofs == f.dofs; });
    if (it == groups.end()) {
      groups.emplace_back(f.dofs);
      it = groups.end() - 1;
    }
    it->coeffs += coef[j] * f.coeffs;
  }
  DgField out(dofs);
  for (const auto& g : groups) out.coeffs += (g.dofs == dofs ? g.coeffs : transfer(g, dofs).coeffs);
  return out;
}

HistoryAction history_action(const History& history, const MemoryWeights& w, const DgOperator& op, int k, double eta,
                             const SpaceTimeFn& g) {
  HistoryAction act{Vector::Zero(op.dofs().size()), 0.0};
  if (k < 1 || k > w.steps()) throw std::out_of_range("history_action: step outside weight table");
  if (eta == 0.0) return act;
  if (history.size() < k - 1) throw std::out_of_range("history_action: missing history record");
  act.implicit_coeff = eta * w.omega(k, k) * w.grid().tau(k);
  if (k == 1) return act;
  std::vector<double> coef(k - 1);
  for (int j = 1; j < k; ++j) coef[j - 1] = eta * w.omega(k, j) * w.grid().tau(j);
  const DgField sum = history_combination(history, op.dofs(), coef);
  act.explicit_part = op.stiffness() * sum.coeffs;
  if (g) {
    std::vector<std::pair<double, double>> data;
    for (int j = 1; j < k; ++j)
      for (const auto& [t, wt] : history.record(j).boundary) data.emplace_back(t, coef[j - 1] * wt);
    if (!data.empty()) {
      act.explicit_part -= op.lift([&](double x, double y) {
        double s = 0.0;
        for (const auto& [t, wt] : data) s += wt * g(x, y, t);
        return s;
      });
    }
  }
  return act;
}

}  // namespace gbhe
