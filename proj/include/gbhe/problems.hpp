#pragma once

#include <array>
#include <functional>
#include <string>

#include "gbhe/forms.hpp"
#include "gbhe/memory.hpp"
#include "gbhe/mesh.hpp"

namespace gbhe {

using GradFn = std::function<std::array<double, 2>(double, double, double)>;

/// Closed-form solution data; all functions take (x, y, t).
struct ExactSolution {
  SpaceTimeFn u;
  GradFn grad;
  SpaceTimeFn dt;
  SpaceTimeFn laplacian;
  /// int_0^t K(t - s) Laplacian u(x, s) ds; empty when the memory term is
  /// not needed (eta = 0).
  SpaceTimeFn memory;
};

struct Problem {
  std::string name;
  Domain domain = Domain::UnitSquare;
  ModelParams params;
  KernelSpec kernel;
  double final_time = 1.0;
  bool transient = false;
  ExactSolution exact;
  SpaceTimeFn forcing;
  /// Dirichlet data; empty when it vanishes identically.
  SpaceTimeFn boundary;
  SpaceTimeFn initial() const { return exact.u; }
};

/// f = u_t + alpha u^delta (u_x + u_y) - nu Lap u - eta (K * Lap u) - beta c(u).
SpaceTimeFn manufactured_forcing(const ExactSolution& ex, const ModelParams& p, bool transient);

/// Known names: sine (stationary sin(pi x) sin(pi y)), sine-transient
/// ((t^3 - t^2 + 1) sin sin), lshape-case1, lshape-case2, moving-bump,
/// linear (u = 1 + 2x - 3y).
Problem make_problem(const std::string& name, const ModelParams& params, const KernelSpec& kernel = KernelSpec::power(0.5, 1.0));

/// Time profile of the moving-bump solution and its derivative.
double bump_amplitude(double t);
double bump_amplitude_dt(double t);
double bump_center(double t);

inline SpaceFn at_time(const SpaceTimeFn& f, double t) {
  if (!f) return {};
  return [f, t](double x, double y) { return f(x, y, t); };
}

}  // namespace gbhe
