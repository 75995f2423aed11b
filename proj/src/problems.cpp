#include "gbhe/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace gbhe {

namespace {

constexpr double pi = std::numbers::pi;

// Convolution of the kernel with a time profile, for solutions without a
// closed form.
SpaceTimeFn numeric_memory(const SpaceTimeFn& lap, const KernelSpec& kernel) {
  return [lap, kernel](double x, double y, double t) {
    if (t <= 0.0) return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([&](double s) { return kernel.value(t - s) * lap(x, y, s); }, 0.0, t);
  };
}

ExactSolution sine_solution(bool transient, const KernelSpec& kernel) {
  // u = p(t) S(x, y), p = t^3 - t^2 + 1 (or 1 when stationary).
  auto p = [transient](double t) { return transient ? t * t * t - t * t + 1.0 : 1.0; };
  auto dp = [transient](double t) { return transient ? 3.0 * t * t - 2.0 * t : 0.0; };
  ExactSolution ex;
  ex.u = [p](double x, double y, double t) { return p(t) * std::sin(pi * x) * std::sin(pi * y); };
  ex.grad = [p](double x, double y, double t) {
    return std::array<double, 2>{p(t) * pi * std::cos(pi * x) * std::sin(pi * y),
                                 p(t) * pi * std::sin(pi * x) * std::cos(pi * y)};
  };
  ex.dt = [dp](double x, double y, double t) { return dp(t) * std::sin(pi * x) * std::sin(pi * y); };
  ex.laplacian = [p](double x, double y, double t) {
    return -2.0 * pi * pi * p(t) * std::sin(pi * x) * std::sin(pi * y);
  };
  if (!transient) {
    ex.memory = [](double, double, double) { return 0.0; };
  } else if (kernel.kind == KernelSpec::Kind::Custom) {
    ex.memory = numeric_memory(ex.laplacian, kernel);
  } else {
    // int_0^t (t-s)^(tau-1) s^m ds = B(tau, m+1) t^(tau+m).
    const double a = kernel.tau, s0 = kernel.scale;
    ex.memory = [a, s0](double x, double y, double t) {
      if (t <= 0.0) return 0.0;
      const double conv = s0 * (std::beta(a, 4.0) * std::pow(t, a + 3.0) - std::beta(a, 3.0) * std::pow(t, a + 2.0) +
                                std::pow(t, a) / a);
      return -2.0 * pi * pi * conv * std::sin(pi * x) * std::sin(pi * y);
    };
  }
  return ex;
}

ExactSolution lshape_case1() {
  constexpr double c = 0.025;
  ExactSolution ex;
  auto E = [](double x, double y) { return std::exp(-50.0 * ((x - c) * (x - c) + (y - c) * (y - c))); };
  ex.u = [E](double x, double y, double) { return x * y * (1 - x) * (1 - y) * E(x, y); };
  ex.grad = [E](double x, double y, double) {
    const double P = x * y * (1 - x) * (1 - y), e = E(x, y);
    const double Px = y * (1 - y) * (1 - 2 * x), Py = x * (1 - x) * (1 - 2 * y);
    return std::array<double, 2>{(Px - 100.0 * (x - c) * P) * e, (Py - 100.0 * (y - c) * P) * e};
  };
  ex.dt = [](double, double, double) { return 0.0; };
  ex.laplacian = [E](double x, double y, double) {
    const double P = x * y * (1 - x) * (1 - y), e = E(x, y);
    const double Px = y * (1 - y) * (1 - 2 * x), Py = x * (1 - x) * (1 - 2 * y);
    const double lapP = -2.0 * y * (1 - y) - 2.0 * x * (1 - x);
    const double r2 = (x - c) * (x - c) + (y - c) * (y - c);
    const double gradP_gradE = -100.0 * ((x - c) * Px + (y - c) * Py);
    return (lapP + 2.0 * gradP_gradE + P * (-200.0 + 10000.0 * r2)) * e;
  };
  ex.memory = [](double, double, double) { return 0.0; };
  return ex;
}

ExactSolution lshape_case2() {
  ExactSolution ex;
  ex.u = [](double x, double y, double) { return std::pow(x * x + y * y, 0.25); };
  ex.grad = [](double x, double y, double) {
    const double r = std::hypot(x, y);
    const double s = 0.5 * std::pow(r, -1.5);
    return std::array<double, 2>{s * x, s * y};
  };
  ex.dt = [](double, double, double) { return 0.0; };
  ex.laplacian = [](double x, double y, double) { return 0.25 * std::pow(std::hypot(x, y), -1.5); };
  ex.memory = [](double, double, double) { return 0.0; };
  return ex;
}

ExactSolution moving_bump(const KernelSpec& kernel) {
  ExactSolution ex;
  auto E = [](double x, double y, double t) {
    const double c = bump_center(t);
    return std::exp(-50.0 * ((x - c) * (x - c) + (y - c) * (y - c)));
  };
  ex.u = [E](double x, double y, double t) { return bump_amplitude(t) * E(x, y, t); };
  ex.grad = [E](double x, double y, double t) {
    const double c = bump_center(t), v = bump_amplitude(t) * E(x, y, t);
    return std::array<double, 2>{-100.0 * (x - c) * v, -100.0 * (y - c) * v};
  };
  ex.dt = [E](double x, double y, double t) {
    const double c = bump_center(t), e = E(x, y, t);
    return bump_amplitude_dt(t) * e + bump_amplitude(t) * e * 40.0 * ((x - c) + (y - c));
  };
  ex.laplacian = [E](double x, double y, double t) {
    const double c = bump_center(t);
    const double r2 = (x - c) * (x - c) + (y - c) * (y - c);
    return bump_amplitude(t) * E(x, y, t) * (-200.0 + 10000.0 * r2);
  };
  ex.memory = numeric_memory(ex.laplacian, kernel);
  return ex;
}

ExactSolution linear_solution() {
  ExactSolution ex;
  ex.u = [](double x, double y, double) { return 1.0 + 2.0 * x - 3.0 * y; };
  ex.grad = [](double, double, double) { return std::array<double, 2>{2.0, -3.0}; };
  ex.dt = [](double, double, double) { return 0.0; };
  ex.laplacian = [](double, double, double) { return 0.0; };
  ex.memory = [](double, double, double) { return 0.0; };
  return ex;
}

}  // namespace

double bump_center(double t) { return 0.3 + 0.4 * t; }

double bump_amplitude(double t) {
  const double a = t < 0.5 ? 0.98 * t + 0.01 : 1.0 - 0.98 * t + 0.01;
  return 1.0 - std::exp(-50.0 * a * a);
}

double bump_amplitude_dt(double t) {
  if (t < 0.5) {
    const double a = 0.98 * t + 0.01;
    return 100.0 * 0.98 * a * std::exp(-50.0 * a * a);
  }
  const double a = 1.0 - 0.98 * t + 0.01;
  return -100.0 * 0.98 * a * std::exp(-50.0 * a * a);
}

SpaceTimeFn manufactured_forcing(const ExactSolution& ex, const ModelParams& p, bool transient) {
  return [ex, p, transient](double x, double y, double t) {
    const double u = ex.u(x, y, t);
    const auto g = ex.grad(x, y, t);
    double f = p.alpha * std::pow(u, p.delta) * (g[0] + g[1]) - p.nu * ex.laplacian(x, y, t) -
               p.beta * reaction(u, p.gamma, p.delta);
    if (transient) {
      f += ex.dt(x, y, t);
      if (p.eta != 0.0) f -= p.eta * ex.memory(x, y, t);
    }
    return f;
  };
}

Problem make_problem(const std::string& name, const ModelParams& params, const KernelSpec& kernel) {
  params.validate();
  Problem pr;
  pr.name = name;
  pr.params = params;
  pr.kernel = kernel;
  if (name == "sine") {
    pr.exact = sine_solution(false, kernel);
  } else if (name == "sine-transient") {
    pr.transient = true;
    pr.exact = sine_solution(true, kernel);
  } else if (name == "lshape-case1") {
    pr.domain = Domain::LShape;
    pr.exact = lshape_case1();
    pr.boundary = pr.exact.u;
  } else if (name == "lshape-case2") {
    pr.domain = Domain::LShape;
    pr.exact = lshape_case2();
    pr.boundary = pr.exact.u;
  } else if (name == "moving-bump") {
    pr.transient = true;
    pr.exact = moving_bump(kernel);
    pr.boundary = pr.exact.u;
  } else if (name == "linear") {
    pr.exact = linear_solution();
    pr.boundary = pr.exact.u;
  } else {
    throw std::invalid_argument("unknown problem: " + name);
  }
  if (!pr.transient) pr.params.eta = 0.0;
  pr.forcing = manufactured_forcing(pr.exact, pr.params, pr.transient);
  return pr;
}

}  // namespace gbhe
