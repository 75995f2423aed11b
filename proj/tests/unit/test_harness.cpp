#include <doctest.h>

#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "gbhe/config.hpp"
#include "gbhe/harness.hpp"

using namespace gbhe;
namespace ad = boost::math::differentiation;

namespace {

ConvergenceRow row(double h, int dofs, double e) {
  ConvergenceRow r;
  r.series = "s";
  r.h_max = h;
  r.dofs = dofs;
  r.dg_error = e;
  return r;
}

// Derivatives of u(x, y, t) by forward-mode automatic differentiation.
struct Jet {
  double u, ux, uy, ut, lap;
};

template <class F>
Jet jet(F u, double x, double y, double t) {
  const auto v = ad::make_ftuple<double, 2, 2, 1>(x, y, t);
  // the 0 * t term keeps the time variable in the result type for stationary u
  const auto r = u(std::get<0>(v), std::get<1>(v), std::get<2>(v)) + 0.0 * std::get<2>(v);
  return {r.derivative(0, 0, 0), r.derivative(1, 0, 0), r.derivative(0, 1, 0), r.derivative(0, 0, 1),
          r.derivative(2, 0, 0) + r.derivative(0, 2, 0)};
}

// u_t + alpha u^delta (u_x + u_y) - nu Lap u - eta int_0^t K(t-s) Lap u(s) ds - beta c(u)
template <class F>
double pde_forcing(F u, const ModelParams& p, double kernel_tau, double x, double y, double t, bool transient) {
  const Jet j = jet(u, x, y, t);
  const double ud = std::pow(j.u, p.delta);
  double f = p.alpha * ud * (j.ux + j.uy) - p.nu * j.lap - p.beta * j.u * (1 - ud) * (ud - p.gamma);
  if (transient) {
    f += j.ut;
    if (p.eta != 0.0) {
      boost::math::quadrature::tanh_sinh<double> ts;
      // r = t - s puts the kernel singularity at the left endpoint
      const double mem = ts.integrate(
          [&](double r) { return std::pow(r, kernel_tau - 1.0) * jet(u, x, y, t - r).lap; }, 0.0, t);
      f -= p.eta * mem;
    }
  }
  return f;
}

template <class F>
void check_forcing(const std::string& name, F u, const ModelParams& p, double xlo, double ylo, double tlo, double thi,
                   bool lshape = false) {
  const Problem pr = make_problem(name, p, KernelSpec::power(0.5));
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> X(xlo, 1.0), Y(ylo, 1.0), T(tlo, thi);
  int done = 0;
  while (done < 100) {
    const double x = X(rng), y = Y(rng), t = T(rng);
    if (lshape && x > 0 && y > 0) continue;
    if (lshape && std::hypot(x, y) < 0.05) continue;
    const double ref = pde_forcing(u, p, 0.5, x, y, t, pr.transient);
    CHECK(std::abs(pr.forcing(x, y, t) - ref) < 1e-8);
    CHECK(std::abs(pr.exact.u(x, y, t) - jet(u, x, y, t).u) < 1e-13);
    ++done;
  }
}

}  // namespace

TEST_CASE("convergence rates") {
  std::vector<ConvergenceRow> a{row(0.2, 100, 0.1), row(0.1, 400, 0.05)};
  compute_rates(a, RateKind::MeshSize);
  CHECK(std::isnan(a[0].rate));
  CHECK(a[1].rate == doctest::Approx(1.0));

  std::vector<ConvergenceRow> b{row(0.2, 100, 0.04), row(0.1, 400, 0.01)};
  compute_rates(b, RateKind::MeshSize);
  CHECK(b[1].rate == doctest::Approx(2.0));

  std::vector<ConvergenceRow> c{row(0.2, 100, 0.1), row(0.1, 400, 0.05)};
  compute_rates(c, RateKind::Dofs);
  CHECK(c[1].rate == doctest::Approx(1.0));

  std::vector<ConvergenceRow> bad{row(0.1, 100, 0.1), row(0.2, 400, 0.05)};
  CHECK_THROWS(compute_rates(bad, RateKind::MeshSize));
}

TEST_CASE("manufactured forcing matches the PDE applied to the exact solution") {
  const double pi = M_PI;
  ModelParams p;
  check_forcing("sine", [pi](auto x, auto y, auto) { return sin(pi * x) * sin(pi * y); }, p, 0.0, 0.0, 0.0, 0.0);

  ModelParams pm = p;
  pm.eta = 0.1;
  for (int delta : {1, 2}) {
    pm.delta = delta;
    check_forcing(
        "sine-transient", [pi](auto x, auto y, auto t) { return (t * t * t - t * t + 1) * sin(pi * x) * sin(pi * y); },
        pm, 0.0, 0.0, 0.01, 1.0);
  }

  check_forcing(
      "lshape-case1",
      [](auto x, auto y, auto) {
        return x * y * (1 - x) * (1 - y) * exp(-50 * ((x - 0.025) * (x - 0.025) + (y - 0.025) * (y - 0.025)));
      },
      p, -1.0, -1.0, 0.0, 0.0, true);
  check_forcing("lshape-case2", [](auto x, auto y, auto) { return pow(x * x + y * y, 0.25); }, p, -1.0, -1.0, 0.0, 0.0,
                true);

  auto bump = [](auto x, auto y, auto t) {
    const auto c = 0.3 + 0.4 * t;
    const auto a = 0.98 * t + 0.01;
    return (1 - exp(-50 * a * a)) * exp(-50 * ((x - c) * (x - c) + (y - c) * (y - c)));
  };
  check_forcing("moving-bump", bump, p, 0.0, 0.0, 0.0, 0.49);
}

TEST_CASE("config files") {
  std::istringstream is(R"(experiment = gbhe-be-uniform
[params]
alpha = 0.5
delta = 2
eta_series = 0, 0.25
[kernel]
kernel_tau = 0.75
[discretization]
levels = 4,8
dt = 0.01
out_dir = "x/y"
[adapt]
mu = 0.3
)");
  const ExperimentConfig c = load_config(is);
  CHECK(c.experiment == "gbhe-be-uniform");
  CHECK(c.params.alpha == 0.5);
  CHECK(c.params.delta == 2);
  CHECK(c.eta_series == std::vector<double>{0.0, 0.25});
  CHECK(c.kernel_tau == 0.75);
  CHECK(c.levels == std::vector<int>{4, 8});
  CHECK(c.dt == 0.01);
  CHECK(c.out_dir == "x/y");
  CHECK(c.adapt.mu == 0.3);
  c.validate();

  std::istringstream unknown("experiment = sgbhe-uniform\nfoo = 1\n");
  CHECK_THROWS(load_config(unknown));
  std::istringstream missing("degree = 2\n");
  CHECK_THROWS(load_config(missing));
  std::istringstream badexp("experiment = nope\n");
  CHECK_THROWS(load_config(badexp));
  std::istringstream badnum("experiment = sgbhe-uniform\ndegree = two\n");
  CHECK_THROWS(load_config(badnum));

  ExperimentConfig d = default_config("gbhe-cn-uniform");
  CHECK(d.degree == 2);
  apply_setting(d, "degree", "1");
  CHECK(d.degree == 1);
  ExperimentConfig l = default_config("lshape-adaptive-case2");
  l.levels = {3, 6};
  CHECK_THROWS(l.validate());
}

TEST_CASE("experiment tables") {
  ExperimentConfig c = default_config("gbhe-be-uniform");
  c.levels = {2, 4};
  c.write_files = false;
  const ConvergenceTable t = run_experiment(c);
  CHECK(t.series("eta=0").size() == 2);
  CHECK(t.series("eta=0.1").size() == 2);
  for (const auto& r : t.rows) {
    CHECK(r.dg_error > 0);
    CHECK(r.indicator > 0);
  }

  std::ostringstream a, b;
  write_csv(t, a, false);
  write_csv(run_experiment(c), b, false);
  CHECK(a.str() == b.str());
  std::istringstream lines(a.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "level,h_max,dofs,dg_error,l2_error,indicator,efficiency,rate,oscillation,series");

  std::ostringstream stamped;
  write_csv(t, stamped, true);
  CHECK(stamped.str().rfind("# gbhe-be-uniform generated ", 0) == 0);
  CHECK(stamped.str().substr(stamped.str().find('\n') + 1) == a.str());
}
