// Unit tests for the profile/coordinate/energy layer.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "wmlab/profile.hpp"

using namespace wmlab;

namespace {
BlowupParams params(double nu = 1.0, double t0 = 0.1) {
  BlowupParams p;
  p.nu = nu;
  p.t0 = t0;
  p.s = 0.25 + 0.4 * (nu / 2.0 - 0.25) + 0.1;  // inside (1/4, nu/2)
  p.s = 0.5 * (0.25 + nu / 2.0);
  return p;
}
}  // namespace

TEST_CASE("BlowupParams validation") {
  auto p = params();
  CHECK_NOTHROW(p.validate());
  p.nu = 0.4;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = params();
  p.s = 0.6;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = params();
  p.t0 = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = params();
  p.k = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("q_profile values and limits") {
  CHECK(q_profile(0.0) == 0.0);
  CHECK(q_profile(1.0) == doctest::Approx(M_PI / 2).epsilon(1e-14));
  const double far = q_profile(1e6);
  CHECK(far > M_PI - 3e-6);
  CHECK(far < M_PI);
  CHECK_THROWS_AS(q_profile(-1.0), std::invalid_argument);
}

TEST_CASE("q_profile satisfies the flat harmonic-map ODE") {
  // |Q'' + Q'/R - sin(2Q)/(2R^2)| < 1e-8 with analytic derivatives
  double worst = 0.0;
  for (double R = 0.01; R <= 100.0; R *= 1.07) {
    const double res = q_profile_deriv2(R) + q_profile_deriv(R) / R -
                       std::sin(2.0 * q_profile(R)) / (2.0 * R * R);
    worst = std::max(worst, std::abs(res));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("lambda_scale") {
  CHECK(lambda_scale(0.1, 1.0) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(lambda_scale(1.0, 0.77) == doctest::Approx(1.0).epsilon(1e-14));
  // frozen value of 0.01^{-1.6}
  CHECK(lambda_scale(0.01, 0.6) ==
        doctest::Approx(1584.8931924611136).epsilon(1e-12));
  CHECK_THROWS_AS(lambda_scale(0.0, 1.0), std::invalid_argument);
  // lambda(t) * t = t^{-nu} grows without bound as t -> 0
  for (double nu : {0.6, 0.8, 1.0}) {
    const double t = std::pow(10.0, -3.0 / nu);
    CHECK(lambda_scale(t, nu) * t > 1e3 * (1.0 - 1e-12));
  }
}

TEST_CASE("cone point charts round-trip") {
  for (double nu : {0.6, 0.8, 1.0}) {
    auto p = params(nu);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> ut(0.01, p.t0);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    for (int i = 0; i < 3000; ++i) {
      const double t = ut(rng);
      const double alpha = ua(rng) * t;
      if (alpha == 0.0) continue;
      auto c = ConePoint::from_t_alpha(t, alpha, p);
      auto c2 = ConePoint::from_tau_R(c.tau, c.R, p);
      CHECK(std::abs(c2.t - t) / t < 1e-12);
      CHECK(std::abs(c2.alpha - alpha) / alpha < 1e-12);
      // b3 = a^2 b5 identically
      CHECK(c.b3 == doctest::Approx(c.a * c.a * c.b5).epsilon(1e-13));
    }
  }
}

TEST_CASE("d tau / dt equals lambda") {
  auto p = params(0.7);
  const double t = 0.05, h = 1e-6;
  const auto cp = ConePoint::from_t_alpha(t + h, 0.01, p);
  const auto cm = ConePoint::from_t_alpha(t - h, 0.01, p);
  const double dtau_dt = (cp.tau - cm.tau) / (2.0 * h);
  CHECK(dtau_dt ==
        doctest::Approx(lambda_scale(t, p.nu)).epsilon(1e-6));
}

TEST_CASE("ConeGridFunction validation and CSV round-trip") {
  ConeGridFunction g;
  g.chart = Chart::kAlphaT;
  g.tGrid = {0.05, 0.1};
  g.radialGrids = {{0.0, 0.02, 0.05}, {0.0, 0.05, 0.1}};
  g.values = {{0.0, 1.0, 2.0}, {0.0, 0.5, 1.5}};
  CHECK_NOTHROW(g.validate());

  const std::string path = "/tmp/wmlab_test_cgf.csv";
  g.write_csv(path);
  auto h = ConeGridFunction::read_csv(path);
  CHECK(h.tGrid == g.tGrid);
  CHECK(h.radialGrids == g.radialGrids);
  CHECK(h.values == g.values);

  g.values[0][1] = std::nan("");
  CHECK_THROWS(g.validate());
  g.values[0][1] = 1.0;
  g.radialGrids[0][2] = 0.06;  // outside cone (alpha > t)
  CHECK_THROWS(g.validate());
}

TEST_CASE("cone radial grid shape") {
  auto p = params();
  auto g = cone_radial_grid(0.1, p, 512);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(0.1));
  // finest cell resolves 1e-3 / lambda(t)
  CHECK(g[1] <= 1.1e-3 / lambda_scale(0.1, p.nu));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("energy of the soliton slice is 2 in the flat approximation") {
  // Static profile u(alpha) = Q(lambda alpha) over the full half-line in the
  // small-alpha (flat) regime: integral of 4r/(1+r^2)^2 dr = 2.  Use a tiny t
  // so the whole profile sits at small alpha where sin(alpha) ~ alpha.
  auto p = params(1.0, 0.01);
  const double t = 0.01;
  const double lam = lambda_scale(t, p.nu);
  // sample alpha out to where Q has saturated: R up to 1e4
  auto alpha = logspace(1e-9, 1e4 / lam, 4000);
  alpha.insert(alpha.begin(), 0.0);
  std::vector<double> u(alpha.size()), ut(alpha.size(), 0.0);
  for (std::size_t i = 0; i < alpha.size(); ++i) u[i] = q_profile(lam * alpha[i]);
  const double E = energy(alpha, u, ut);
  CHECK(E == doctest::Approx(2.0).epsilon(5e-3));
}

TEST_CASE("energy trivial cases") {
  auto alpha = linspace(0.0, M_PI, 200);
  std::vector<double> u(alpha.size(), 0.0), ut(alpha.size(), 0.0);
  CHECK(energy(alpha, u, ut) == doctest::Approx(0.0).epsilon(1e-12));
  // u == pi contributes nothing either
  for (auto& v : u) v = M_PI;
  CHECK(std::abs(energy(alpha, u, ut)) < 1e-10);
  // grid too coarse
  auto few = linspace(0.0, M_PI, 8);
  std::vector<double> uf(8, 0.0);
  CHECK_THROWS_AS(energy(few, uf, uf), std::invalid_argument);
}

TEST_CASE("local energy: restriction and concentration") {
  auto alpha = linspace(0.0, M_PI, 400);
  std::vector<double> u(alpha.size()), ut(alpha.size(), 0.0);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    u[i] = M_PI * alpha[i] * alpha[i] / (M_PI * M_PI);
  const double full = energy(alpha, u, ut);
  CHECK(local_energy(alpha, u, ut, M_PI) == doctest::Approx(full).epsilon(1e-12));
  CHECK(local_energy(alpha, u, ut, 1.0) < full);
  std::vector<double> z(alpha.size(), 0.0);
  CHECK(local_energy(alpha, z, z, 1.0) == doctest::Approx(0.0));

  // Soliton slices at two times: local energy ratio within 10% of 1.
  auto p = params(1.0, 0.05);
  double E[2];
  const double times[2] = {0.05, 0.02};
  for (int m = 0; m < 2; ++m) {
    const double t = times[m];
    const double lam = lambda_scale(t, p.nu);
    auto ag = logspace(1e-4 / lam, t, 3000);
    ag.insert(ag.begin(), 0.0);
    std::vector<double> us(ag.size()), uts(ag.size(), 0.0);
    for (std::size_t i = 0; i < ag.size(); ++i) us[i] = q_profile(lam * ag[i]);
    E[m] = local_energy(ag, us, uts, t);
  }
  CHECK(E[1] / E[0] == doctest::Approx(1.0).epsilon(0.1));
}
