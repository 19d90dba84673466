#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "wmlab/elliptic.hpp"
#include "wmlab/numerics.hpp"
#include "wmlab/profile.hpp"

using namespace wmlab;

namespace {
// Interior operator L = d_RR + d_R/R - W(R)/R^2 applied to an analytic triple.
double apply_L(double R, double g, double gp, double gpp) {
  return gpp + gp / R - interior_potential(R) * g / (R * R);
}

// Boundary operator in x = 1 - a: P w'' + B w' + C w.
double apply_Lbeta_x(double beta, double x, double w, double wp, double wpp) {
  const double P = x * (2.0 - x);
  const double B = -(1.0 / (1.0 - x) + (2.0 * beta - 2.0) * (1.0 - x));
  const double C = beta - beta * beta - 1.0 / ((1.0 - x) * (1.0 - x));
  return P * wpp + B * wp + C * w;
}
}  // namespace

TEST_CASE("interior kernel annihilated by the linearized operator") {
  for (double R : logspace(1e-2, 1e3, 60)) {
    const double d = 1.0 + R * R;
    const double g = 2.0 * R / d;
    const double gp = 2.0 * (1.0 - R * R) / (d * d);
    const double gpp = 4.0 * R * (R * R - 3.0) / (d * d * d);
    CHECK(std::abs(apply_L(R, g, gp, gpp)) < 1e-8 * (1.0 + std::abs(g)));
  }
}

TEST_CASE("interior solve reproduces a manufactured solution") {
  auto Rg = logspace(1e-3, 40.0, 1600);
  std::vector<double> f(Rg.size());
  for (std::size_t i = 0; i < Rg.size(); ++i) {
    const double R = Rg[i];
    const double e = std::exp(-R);
    const double g = R * R * R * e;
    const double gp = (3.0 * R * R - R * R * R) * e;
    const double gpp = (6.0 * R - 6.0 * R * R + R * R * R) * e;
    f[i] = apply_L(R, g, gp, gpp);
  }
  auto V = interior_green_apply(Rg, f);
  for (double R : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
    const double exact = R * R * R * std::exp(-R);
    CHECK(V.value(R) == doctest::Approx(exact).epsilon(1e-6));
    CHECK(V.deriv(R) ==
          doctest::Approx((3.0 * R * R - R * R * R) * std::exp(-R)).epsilon(1e-5));
  }
}

TEST_CASE("interior solve: zero source gives zero, bad source rejected") {
  auto Rg = logspace(1e-3, 10.0, 400);
  std::vector<double> f(Rg.size(), 0.0);
  auto V = interior_green_apply(Rg, f);
  CHECK(std::abs(V.value(1.0)) < 1e-14);
  // A 1/R singular source must be refused.
  for (std::size_t i = 0; i < Rg.size(); ++i) f[i] = 1.0 / Rg[i];
  CHECK_THROWS_AS(interior_green_apply(Rg, f), std::invalid_argument);
}

TEST_CASE("closed-form error of the bare profile") {
  BlowupParams p;
  p.nu = 1.0;
  p.t0 = 0.1;
  CHECK(error_e0_flat_bracket(1.0, p) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(error_e0_flat_bracket(2.0, p) ==
        doctest::Approx(-8.0 / 25.0).epsilon(1e-14));
  CHECK(std::abs(error_e0_flat_bracket(1e-12, p)) < 1e-10);

  // R = 1 at t = 0.1 (nu = 1): flat part 2 plus the curvature correction,
  // which at alpha -> 0 contributes t^2 * (2/3) * R/(1+R^2) + 0 = 0.01/3.
  auto c = ConePoint::from_t_alpha(0.1, 1.0 * std::pow(0.1, 2.0), p);
  CHECK(c.R == doctest::Approx(1.0));
  CHECK(error_e0_t2(c, p) == doctest::Approx(2.0 + 0.01 / 3.0).epsilon(1e-5));
  CHECK(error_e0(c, p) ==
        doctest::Approx((2.0 + 0.01 / 3.0) / 0.01).epsilon(1e-5));
}

TEST_CASE("endpoint fundamental system satisfies the boundary equation") {
  for (double beta : {0.8, 1.0, 1.3, 1.5, 2.5}) {
    auto fs = boundary_frobenius(beta, 40);
    CHECK(fs.resonant == (beta == 1.5 || beta == 2.5));
    const double h = 1e-5;
    for (double x : {0.02, 0.1, 0.2}) {
      const double w2pp = (fs.phi2_deriv(x + h) - fs.phi2_deriv(x - h)) / (2 * h);
      const double r2 = apply_Lbeta_x(beta, x, fs.phi2(x), fs.phi2_deriv(x), w2pp);
      CHECK(std::abs(r2) < 5e-7 * (1.0 + std::abs(fs.phi2(x))));
      const double w1pp = (fs.phi1_deriv(x + h) - fs.phi1_deriv(x - h)) / (2 * h);
      const double r1 = apply_Lbeta_x(beta, x, fs.phi1(x), fs.phi1_deriv(x), w1pp);
      CHECK(std::abs(r1) < 5e-7 * (1.0 + std::abs(fs.phi1(x))));
    }
    if (fs.resonant) CHECK(std::abs(fs.cLog) > 1e-8);
  }
  CHECK_THROWS_AS(boundary_frobenius(0.4), std::invalid_argument);
}

TEST_CASE("boundary solve: zero source, residual, vanishing orders") {
  auto zero = [](double) { return 0.0; };
  auto s0 = boundary_ode_solve_fn(1.0, zero, {});
  for (double a : {0.1, 0.5, 0.9}) CHECK(std::abs(s0.interp.value(a)) < 1e-12);

  auto lin = [](double a) { return a; };
  auto s = boundary_ode_solve_fn(1.0, lin, {});
  // residual of the ODE in the interior (interp derivatives)
  for (double a : {0.2, 0.4, 0.6, 0.8}) {
    const double W = s.interp.value(a), Wp = s.interp.deriv(a),
                 Wpp = s.interp.deriv2(a);
    const double q = 1.0 / a + 2.0 * a * 1.0 - 2.0 * a;
    const double c = -1.0 + 1.0 - 1.0 / (a * a);
    const double res = (1.0 - a * a) * Wpp + q * Wp + c * W - a;
    CHECK(std::abs(res) < 5e-6);
  }
  // cubic vanishing at a = 0 with the predicted coefficient f'(0)/8
  CHECK(s.cubicCoeff == doctest::Approx(1.0 / 8.0).epsilon(0.05));
  // endpoint exponent beta + 1/2
  CHECK(std::abs(s.singularExponent - 1.5) < 0.05);
  CHECK_THROWS_AS(boundary_ode_solve_fn(0.5, lin, {}), std::invalid_argument);
}

TEST_CASE("boundary solve: endpoint exponent tracks beta") {
  auto src = [](double a) { return a * (1.0 + 0.3 * a * a); };
  for (double beta : {1.0, 1.4}) {
    auto s = boundary_ode_solve_fn(beta, src, {});
    CHECK(std::abs(s.singularExponent - (beta + 0.5)) < 0.05);
  }
}

TEST_CASE("boundary solve: log branch appears exactly at resonance") {
  auto src = [](double a) { return a * (1.0 - 0.5 * a); };
  double resonantStrength = 1e9, cleanStrength = 0.0;
  for (double beta : {1.5, 2.5}) {
    auto s = boundary_ode_solve_fn(beta, src, {});
    CHECK(s.endpoint.resonant);
    resonantStrength = std::min(resonantStrength, s.logBranchStrength);
  }
  for (double beta : {1.2, 1.7}) {
    auto s = boundary_ode_solve_fn(beta, src, {});
    CHECK_FALSE(s.endpoint.resonant);
    cleanStrength = std::max(cleanStrength, s.logBranchStrength);
  }
  CHECK(resonantStrength > 10.0 * cleanStrength);
  CHECK(resonantStrength > 1e-4);
}

TEST_CASE("depth-1 modifier: exact error bookkeeping and decay gain") {
  BlowupParams p;
  p.nu = 1.0;
  p.t0 = 0.1;
  p.k = 1;
  ModifierOptions opts;
  auto st = build_modifier(p, opts);
  REQUIRE(st.corrections.size() == 1);
  CHECK(st.corrections[0]->tPower == doctest::Approx(2.0 * p.nu));

  // upto = 0 reproduces the closed-form bare error
  for (double t : {0.02, 0.05}) {
    for (double al : {0.2 * t, 0.6 * t, 0.95 * t}) {
      auto c = ConePoint::from_t_alpha(t, al, p);
      CHECK(st.error(t, al, 0) == doctest::Approx(error_e0(c, p)).epsilon(1e-12));
    }
  }

  // step log records a genuine shrink
  REQUIRE(st.stepLog.size() == 1);
  CHECK(st.stepLog[0].errorMetricAfter < 0.5 * st.stepLog[0].errorMetricBefore);

  // sup |t^2 e| slices: e_1 decays faster than e_0 by about t^{2 nu}
  auto metric = [&](double t, int upto) {
    const double lam = lambda_scale(t, p.nu);
    double sup = 0.0;
    for (double R : logspace(1e-2, 0.98 * lam * t, 120))
      sup = std::max(sup, std::abs(t * t * st.error(t, R / lam, upto)));
    return sup;
  };
  // The slice sup of t^2 e_1 is attained near the cone boundary where the
  // interior class grows like R log R, so it decays t^{nu} faster than the
  // O(1) bare-error sup; the known log factor is divided out before fitting.
  std::vector<double> ts = {0.004, 0.008, 0.016, 0.032};
  std::vector<double> m0, m1;
  for (double t : ts) {
    m0.push_back(metric(t, 0));
    m1.push_back(metric(t, 1) / std::log(1.0 / t));
  }
  CHECK(std::abs(fit_loglog_slope(ts, m0)) < 0.2);
  CHECK(std::abs(fit_loglog_slope(ts, m1) - p.nu) < 0.35);
}

TEST_CASE("depth-2 modifier: boundary peel and per-step shrink") {
  BlowupParams p;
  p.nu = 1.0;
  p.t0 = 0.1;
  p.k = 2;
  ModifierOptions opts;
  auto st = build_modifier(p, opts);
  REQUIRE(st.corrections.size() == 3);
  CHECK(st.corrections[0]->kind == "interior");
  CHECK(st.corrections[1]->kind == "boundary");
  CHECK(st.corrections[2]->kind == "interior");
  CHECK(st.corrections[1]->tPower == doctest::Approx(p.nu));
  CHECK(st.corrections[2]->tPower == doctest::Approx(4.0 * p.nu));
  for (const auto& rec : st.stepLog)
    CHECK(rec.errorMetricAfter < 0.95 * rec.errorMetricBefore);

  // consecutive odd errors gain t^{2 nu} (class log factors divided out)
  auto metric = [&](double t, int upto, int logPow) {
    const double lam = lambda_scale(t, p.nu);
    double sup = 0.0;
    for (double R : logspace(1e-2, 0.98 * lam * t, 120))
      sup = std::max(sup, std::abs(t * t * st.error(t, R / lam, upto)));
    return sup / std::pow(std::log(1.0 / t), logPow);
  };
  std::vector<double> ts = {0.004, 0.008, 0.016, 0.032};
  std::vector<double> m1, m3;
  for (double t : ts) {
    m1.push_back(metric(t, 1, 1));
    m3.push_back(metric(t, 3, 3));
  }
  const double gap = fit_loglog_slope(ts, m3) - fit_loglog_slope(ts, m1);
  CHECK(std::abs(gap - 2.0 * p.nu) < 0.3);
}

TEST_CASE("extension beyond the cone is continuous and compactly supported") {
  BlowupParams p;
  p.nu = 0.8;
  p.t0 = 0.1;
  p.k = 1;
  p.s = 0.3;
  auto st = build_modifier(p, {});
  const double t = 0.05;
  const double inner = st.correction_sum(t, 0.999 * t);
  const double outer = st.correction_sum(t, 1.001 * t);
  CHECK(outer == doctest::Approx(inner).epsilon(0.02));
  CHECK(st.correction_sum(t, 1.9 * t) == 0.0);
  CHECK(st.error(t, 1.9 * t) == 0.0);
  // derivative consistency against finite differences inside the cone
  const double al = 0.5 * t, h = 1e-7;
  const double fd_t = (st.u(t + h, al) - st.u(t - h, al)) / (2 * h);
  CHECK(st.u_dt(t, al) == doctest::Approx(fd_t).epsilon(1e-5));
  const double fd_a = (st.u(t, al + h) - st.u(t, al - h)) / (2 * h);
  CHECK(st.u_dalpha(t, al) == doctest::Approx(fd_a).epsilon(1e-5));
}
