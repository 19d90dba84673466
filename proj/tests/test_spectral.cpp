#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "wmlab/numerics.hpp"
#include "wmlab/spectral.hpp"

using namespace wmlab;
using cplx = std::complex<double>;

namespace {

double phi_zero(double R) { return std::pow(R, 1.5) / (1.0 + R * R); }

// One shared cache for the transform tests; the frequency window is trimmed
// to [1e-6, 1e3] and the radial window widened to 50 so the widest test bump
// decays below the forward-transform boundary threshold.
const SpectralData& shared_data() {
  static const SpectralData d = [] {
    SpectralOptions o;
    o.xiMax = 1e3;
    o.perDecadeHigh = 60;
    o.Rout = 50.0;
    return build_spectral(o);
  }();
  return d;
}

// Higher-resolution solution tables for the pointwise ODE-level checks:
// finite-difference stencils and Wronskian constancy resolve interpolation
// and integration noise that the production tables keep below transform
// accuracy but above these tighter pointwise tolerances.
const JostSolutions& fine_jost() {
  static const JostSolutions j = [] {
    JostSolutions::Options o;
    o.perDecade = 800;
    o.odeRelTol = 1e-14;
    o.odeAbsTol = 1e-15;
    // hand the series over to the ODE earlier: near its default edge the
    // alternating-term cancellation leaves ~4e-11 table noise, visible to
    // second-difference stencils
    o.seriesQ2 = 9.0;
    return JostSolutions(o);
  }();
  return j;
}

std::vector<double> bump(const std::vector<double>& R, double s) {
  std::vector<double> f(R.size());
  for (std::size_t i = 0; i < R.size(); ++i)
    f[i] = std::pow(R[i], 1.5) * std::exp(-(R[i] * R[i]) / (s * s));
  return f;
}

// R f'(R) for the bump, analytically.
std::vector<double> bump_rdr(const std::vector<double>& R, double s) {
  auto f = bump(R, s);
  for (std::size_t i = 0; i < R.size(); ++i)
    f[i] *= 1.5 - 2.0 * R[i] * R[i] / (s * s);
  return f;
}

// Weighted norm restricted to the frequency band where the coefficients of
// the test function sit above the forward-quadrature noise floor.  Outside
// that band the operator outputs amplified quadrature noise (under strong
// high-frequency weights) while the true contribution is negligible, so the
// restriction is what makes refinement comparisons meaningful.
double banded_norm(const SpectralData& d, const std::vector<double>& v,
                   const std::vector<double>& signal, double s) {
  double m = 0.0;
  for (double x : signal) m = std::max(m, std::abs(x));
  double acc = d.rhoTailMass * v.front() * v.front();
  for (std::size_t ix = 0; ix < d.nXi(); ++ix) {
    if (std::abs(signal[ix]) <= 1e-7 * m) continue;
    const double xi = d.xiGrid[ix];
    acc += d.wXi[ix] * std::pow(1.0 + xi * xi, s) * d.rho[ix] * v[ix] * v[ix];
  }
  return std::sqrt(acc);
}

}  // namespace

//---------------------------------------------------------------- solutions

TEST_CASE("regular solution at zero frequency matches the closed form") {
  JostSolutions j;
  for (double R : logspace(0.01, 100.0, 80)) {
    const double ref = phi_zero(R);
    CHECK(std::abs(j.phi(R, 0.0) - ref) < 1e-10 * (1.0 + std::abs(ref)));
  }
}

TEST_CASE("regular solution has the R^{3/2} origin behaviour") {
  JostSolutions j;
  const double R = 1e-3;
  // the genuine leading correction is -R^2 (1 + O(xi)), i.e. ~1.1e-6 here;
  // the bound sits just above it
  CHECK(std::abs(j.phi(R, 1.0) / std::pow(R, 1.5) - 1.0) < 1.5e-6);
}

TEST_CASE("regular solution satisfies the ODE (finite-difference residual)") {
  const JostSolutions& j = fine_jost();
  // Stay away from the origin: phi ~ R^{3/2} has fractional-power higher
  // derivatives there, which invalidates polynomial difference stencils.
  for (double xi : {0.1, 1.0, 10.0}) {
    auto Rs = logspace(0.5, 20.0, 25);
    double supPhi = 0.0;
    for (double R : Rs) supPhi = std::max(supPhi, std::abs(j.phi(R, xi)));
    const double h = 0.012;
    for (double R : Rs) {
      const double pm2 = j.phi(R - 2 * h, xi), pm1 = j.phi(R - h, xi);
      const double p0 = j.phi(R, xi);
      const double pp1 = j.phi(R + h, xi), pp2 = j.phi(R + 2 * h, xi);
      const double d2 =
          (-pm2 + 16.0 * pm1 - 30.0 * p0 + 16.0 * pp1 - pp2) / (12.0 * h * h);
      const double resid = -d2 + (spectral_potential(R) - xi) * p0;
      CHECK(std::abs(resid) < 1e-6 * supPhi);
    }
  }
}

TEST_CASE("outgoing solution far-field modulus and phase") {
  JostSolutions j;
  const double xi = 1.0;
  const cplx v50 = j.psi_plus(50.0, xi);
  CHECK(std::abs(std::abs(v50) * std::pow(xi, 0.25) - 1.0) < 1e-4);
  // phase advances by sqrt(xi) * dR between nearby far-field samples
  const double dR = 0.1;
  const cplx v51 = j.psi_plus(50.0 + dR, xi);
  double dphase = std::arg(v51 / v50);
  CHECK(std::abs(dphase - std::sqrt(xi) * dR) < 1e-4);
}

TEST_CASE("outgoing/incoming Wronskian equals -2i") {
  JostSolutions j;
  for (double xi : {0.1, 1.0, 10.0}) {
    for (double R : {5.0, 20.0, 80.0}) {
      if (R * R * xi < 4.0) continue;
      cplx v, dv;
      j.psi_plus(R, xi, v, dv);
      // W(psi+, psi-) with psi- = conj(psi+)
      const cplx w = v * std::conj(dv) - dv * std::conj(v);
      CHECK(std::abs(w - cplx(0.0, -2.0)) < 1e-6);
    }
  }
}

TEST_CASE("far-field envelope approaches the free wave like c/q") {
  JostSolutions j;
  const double xi = 1.0;
  std::vector<double> cs;
  for (double q : {100.0, 200.0, 400.0, 800.0}) {
    const double R = q / std::sqrt(xi);
    const cplx sigma =
        j.psi_plus(R, xi) * std::pow(xi, 0.25) * std::exp(cplx(0.0, -q));
    cs.push_back(std::abs(sigma - 1.0) * q);
  }
  double lo = cs[0], hi = cs[0];
  for (double c : cs) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  CHECK(hi / lo < 1.2);       // fitted prefactor is stable
  CHECK(hi < 1.0);            // and |sigma - 1| < c/q with a modest c
}

TEST_CASE("second solution keeps unit Wronskian against the regular one") {
  const JostSolutions& j = fine_jost();
  for (double xi : {0.0, 0.1, 1.0, 10.0}) {
    std::vector<double> w;
    for (double R : {0.05, 0.2, 0.5, 1.0, 1.5}) {
      // constancy is checked well inside the series window; at its edge the
      // alternating-term cancellation leaves ~5e-8 table noise
      if (R * R * xi > 10.0) continue;
      double p, dp, t, dt;
      j.phi(R, xi, p, dp);
      j.theta(R, xi, t, dt);
      w.push_back(t * dp - dt * p);
    }
    double lo = w[0], hi = w[0];
    for (double v : w) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      CHECK(std::abs(v - 1.0) < 1e-6);
    }
    CHECK(hi - lo < 1e-8);  // constancy in R
  }
}

//------------------------------------------------------------------- density

TEST_CASE("density is positive and tied to the connection coefficient") {
  const auto& d = shared_data();
  for (std::size_t ix = 0; ix < d.nXi(); ++ix) {
    CHECK(d.rho[ix] > 0.0);
    const double fromA = 1.0 / (std::numbers::pi * std::norm(d.aCoeff[ix]));
    CHECK(std::abs(d.rho[ix] - fromA) <= 1e-12 * d.rho[ix]);
  }
}

TEST_CASE("density is insensitive to the matching radius") {
  JostSolutions j;
  for (double xi : {0.01, 1.0, 100.0}) {
    const cplx a1 = j.connection_at(xi, std::sqrt(50.0));
    const cplx a2 = j.connection_at(xi, std::sqrt(200.0));
    const double r1 = 1.0 / (std::numbers::pi * std::norm(a1));
    const double r2 = 1.0 / (std::numbers::pi * std::norm(a2));
    CHECK(std::abs(r1 - r2) < 0.01 * r1);
  }
}

TEST_CASE("density follows its high-frequency asymptote") {
  const auto& d = shared_data();
  for (std::size_t ix = 0; ix < d.nXi(); ++ix) {
    const double xi = d.xiGrid[ix];
    if (xi < 10.0) continue;
    CHECK(d.rho[ix] * 8.0 / (xi + 8.0) == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("density has the logarithmic low-frequency law") {
  const auto& d = shared_data();
  double lo = 1e300, hi = 0.0;
  for (std::size_t ix = 0; ix < d.nXi(); ++ix) {
    const double xi = d.xiGrid[ix];
    if (xi < 1e-4 || xi > 1e-2) continue;
    const double l = std::log(xi);
    const double m = xi * d.rho[ix] * l * l;
    CHECK(m > 0.0);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  CHECK(hi / lo <= 10.0);
}

//---------------------------------------------------------------- transforms

TEST_CASE("transform of a windowed eigenfunction peaks at its frequency") {
  const auto& d = shared_data();
  // pick the grid frequency nearest 1.0
  std::size_t ix0 = 0;
  for (std::size_t ix = 0; ix < d.nXi(); ++ix)
    if (std::abs(d.xiGrid[ix] - 1.0) < std::abs(d.xiGrid[ix0] - 1.0)) ix0 = ix;
  std::vector<double> f(d.nR());
  for (std::size_t i = 0; i < d.nR(); ++i) {
    const double R = d.Rgrid[i];
    f[i] = d.phiAt(ix0, i) * std::exp(-std::pow(R / 12.0, 6.0));
  }
  auto fhat = fourier_fwd(d, f);
  std::size_t ipk = 0;
  for (std::size_t ix = 0; ix < d.nXi(); ++ix)
    if (std::abs(fhat[ix]) > std::abs(fhat[ipk])) ipk = ix;
  CHECK(std::abs(int(ipk) - int(ix0)) <= 1);
}

TEST_CASE("transform is unitary and invertible on test bumps") {
  const auto& d = shared_data();
  for (double s : {0.5, 2.0, 10.0}) {
    auto f = bump(d.Rgrid, s);
    auto fhat = fourier_fwd(d, f);
    const double n2 = norm_L2s_rho(d, fhat, 0.0);
    const double nf = norm_halfline(d, f);
    CHECK((n2 * n2) / (nf * nf) == doctest::Approx(1.0).epsilon(0.01));
    auto fr = fourier_inv(d, fhat);
    double err = 0.0;
    for (std::size_t i = 0; i < d.nR(); ++i)
      err += d.wR[i] * (fr[i] - f[i]) * (fr[i] - f[i]);
    CHECK(std::sqrt(err) / nf < 0.01);
  }
}

TEST_CASE("weighted norms agree across independent quadrature rules") {
  const auto& d = shared_data();
  for (double s : {0.5, 2.0, 10.0}) {
    auto fhat = fourier_fwd(d, bump(d.Rgrid, s));
    const double a = norm_L2s_rho(d, fhat, 0.3);
    const double b = norm_L2s_rho_alt(d, fhat, 0.3);
    CHECK(std::abs(a - b) < 0.005 * a);
  }
}

//-------------------------------------------------------------- transference

TEST_CASE("transference operator matches an independent coding") {
  const auto& d = shared_data();
  const std::size_t nR = d.nR(), nXi = d.nXi();
  auto fhat = fourier_fwd(d, bump(d.Rgrid, 2.0));
  auto lhs = transference_apply(d, fhat);

  // Re-derive the same quantity from the caches with fresh code: the radial
  // derivative of the reconstruction, weighted forward, plus the scaled
  // logarithmic frequency derivative.
  std::vector<double> g(nR, 0.0);
  const double tail = d.rhoTailMass * fhat.front();
  for (std::size_t i = 0; i < nR; ++i) {
    const double R = d.Rgrid[i];
    double acc = 0.0;
    for (std::size_t ix = 0; ix < nXi; ++ix)
      acc += d.wXi[ix] * d.rho[ix] * d.dphi[ix * nR + i] * fhat[ix];
    const double sR = std::sqrt(R), den = 1.0 + R * R;
    const double dphi0 = sR * (1.5 - 0.5 * R * R) / (den * den);
    g[i] = R * (acc + tail * dphi0);
  }
  std::vector<double> rhs(nXi, 0.0);
  for (std::size_t ix = 0; ix < nXi; ++ix) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nR; ++i)
      acc += d.wR[i] * d.phiAt(ix, i) * g[i];
    rhs[ix] = acc;
  }
  for (std::size_t ix = 1; ix + 1 < nXi; ++ix)
    rhs[ix] += 2.0 * (fhat[ix + 1] - fhat[ix - 1]) /
               (std::log(d.xiGrid[ix + 1]) - std::log(d.xiGrid[ix - 1]));
  rhs[0] = lhs[0];
  rhs[nXi - 1] = lhs[nXi - 1];  // identical one-sided stencils, skip

  std::vector<double> diff(nXi);
  for (std::size_t ix = 0; ix < nXi; ++ix) diff[ix] = lhs[ix] - rhs[ix];
  CHECK(norm_L2s_rho(d, diff, 0.0) < 1e-6 * norm_L2s_rho(d, lhs, 0.0));
}

TEST_CASE("transference applied to the analytic radial derivative") {
  // K fhat should reproduce F(R f') + 2 xi dfhat/dxi when f' is known in
  // closed form, up to the reconstruction (round-trip) error of the grid.
  const auto& d = shared_data();
  for (double s : {0.5, 2.0}) {
    auto fhat = fourier_fwd(d, bump(d.Rgrid, s));
    auto lhs = fourier_fwd(d, bump_rdr(d.Rgrid, s));
    auto der = xi_ddxi(d.xiGrid, fhat);
    for (std::size_t ix = 0; ix < d.nXi(); ++ix) lhs[ix] += 2.0 * der[ix];
    auto rhs = transference_apply(d, fhat);
    std::vector<double> diff(d.nXi());
    for (std::size_t ix = 0; ix < d.nXi(); ++ix) diff[ix] = lhs[ix] - rhs[ix];
    CHECK(norm_L2s_rho(d, diff, 0.0) < 0.05 * norm_L2s_rho(d, fhat, 0.0));
  }
}

TEST_CASE("transference smooths by half a derivative, stably under "
          "refinement") {
  const auto& d = shared_data();
  SpectralOptions o = d.opts;
  o.perDecadeLow = 160;
  o.xiPointsPerWavelength = 8.0;
  o.logPerDecade = 260;
  o.pointsPerWavelength = 8.0;
  const SpectralData fine = build_spectral(o);
  const double s = 0.3;
  for (double sc : {0.5, 2.0, 10.0}) {
    auto co = fourier_fwd(d, bump(d.Rgrid, sc));
    auto cf = fourier_fwd(fine, bump(fine.Rgrid, sc));
    const double a = banded_norm(d, transference_apply(d, co), co, s + 0.5);
    const double b =
        banded_norm(fine, transference_apply(fine, cf), cf, s + 0.5);
    CHECK(std::isfinite(a));
    CHECK(std::abs(a - b) < 0.10 * b);
  }
}

TEST_CASE("transference commutator with the scaling derivative is bounded") {
  const auto& d = shared_data();
  const double s = 0.3;
  for (double sc : {0.5, 2.0, 10.0}) {
    auto fhat = fourier_fwd(d, bump(d.Rgrid, sc));
    auto a = transference_apply(d, xi_ddxi(d.xiGrid, fhat));
    auto b = xi_ddxi(d.xiGrid, transference_apply(d, fhat));
    std::vector<double> comm(d.nXi());
    for (std::size_t ix = 0; ix < d.nXi(); ++ix) comm[ix] = a[ix] - b[ix];
    const double ratio =
        banded_norm(d, comm, fhat, s) / norm_L2s_rho(d, fhat, s);
    CHECK(std::isfinite(ratio));
    CHECK(ratio < 25.0);
  }
}

//------------------------------------------------------------ plane isometry

TEST_CASE("half-line to plane map is an isometry") {
  const auto& d = shared_data();
  std::vector<double> u1(d.nR()), u2(d.nR());
  for (std::size_t i = 0; i < d.nR(); ++i) {
    const double R = d.Rgrid[i];
    u1[i] = std::sqrt(R) * std::exp(-R * R);
    u2[i] = phi_zero(R) * std::exp(-std::pow(R / 10.0, 4.0));
  }
  for (const auto& u : {u1, u2}) {
    const double nu = norm_halfline(d, u);
    const double np = plane_norm_L2(t_isometry(d.Rgrid, u));
    CHECK(std::abs(np - nu) < 1e-6 * nu);
    auto back = t_isometry_inverse(t_isometry(d.Rgrid, u));
    for (std::size_t i = 0; i < u.size(); ++i)
      CHECK(std::abs(back[i] - u[i]) < 1e-12 * (1.0 + std::abs(u[i])));
  }
}

TEST_CASE("half-derivative weighted norm is comparable to the plane H1 "
          "norm") {
  const auto& d = shared_data();
  std::vector<std::vector<double>> fs;
  for (double s : {0.5, 2.0, 5.0, 10.0}) fs.push_back(bump(d.Rgrid, s));
  {
    std::vector<double> f(d.nR());
    for (std::size_t i = 0; i < d.nR(); ++i) {
      const double R = d.Rgrid[i];
      f[i] = std::pow(R, 1.5) / std::pow(1.0 + R * R, 4.0);
    }
    fs.push_back(f);
  }
  std::vector<double> ratios;
  for (const auto& f : fs) {
    auto fhat = fourier_fwd(d, f);
    const double nr = norm_L2s_rho(d, fhat, 0.5);
    const double nh = plane_norm_H1(t_isometry(d.Rgrid, f));
    CHECK(std::isfinite(nr));
    CHECK(nh > 0.0);
    ratios.push_back(nr / nh);
  }
  double lo = ratios[0], hi = ratios[0];
  for (double r : ratios) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi / lo < 4.0);
}
