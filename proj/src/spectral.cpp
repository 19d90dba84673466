//----------------------------------------------------------------------------
// spectral.cpp
//
// See spectral.hpp.  Construction strategy:
//
//  * phi and theta are built from the exact recursion L g_j = g_{j-1} induced
//    by (L - xi) u = 0 when u = sum_j xi^j g_j: each g_j is produced from
//    g_{j-1} by variation of parameters against the closed-form zero-energy
//    pair phi0 = R^{3/2}/(1+R^2), theta0 = phi0 (1/(2R^2) - 2 log R - R^2/2),
//    whose Wronskian W(theta0, phi0) = 1 exactly.  The series converges like
//    a Bessel series in R^2 xi and is used while R^2 xi <= seriesQ2; beyond
//    that the solution is continued by adaptive ODE integration.
//
//  * psi+ starts from the two-term far-field asymptotics
//    psi+ ~ xi^{-1/4} e^{iq} (1 + i I(R)/(2 sqrt(xi))), q = R sqrt(xi),
//    with I(R) = 3/(4R) - 2 pi + 4 arctan R + 4R/(1+R^2) obtained by
//    integrating the potential tail, and is continued inward by ODE
//    integration in q.  The start q is large enough that the dropped
//    O(q^{-2}) term is below the Wronskian tolerance.
//
//  * a(xi) comes from Wronskian matching of phi against psi+-, and
//    rho = 1/(pi |a|^2).  The transform caches phi and dphi/dR column by
//    column (parallel over frequencies) on a radial grid that resolves the
//    fastest eigenfunction oscillation.
//
//  * the small-xi spectral tail below the grid is logarithmically heavy
//    (rho ~ c/(xi log^2 xi)), so the inverse transform and the weighted
//    norms carry an explicit tail-mass correction obtained by fitting
//    rho xi log^2(1/xi) as a polynomial in 1/log(1/xi) and integrating.
//----------------------------------------------------------------------------

#include "wmlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "wmlab/parallel.hpp"

namespace wmlab {

namespace {

constexpr double kPi = std::numbers::pi;

double phi0(double R) { return std::pow(R, 1.5) / (1.0 + R * R); }

double phi0_deriv(double R) {
  const double s = std::sqrt(R);
  const double d = 1.0 + R * R;
  return s * (1.5 - 0.5 * R * R) / (d * d);
}

// theta0 = phi0 * G with G = 1/(2R^2) - 2 log R - R^2/2; phi0^2 G' = -1.
double theta0_factor(double R) {
  return 0.5 / (R * R) - 2.0 * std::log(R) - 0.5 * R * R;
}

double theta0(double R) { return phi0(R) * theta0_factor(R); }

double theta0_deriv(double R) {
  const double Gp = -1.0 / (R * R * R) - 2.0 / R - R;
  return phi0_deriv(R) * theta0_factor(R) + phi0(R) * Gp;
}

// Tail integral of the potential: I(R) = int_R^inf (4/s^2) ... written in
// closed form; psi1 = (i/2) R I(R) is the first asymptotic correction.
double tail_I(double R) {
  return 0.75 / R - 2.0 * kPi + 4.0 * std::atan(R) + 4.0 * R / (1.0 + R * R);
}

double tail_I_deriv(double R) {
  const double d = 1.0 + R * R;
  return -0.75 / (R * R) + 4.0 / d + 4.0 * (1.0 - R * R) / (d * d);
}

}  // namespace

double spectral_potential(double R) {
  const double d = 1.0 + R * R;
  return 0.75 / (R * R) - 8.0 / (d * d);
}

//------------------------------------------------------------ JostSolutions

JostSolutions::JostSolutions() : JostSolutions(Options{}) {}

JostSolutions::JostSolutions(const Options& opts) : opts_(opts) {
  if (!(opts_.Rmin > 0.0 && opts_.Rmax > opts_.Rmin))
    fail_validation("JostSolutions: bad radial table range");
  const double decades = std::log10(opts_.Rmax / opts_.Rmin);
  const std::size_t n =
      std::size_t(decades * opts_.perDecade) + 2;
  grid_ = logspace(opts_.Rmin, opts_.Rmax, n);

  std::vector<double> p0(n), t0(n);
  for (std::size_t i = 0; i < n; ++i) {
    p0[i] = phi0(grid_[i]);
    t0[i] = theta0(grid_[i]);
  }

  // How many series orders the largest admissible argument needs: terms
  // behave like (R^2 xi / 4)^j / (j!)^2, so seriesQ2 = 25 is exhausted by
  // ~20 orders; maxTerms caps the tables.
  auto build = [&](const std::vector<double>& seed, bool thetaBranch) {
    std::vector<QuinticHermite> out;
    std::vector<double> prev = seed;
    std::vector<double> prevP(n), prevPP(n);
    for (std::size_t i = 0; i < n; ++i) {
      prevP[i] = thetaBranch ? theta0_deriv(grid_[i]) : phi0_deriv(grid_[i]);
      prevPP[i] = spectral_potential(grid_[i]) * prev[i];
    }
    out.emplace_back(grid_, prev, prevP, prevPP);
    for (int j = 1; j < opts_.maxTerms; ++j) {
      std::vector<double> fa(n), fb(n);
      for (std::size_t i = 0; i < n; ++i) {
        fa[i] = p0[i] * prev[i];
        fb[i] = t0[i] * prev[i];
      }
      std::vector<double> A = cumulative_integral(grid_, fa);
      std::vector<double> B = cumulative_integral(grid_, fb);
      if (thetaBranch && j == 1) {
        // theta0^2 ~ R^{-1} log^2 R is not integrable at the origin; anchor
        // the second integral at R = 1 instead (shifts theta by a multiple
        // of phi, which leaves every Wronskian unchanged).
        double B1 = 0.0;
        for (std::size_t i = 1; i < n; ++i)
          if (grid_[i] >= 1.0) {
            const double w =
                (1.0 - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
            B1 = (1.0 - w) * B[i - 1] + w * B[i];
            break;
          }
        for (double& b : B) b -= B1;
      }
      std::vector<double> g(n), gp(n), gpp(n);
      bool allZero = true;
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = t0[i] * A[i] - p0[i] * B[i];
        gp[i] = theta0_deriv(grid_[i]) * A[i] - phi0_deriv(grid_[i]) * B[i];
        gpp[i] = spectral_potential(grid_[i]) * g[i] - prev[i];
        if (g[i] != 0.0) allZero = false;
      }
      if (allZero) break;
      out.emplace_back(grid_, g, gp, gpp);
      prev = std::move(g);
    }
    return out;
  };

  gPhi_ = build(p0, false);
  gTheta_ = build(t0, true);
}

void JostSolutions::series_eval(double R, double xi,
                                const std::vector<QuinticHermite>& gj,
                                double& value, double& deriv,
                                double /*scale0*/) const {
  value = 0.0;
  deriv = 0.0;
  double pw = 1.0;
  double maxTerm = 0.0;
  int consecutiveSmall = 0;
  for (std::size_t j = 0; j < gj.size(); ++j) {
    const double term = pw * gj[j].value(R);
    const double dterm = pw * gj[j].deriv(R);
    value += term;
    deriv += dterm;
    const double mag = std::abs(term);
    maxTerm = std::max(maxTerm, mag);
    // an individual g_j can have an accidental zero at this R, so require
    // two consecutive negligible terms before truncating
    consecutiveSmall = (j > 1 && mag <= 1e-15 * maxTerm)
                           ? consecutiveSmall + 1
                           : 0;
    if (consecutiveSmall >= 2) return;
    pw *= xi;
  }
  fail_numeric("JostSolutions: series tables exhausted before convergence");
}

namespace {

// Continue a real solution of (L - xi) u = 0 from Rfrom to Rto.
void continue_real(double xi, double Rfrom, double Rto, double& v, double& d,
                   double relTol, double absTol) {
  OdeOptions o;
  o.rel_tol = relTol;
  o.abs_tol = absTol;
  std::vector<double> y = {v, d};
  integrate_ode(
      [xi](double R, const std::vector<double>& s, std::vector<double>& dy) {
        dy[0] = s[1];
        dy[1] = (spectral_potential(R) - xi) * s[0];
      },
      y, Rfrom, Rto, o);
  v = y[0];
  d = y[1];
}

}  // namespace

void JostSolutions::phi(double R, double xi, double& value,
                        double& deriv) const {
  if (!(R > 0.0) || xi < 0.0) fail_validation("phi: need R > 0, xi >= 0");
  const double Rsw =
      xi > 0.0 ? std::min(std::sqrt(opts_.seriesQ2 / xi), opts_.Rmax)
               : opts_.Rmax;
  if (R <= Rsw) {
    if (R < grid_.front())
      fail_validation("phi: R below the coefficient tables");
    series_eval(R, xi, gPhi_, value, deriv, 1.0);
    return;
  }
  series_eval(Rsw, xi, gPhi_, value, deriv, 1.0);
  continue_real(xi, Rsw, R, value, deriv, opts_.odeRelTol, opts_.odeAbsTol);
}

double JostSolutions::phi(double R, double xi) const {
  double v, d;
  phi(R, xi, v, d);
  return v;
}

void JostSolutions::theta(double R, double xi, double& value,
                          double& deriv) const {
  if (!(R > 0.0) || xi < 0.0) fail_validation("theta: need R > 0, xi >= 0");
  const double Rsw =
      xi > 0.0 ? std::min(std::sqrt(opts_.seriesQ2 / xi), opts_.Rmax)
               : opts_.Rmax;
  if (R <= Rsw) {
    if (R < grid_.front())
      fail_validation("theta: R below the coefficient tables");
    series_eval(R, xi, gTheta_, value, deriv, 1.0);
    return;
  }
  series_eval(Rsw, xi, gTheta_, value, deriv, 1.0);
  continue_real(xi, Rsw, R, value, deriv, opts_.odeRelTol, opts_.odeAbsTol);
}

double JostSolutions::theta(double R, double xi) const {
  double v, d;
  theta(R, xi, v, d);
  return v;
}

void JostSolutions::psi_plus_sweep(
    double xi, const std::vector<double>& radii,
    std::vector<std::complex<double>>& values,
    std::vector<std::complex<double>>& derivs) const {
  if (!(xi > 0.0)) fail_validation("psi_plus: need xi > 0");
  const double sq = std::sqrt(xi);
  const double amp = std::pow(xi, -0.25);

  // Far-field start: psi = amp e^{iq} sigma(q), sigma = 1 + i I(R)/(2 sq).
  auto asymptotic = [&](double q, std::complex<double>& v,
                        std::complex<double>& dvdq) {
    const double R = q / sq;
    const std::complex<double> i1(0.0, 1.0);
    const std::complex<double> sigma = 1.0 + i1 * tail_I(R) / (2.0 * sq);
    const std::complex<double> dsigma = i1 * tail_I_deriv(R) / (2.0 * xi);
    const std::complex<double> phase = std::exp(i1 * q);
    v = amp * phase * sigma;
    dvdq = amp * phase * (i1 * sigma + dsigma);
  };

  // Walk targets in descending q; anything beyond the start is evaluated
  // directly from the asymptotics.
  std::vector<std::size_t> order(radii.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return radii[a] > radii[b];
  });
  values.assign(radii.size(), 0.0);
  derivs.assign(radii.size(), 0.0);

  OdeOptions o;
  o.rel_tol = opts_.odeRelTol;
  o.abs_tol = opts_.odeAbsTol;
  auto rhs = [&](double q, const std::vector<double>& s,
                 std::vector<double>& dy) {
    const double R = q / sq;
    const double w = spectral_potential(R) / xi - 1.0;
    dy[0] = s[2];
    dy[1] = s[3];
    dy[2] = w * s[0];
    dy[3] = w * s[1];
  };

  double qCur = opts_.startQ;
  std::complex<double> v, dvdq;
  asymptotic(qCur, v, dvdq);
  std::vector<double> y = {v.real(), v.imag(), dvdq.real(), dvdq.imag()};

  for (std::size_t k : order) {
    const double q = radii[k] * sq;
    if (q < 2.0)
      fail_validation("psi_plus: no inward continuation below q = 2");
    if (q >= opts_.startQ) {
      std::complex<double> vv, dd;
      asymptotic(q, vv, dd);
      values[k] = vv;
      derivs[k] = dd * sq;  // d/dR = sqrt(xi) d/dq
      continue;
    }
    if (q < qCur) {
      integrate_ode(rhs, y, qCur, q, o);
      qCur = q;
    }
    values[k] = {y[0], y[1]};
    derivs[k] = std::complex<double>(y[2], y[3]) * sq;
  }
}

void JostSolutions::psi_plus(double R, double xi, std::complex<double>& value,
                             std::complex<double>& deriv) const {
  std::vector<std::complex<double>> v, d;
  psi_plus_sweep(xi, {R}, v, d);
  value = v[0];
  deriv = d[0];
}

std::complex<double> JostSolutions::psi_plus(double R, double xi) const {
  std::complex<double> v, d;
  psi_plus(R, xi, v, d);
  return v;
}

std::complex<double> JostSolutions::connection_at(double xi,
                                                  double matchQ) const {
  const double Rm = matchQ / std::sqrt(xi);
  double pv, pd;
  phi(Rm, xi, pv, pd);
  std::complex<double> uv, ud;
  psi_plus(Rm, xi, uv, ud);
  const std::complex<double> mv = std::conj(uv), md = std::conj(ud);
  // Expansion coefficient: phi = c psi+ + conj(c) psi- with
  // c = W(phi, psi-) / W(psi+, psi-).  The returned a is 2c, the
  // normalisation under which the two density formulas agree:
  // 1/(pi |a|^2) = Im m / pi with m = W(theta,psi+)/W(psi+,phi).
  // That common value is the density making the transform unitary
  // (checked against the free-operator completeness relation, which
  // gives rho = xi/8 for the pure 3/(4R^2) potential).
  const std::complex<double> wPM = uv * md - ud * mv;
  const std::complex<double> wFm = pv * md - pd * mv;
  return 2.0 * wFm / wPM;
}

std::complex<double> JostSolutions::connection(double xi) const {
  return connection_at(xi, opts_.matchQ);
}

double JostSolutions::rho(double xi) const {
  const std::complex<double> a = connection(xi);
  return 1.0 / (kPi * std::norm(a));
}

int JostSolutions::series_terms_used(double q2) const {
  const double R = std::sqrt(q2);
  double pw = 1.0, maxTerm = 0.0;
  for (std::size_t j = 0; j < gPhi_.size(); ++j) {
    const double mag = std::abs(pw * gPhi_[j].value(R));
    maxTerm = std::max(maxTerm, mag);
    if (j > 1 && mag <= 1e-15 * maxTerm) return int(j) + 1;
    pw *= 1.0;  // xi = 1, R^2 = q2
  }
  return int(gPhi_.size());
}

double JostSolutions::series_growth_constant() const {
  // phi(R,xi) = phi0 + R^{-1/2} sum (R^2 xi)^j phi_j(R^2), so
  // phi_j(u) = g_j(R) R^{1/2} / R^{2j} with u = R^2.  Fit the smallest C
  // with |phi_j| <= 3 C^j/(j-1)! log(1+u) over the tables.
  double lcMax = -1e300;
  for (std::size_t j = 1; j < gPhi_.size(); ++j) {
    double lgFact = 0.0;  // log((j-1)!)
    for (std::size_t m = 2; m < j; ++m) lgFact += std::log(double(m));
    for (double R : grid_) {
      const double u = R * R;
      if (u < 0.5) continue;
      const double pj = std::abs(gPhi_[j].value(R)) * std::sqrt(R) /
                        std::pow(R, 2.0 * double(j));
      if (pj <= 0.0) continue;
      const double lc =
          (std::log(pj / (3.0 * std::log1p(u))) + lgFact) / double(j);
      lcMax = std::max(lcMax, lc);
    }
  }
  return std::exp(lcMax);
}

//----------------------------------------------------------- build_spectral

void SpectralOptions::validate() const {
  if (!(xiMin > 0.0 && xiMax > xiMin))
    fail_validation("SpectralOptions: bad frequency range");
  if (!(Rin > 0.0 && RLinear > Rin && Rout > RLinear))
    fail_validation("SpectralOptions: bad radial range");
  if (perDecadeLow < 4 || perDecadeHigh < 4 || logPerDecade < 4)
    fail_validation("SpectralOptions: grid densities too low");
  if (10.0 / std::sqrt(xiMin) > jost.Rmax)
    fail_validation("SpectralOptions: matching radius exceeds Jost tables");
}

namespace {

std::vector<double> make_xi_grid(const SpectralOptions& o) {
  std::vector<double> g;
  const double split = std::min(1.0, o.xiMax);
  if (o.xiMin < split) {
    auto low = logspace(o.xiMin, split,
                        std::size_t(std::log10(split / o.xiMin) *
                                    o.perDecadeLow) +
                            2);
    g.insert(g.end(), low.begin(), low.end());
  }
  if (o.xiMax > split) {
    const double k0 = std::sqrt(split), k1 = std::sqrt(o.xiMax);
    const double dkOsc = 2.0 * kPi / (o.Rout * o.xiPointsPerWavelength);
    std::size_t nk = std::size_t((k1 - k0) / dkOsc) + 2;
    nk = std::max<std::size_t>(
        nk, std::size_t(std::log10(o.xiMax / split) * o.perDecadeHigh) + 2);
    nk = std::min<std::size_t>(nk, 20000);
    auto ks = linspace(k0, k1, nk);
    for (std::size_t i = g.empty() ? 0 : 1; i < ks.size(); ++i)
      g.push_back(ks[i] * ks[i]);
  }
  if (g.empty()) fail_validation("SpectralOptions: empty frequency grid");
  return g;
}

std::vector<double> make_R_grid(const SpectralOptions& o) {
  const double dR =
      2.0 * kPi / (std::sqrt(o.xiMax) * o.pointsPerWavelength);
  // Switch from log to uniform spacing where the log spacing reaches dR, so
  // the step size is continuous across the junction.  A spacing jump leaves
  // an O(h^2 k) Euler-Maclaurin boundary term in every transform quadrature,
  // a noise floor the high-frequency Sobolev weights then amplify.
  double Rswitch = dR * o.logPerDecade / std::log(10.0);
  Rswitch = std::clamp(Rswitch, 100.0 * o.Rin, 0.5 * o.Rout);
  std::vector<double> g =
      logspace(o.Rin, Rswitch,
               std::size_t(std::log10(Rswitch / o.Rin) * o.logPerDecade) +
                   2);
  for (double R = g.back() + dR; R < o.Rout - 0.25 * dR; R += dR)
    g.push_back(R);
  g.push_back(o.Rout);
  return g;
}

}  // namespace

SpectralData build_spectral(const SpectralOptions& opts) {
  opts.validate();
  SpectralData d;
  d.opts = opts;
  d.xiGrid = make_xi_grid(opts);
  d.Rgrid = make_R_grid(opts);
  const std::size_t nXi = d.xiGrid.size(), nR = d.Rgrid.size();

  JostSolutions jost(opts.jost);

  d.phi.assign(nXi * nR, 0.0);
  d.dphi.assign(nXi * nR, 0.0);
  d.rho.assign(nXi, 0.0);
  d.aCoeff.assign(nXi, 0.0);
  d.qGrid = logspace(opts.qCacheMin, opts.jost.startQ,
                     std::size_t(opts.nQCache));
  d.psiPlus.assign(nXi * d.qGrid.size(), 0.0);

  parallel_for(nXi, [&](std::size_t ix) {
    const double xi = d.xiGrid[ix];
    const double sq = std::sqrt(xi);

    // phi column: series while R^2 xi <= seriesQ2, one ODE continuation
    // over the remaining nodes.
    const double Rsw = std::sqrt(opts.jost.seriesQ2 / xi);
    std::size_t iSplit = nR;
    for (std::size_t i = 0; i < nR; ++i) {
      if (d.Rgrid[i] > Rsw) {
        iSplit = i;
        break;
      }
      double v, dv;
      jost.phi(d.Rgrid[i], xi, v, dv);
      d.phi[ix * nR + i] = v;
      d.dphi[ix * nR + i] = dv;
    }
    if (iSplit < nR) {
      double v, dv;
      const double Rstart = iSplit > 0 ? d.Rgrid[iSplit - 1] : Rsw;
      jost.phi(Rstart, xi, v, dv);
      std::vector<double> nodes(d.Rgrid.begin() + iSplit, d.Rgrid.end());
      nodes.insert(nodes.begin(), Rstart);
      OdeOptions o;
      o.rel_tol = opts.jost.odeRelTol;
      o.abs_tol = opts.jost.odeAbsTol;
      auto states = integrate_ode_sampled(
          [xi](double R, const std::vector<double>& s,
               std::vector<double>& dy) {
            dy[0] = s[1];
            dy[1] = (spectral_potential(R) - xi) * s[0];
          },
          {v, dv}, nodes, o);
      for (std::size_t i = iSplit; i < nR; ++i) {
        d.phi[ix * nR + i] = states[i - iSplit + 1][0];
        d.dphi[ix * nR + i] = states[i - iSplit + 1][1];
      }
    }

    // psi+ outer cache and connection coefficient from one inward sweep.
    std::vector<double> radii(d.qGrid.size() + 1);
    for (std::size_t k = 0; k < d.qGrid.size(); ++k)
      radii[k] = d.qGrid[k] / sq;
    const double Rm = opts.jost.matchQ / sq;
    radii.back() = Rm;
    std::vector<std::complex<double>> pv, pd;
    jost.psi_plus_sweep(xi, radii, pv, pd);
    for (std::size_t k = 0; k < d.qGrid.size(); ++k)
      d.psiPlus[ix * d.qGrid.size() + k] = pv[k];

    double fv, fd;
    jost.phi(Rm, xi, fv, fd);
    const std::complex<double> uv = pv.back(), ud = pd.back();
    const std::complex<double> mv = std::conj(uv), md = std::conj(ud);
    const std::complex<double> wPM = uv * md - ud * mv;
    const std::complex<double> a = 2.0 * (fv * md - fd * mv) / wPM;
    d.aCoeff[ix] = a;
    d.rho[ix] = 1.0 / (kPi * std::norm(a));
  });

  d.wR = trapezoid_weights(d.Rgrid);
  d.wXi = trapezoid_weights(d.xiGrid);

  // Small-xi tail mass: with u = 1/log(1/xi), int rho dxi = int m(u) du
  // where m = rho xi log^2(1/xi) is regular at u = 0.  Fit m as a
  // quadratic in u over the lowest frequencies and integrate it to u(xiMin).
  d.rhoTailMass = 0.0;
  if (opts.xiMin <= 1e-2) {
    std::vector<double> us, ms;
    const double uCap = std::min(100.0 * opts.xiMin, 0.05);
    for (std::size_t i = 0; i < nXi && d.xiGrid[i] <= uCap; ++i) {
      const double L = std::log(1.0 / d.xiGrid[i]);
      us.push_back(1.0 / L);
      ms.push_back(d.rho[i] * d.xiGrid[i] * L * L);
    }
    if (us.size() >= 6) {
      const std::size_t m = us.size();
      std::vector<double> A(m * 3), b = ms;
      for (std::size_t i = 0; i < m; ++i) {
        A[i * 3] = 1.0;
        A[i * 3 + 1] = us[i];
        A[i * 3 + 2] = us[i] * us[i];
      }
      auto c = lstsq(A, m, 3, b);
      const double u0 = 1.0 / std::log(1.0 / opts.xiMin);
      d.rhoTailMass =
          c[0] * u0 + c[1] * u0 * u0 / 2.0 + c[2] * u0 * u0 * u0 / 3.0;
      d.rhoTailMass = std::max(d.rhoTailMass, 0.0);
    }
  }
  return d;
}

//---------------------------------------------------------------- transforms

std::vector<double> fourier_fwd(const SpectralData& d,
                                const std::vector<double>& f) {
  const std::size_t nR = d.nR(), nXi = d.nXi();
  if (f.size() != nR) fail_validation("fourier_fwd: sample size mismatch");
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::abs(v));
  if (sup > 0.0 &&
      (std::abs(f.front()) > 1e-8 * sup || std::abs(f.back()) > 1e-8 * sup))
    fail_validation("fourier_fwd: boundary mass would alias (need |f| below "
                    "1e-8 of the peak at both grid ends)");
  std::vector<double> fhat(nXi, 0.0);
  parallel_for(nXi, [&](std::size_t ix) {
    double s = 0.0;
    const double* row = d.phi.data() + ix * nR;
    for (std::size_t i = 0; i < nR; ++i) s += d.wR[i] * row[i] * f[i];
    fhat[ix] = s;
  });
  return fhat;
}

std::vector<double> fourier_inv(const SpectralData& d,
                                const std::vector<double>& fhat) {
  const std::size_t nR = d.nR(), nXi = d.nXi();
  if (fhat.size() != nXi) fail_validation("fourier_inv: size mismatch");
  std::vector<double> f(nR, 0.0);
  const double tail = d.rhoTailMass * fhat.front();
  parallel_for(nR, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t ix = 0; ix < nXi; ++ix)
      s += d.wXi[ix] * d.rho[ix] * d.phi[ix * nR + i] * fhat[ix];
    f[i] = s + tail * phi0(d.Rgrid[i]);
  });
  return f;
}

namespace {

double weighted_sq(const SpectralData& d, const std::vector<double>& fhat,
                   double s, const std::vector<double>& w) {
  double acc = 0.0;
  for (std::size_t ix = 0; ix < d.nXi(); ++ix) {
    const double xi = d.xiGrid[ix];
    acc += w[ix] * std::pow(1.0 + xi * xi, s) * d.rho[ix] * fhat[ix] *
           fhat[ix];
  }
  // tail sits at xi ~ 0 where <xi>^{2s} = 1
  acc += d.rhoTailMass * fhat.front() * fhat.front();
  return acc;
}

}  // namespace

double norm_L2s_rho(const SpectralData& d, const std::vector<double>& fhat,
                    double s) {
  if (fhat.size() != d.nXi()) fail_validation("norm_L2s_rho: size mismatch");
  return std::sqrt(weighted_sq(d, fhat, s, d.wXi));
}

double norm_L2s_rho_alt(const SpectralData& d, const std::vector<double>& fhat,
                        double s) {
  if (fhat.size() != d.nXi())
    fail_validation("norm_L2s_rho_alt: size mismatch");
  // Piecewise-parabolic quadrature via the cumulative integrator.
  std::vector<double> integrand(d.nXi());
  for (std::size_t ix = 0; ix < d.nXi(); ++ix) {
    const double xi = d.xiGrid[ix];
    integrand[ix] =
        std::pow(1.0 + xi * xi, s) * d.rho[ix] * fhat[ix] * fhat[ix];
  }
  auto cum = cumulative_integral(d.xiGrid, integrand);
  return std::sqrt(cum.back() + d.rhoTailMass * fhat.front() * fhat.front());
}

double norm_halfline(const SpectralData& d, const std::vector<double>& f) {
  if (f.size() != d.nR()) fail_validation("norm_halfline: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < d.nR(); ++i) acc += d.wR[i] * f[i] * f[i];
  return std::sqrt(acc);
}

std::vector<double> xi_ddxi(const std::vector<double>& xiGrid,
                            const std::vector<double>& fhat) {
  const std::size_t n = xiGrid.size();
  if (fhat.size() != n) fail_validation("xi_ddxi: size mismatch");
  std::vector<double> out(n, 0.0);
  if (n < 3) return out;
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = (fhat[i + 1] - fhat[i - 1]) /
             (std::log(xiGrid[i + 1]) - std::log(xiGrid[i - 1]));
  out[0] = (fhat[1] - fhat[0]) / (std::log(xiGrid[1]) - std::log(xiGrid[0]));
  out[n - 1] = (fhat[n - 1] - fhat[n - 2]) /
               (std::log(xiGrid[n - 1]) - std::log(xiGrid[n - 2]));
  return out;
}

std::vector<double> transference_apply(const SpectralData& d,
                                       const std::vector<double>& fhat) {
  const std::size_t nR = d.nR(), nXi = d.nXi();
  if (fhat.size() != nXi)
    fail_validation("transference_apply: size mismatch");

  // R d/dR of the reconstruction, using the cached eigenfunction
  // derivatives (plus the small-xi tail with phi0').
  std::vector<double> g(nR, 0.0);
  const double tail = d.rhoTailMass * fhat.front();
  parallel_for(nR, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t ix = 0; ix < nXi; ++ix)
      s += d.wXi[ix] * d.rho[ix] * d.dphi[ix * nR + i] * fhat[ix];
    g[i] = d.Rgrid[i] * (s + tail * phi0_deriv(d.Rgrid[i]));
  });

  std::vector<double> out(nXi, 0.0);
  parallel_for(nXi, [&](std::size_t ix) {
    double s = 0.0;
    const double* row = d.phi.data() + ix * nR;
    for (std::size_t i = 0; i < nR; ++i) s += d.wR[i] * row[i] * g[i];
    out[ix] = s;
  });

  auto der = xi_ddxi(d.xiGrid, fhat);
  for (std::size_t ix = 0; ix < nXi; ++ix) out[ix] += 2.0 * der[ix];
  return out;
}

//------------------------------------------------------------ plane isometry

PlaneFunction t_isometry(const std::vector<double>& Rgrid,
                         const std::vector<double>& u) {
  if (u.size() != Rgrid.size()) fail_validation("t_isometry: size mismatch");
  PlaneFunction p;
  p.Rgrid = Rgrid;
  p.g.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    p.g[i] = u[i] / std::sqrt(Rgrid[i]);
  return p;
}

std::vector<double> t_isometry_inverse(const PlaneFunction& p) {
  std::vector<double> u(p.g.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = p.g[i] * std::sqrt(p.Rgrid[i]);
  return u;
}

double plane_norm_L2(const PlaneFunction& p) {
  auto w = trapezoid_weights(p.Rgrid);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.g.size(); ++i)
    acc += w[i] * p.g[i] * p.g[i] * p.Rgrid[i];
  return std::sqrt(acc);
}

double plane_norm_H1(const PlaneFunction& p) {
  const std::size_t n = p.g.size();
  auto w = trapezoid_weights(p.Rgrid);
  std::vector<double> gp(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    gp[i] = (p.g[i + 1] - p.g[i - 1]) / (p.Rgrid[i + 1] - p.Rgrid[i - 1]);
  gp[0] = (p.g[1] - p.g[0]) / (p.Rgrid[1] - p.Rgrid[0]);
  gp[n - 1] = (p.g[n - 1] - p.g[n - 2]) / (p.Rgrid[n - 1] - p.Rgrid[n - 2]);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double R = p.Rgrid[i];
    acc += w[i] * (p.g[i] * p.g[i] * (1.0 + 1.0 / (R * R)) + gp[i] * gp[i]) *
           R;
  }
  return std::sqrt(acc);
}

}  // namespace wmlab
