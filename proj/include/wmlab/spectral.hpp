#pragma once
//----------------------------------------------------------------------------
// spectral.hpp
//
// Spectral theory of the half-line Schroedinger operator
//
//     L = -d^2/dR^2 + 3/(4R^2) - 8/(1+R^2)^2
//
// that arises from linearising the wave map around the rescaled soliton
// profile (after the R^{1/2} conjugation).  This module provides
//
//   * the regular solution phi(R,xi) ~ R^{3/2} at the origin and the second
//     solution theta(R,xi) ~ (1/2) R^{-1/2}, built from an exact
//     power-series-in-xi recursion plus outward ODE continuation;
//   * the outgoing solution psi+(R,xi) ~ xi^{-1/4} e^{i sqrt(xi) R} at
//     infinity, built from its large-argument asymptotics plus inward ODE
//     integration;
//   * the connection coefficient a(xi) with phi = a psi+ + conj(a) psi- and
//     the spectral density rho(xi) = 1/(pi |a(xi)|^2);
//   * the eigenfunction transform pair (forward/inverse) with its quadrature
//     caches, weighted L^2_rho norms, and the transference operator
//     K fhat = F(R d/dR F^{-1} fhat) + 2 xi d/dxi fhat;
//   * the half-line <-> equivariant-plane isometry Tu = e^{i theta} R^{-1/2} u
//     and the plane-side L^2/H^1 norms used for the comparability checks.
//----------------------------------------------------------------------------

#include <complex>
#include <cstddef>
#include <vector>

#include "wmlab/numerics.hpp"

namespace wmlab {

/// Potential of the conjugated linearised operator.
double spectral_potential(double R);

//------------------------------------------------------- pointwise solutions

/// Regular and outgoing solutions of (L - xi) u = 0, evaluated pointwise.
/// Construction is tabulated once (the xi-power-series coefficient functions
/// live on a fixed radial grid); evaluations share those tables and are
/// safe to call concurrently.
class JostSolutions {
 public:
  struct Options {
    double Rmin = 1e-6;       // inner end of the coefficient tables
    double Rmax = 1200.0;     // outer end (must cover the matching radii)
    int perDecade = 400;      // radial table density
    int maxTerms = 30;        // xi-series table depth (seriesQ2 = 25 needs ~20)
    double seriesQ2 = 25.0;   // use the series while R^2 xi <= seriesQ2
    double startQ = 3000.0;   // asymptotic start q = R sqrt(xi) for psi+
    double matchQ = 10.0;     // connection matching at R = matchQ/sqrt(xi)
    double odeRelTol = 1e-12;
    double odeAbsTol = 1e-13;
  };

  JostSolutions();
  explicit JostSolutions(const Options& opts);

  /// phi(R,xi) and its R-derivative; series for R^2 xi small, ODE beyond.
  void phi(double R, double xi, double& value, double& deriv) const;
  double phi(double R, double xi) const;

  /// theta(R,xi) ~ (1/2) R^{-1/2} at the origin (second solution; defined
  /// modulo multiples of phi, which do not affect Wronskians).
  void theta(double R, double xi, double& value, double& deriv) const;
  double theta(double R, double xi) const;

  /// psi+(R,xi) by inward integration from the far-field asymptotics.
  /// Requires q = R sqrt(xi) >= 2 (no inward continuation below that).
  void psi_plus(double R, double xi, std::complex<double>& value,
                std::complex<double>& deriv) const;
  std::complex<double> psi_plus(double R, double xi) const;

  /// One inward sweep: psi+ and its derivative sampled at the given radii
  /// (descending q from startQ).  Radii must satisfy q >= 2.
  void psi_plus_sweep(double xi, const std::vector<double>& radii,
                      std::vector<std::complex<double>>& values,
                      std::vector<std::complex<double>>& derivs) const;

  /// Connection coefficient a(xi) from Wronskian matching at
  /// R = matchQ/sqrt(xi) (or the supplied matchQ override).
  std::complex<double> connection(double xi) const;
  std::complex<double> connection_at(double xi, double matchQ) const;

  /// Spectral density rho(xi) = 1/(pi |a(xi)|^2).
  double rho(double xi) const;

  /// Number of series terms used at the largest admissible R^2 xi (for
  /// diagnostics) and the growth constant fitted to the coefficient tables.
  int series_terms_used(double q2) const;
  double series_growth_constant() const;

  const Options& options() const { return opts_; }

 private:
  void series_eval(double R, double xi, const std::vector<QuinticHermite>& gj,
                   double& value, double& deriv, double scale0) const;

  Options opts_;
  std::vector<double> grid_;
  std::vector<QuinticHermite> gPhi_;    // phi = sum_j xi^j gPhi_[j](R)
  std::vector<QuinticHermite> gTheta_;  // theta = sum_j xi^j gTheta_[j](R)
};

//--------------------------------------------------------------- data cache

struct SpectralOptions {
  // frequency grid (log spaced; finer below xi = 1 where the density has
  // its 1/(xi log^2 xi) singularity)
  double xiMin = 1e-6;
  double xiMax = 1e4;
  int perDecadeLow = 120;   // xi < 1 (log spaced)
  int perDecadeHigh = 100;  // minimum density above xi = 1
  // Above xi = 1 the grid is uniform in k = sqrt(xi): the inverse-transform
  // integrand oscillates like e^{i k R}, and a k-uniform trapezoid rule
  // makes that error cancel across cells instead of aliasing junk into the
  // far field.  Spacing: dk = 2 pi / (Rout * xiPointsPerWavelength).
  double xiPointsPerWavelength = 6.0;
  // radial transform grid: log spaced below RLinear, uniform above with
  // spacing set by the shortest eigenfunction wavelength to resolve
  double Rin = 1e-6;
  double Rout = 30.0;
  double RLinear = 1.0;
  int logPerDecade = 200;
  double pointsPerWavelength = 6.0;
  // outer q-grid on which psi+ is cached per frequency
  double qCacheMin = 10.0;
  int nQCache = 160;
  // Jost tables must reach the outermost matching radius 10 / sqrt(xiMin).
  JostSolutions::Options jost{.Rmax = 12000.0};

  void validate() const;
};

/// Immutable spectral cache: eigenfunction matrix, density, connection
/// coefficient, quadrature weights, and the psi+ outer cache.  Construction
/// parallelises over frequency columns; afterwards everything is read-only.
struct SpectralData {
  SpectralOptions opts;
  std::vector<double> xiGrid;
  std::vector<double> Rgrid;
  std::vector<double> rho;                     // density on xiGrid
  std::vector<std::complex<double>> aCoeff;    // connection coefficient
  std::vector<double> phi;                     // nXi x nR, row-major
  std::vector<double> dphi;                    // d phi / dR, nXi x nR
  std::vector<double> wR;                      // radial quadrature weights
  std::vector<double> wXi;                     // frequency quadrature weights
  std::vector<double> qGrid;                   // outer cache abscissae
  std::vector<std::complex<double>> psiPlus;   // nXi x nQ at R = q/sqrt(xi)
  // Mass of the density below xiMin, extrapolated from the fitted
  // 1/(xi log^2 xi) law; the transform tail corrections use it so that
  // Plancherel holds despite the logarithmically heavy small-xi tail.
  double rhoTailMass = 0.0;

  std::size_t nXi() const { return xiGrid.size(); }
  std::size_t nR() const { return Rgrid.size(); }
  double phiAt(std::size_t ix, std::size_t ir) const {
    return phi[ix * Rgrid.size() + ir];
  }
};

SpectralData build_spectral(const SpectralOptions& opts = {});

//---------------------------------------------------------------- transforms

/// Forward transform fhat(xi) = int phi(R,xi) f(R) dR; f sampled on
/// data.Rgrid and required to be negligible at both grid ends.
std::vector<double> fourier_fwd(const SpectralData& data,
                                const std::vector<double>& f);

/// Inverse transform f(R) = int phi(R,xi) fhat(xi) rho(xi) dxi, including
/// the small-xi tail correction fhat(xiMin) phi0(R) * rhoTailMass.
std::vector<double> fourier_inv(const SpectralData& data,
                                const std::vector<double>& fhat);

/// Weighted norm || fhat ||_{L^{2,s}_rho} (with the small-xi tail term).
double norm_L2s_rho(const SpectralData& data, const std::vector<double>& fhat,
                    double s);
/// Same norm by an independent quadrature rule (piecewise-parabolic instead
/// of trapezoid); used for the norm-equivalence crosscheck.
double norm_L2s_rho_alt(const SpectralData& data,
                        const std::vector<double>& fhat, double s);

/// Plain L^2(dR) norm of a half-line sample vector on data.Rgrid.
double norm_halfline(const SpectralData& data, const std::vector<double>& f);

/// Transference operator K fhat = F(R d/dR F^{-1} fhat) + 2 xi d/dxi fhat.
/// The inner radial derivative uses the cached d phi/dR columns; the
/// frequency derivative is a centred difference on the log grid.
std::vector<double> transference_apply(const SpectralData& data,
                                       const std::vector<double>& fhat);

/// Centred-difference xi d/dxi on the log frequency grid (one-sided at the
/// ends); exposed because the transport module needs the same stencil.
std::vector<double> xi_ddxi(const std::vector<double>& xiGrid,
                            const std::vector<double>& fhat);

//----------------------------------------------------------- plane isometry

/// Equivariant plane function Tu(R,theta) = e^{i theta} g(R) in polar
/// coordinates, with the angular measure normalised to total mass one.
struct PlaneFunction {
  std::vector<double> Rgrid;
  std::vector<double> g;
};

PlaneFunction t_isometry(const std::vector<double>& Rgrid,
                         const std::vector<double>& u);
std::vector<double> t_isometry_inverse(const PlaneFunction& p);

double plane_norm_L2(const PlaneFunction& p);
double plane_norm_H1(const PlaneFunction& p);

}  // namespace wmlab
