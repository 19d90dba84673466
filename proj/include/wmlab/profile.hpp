#pragma once
//----------------------------------------------------------------------------
// profile.hpp
//
// Closed-form soliton profile, scaling laws, light-cone coordinate charts and
// the energy functionals.  Everything downstream (modifier construction,
// Fourier-side solve, PDE evolution) builds on these definitions.
//----------------------------------------------------------------------------

#include <string>
#include <vector>

#include "wmlab/params.hpp"

namespace wmlab {

//--------------------------------------------------------------- profile ---

/// Ground-state co-rotational harmonic map profile Q(R) = 2 arctan R.
double q_profile(double R);
double q_profile_deriv(double R);    // Q'(R)  = 2/(1+R^2)
double q_profile_deriv2(double R);   // Q''(R) = -4R/(1+R^2)^2

/// Blow-up scale lambda(t) = t^{-1-nu}.
double lambda_scale(double t, double nu);

//------------------------------------------------------------ cone point ---

/// A point of the truncated light cone with all derived coordinates.
struct ConePoint {
  double t = 0.0;      // time
  double alpha = 0.0;  // polar angle
  // derived:
  double lambda = 0.0;  // t^{-1-nu}
  double R = 0.0;       // lambda * alpha
  double a = 0.0;       // alpha / t
  double tau = 0.0;     // -(1/nu) t^{-nu}  (signed; d tau/dt = lambda)
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0, b5 = 0.0;

  static ConePoint from_t_alpha(double t, double alpha,
                                const BlowupParams& p);
  static ConePoint from_tau_R(double tau, double R, const BlowupParams& p);
};

//------------------------------------------------------ grid function type ---

enum class Chart { kAlphaT, kRTau, kAT };

std::string chart_name(Chart c);
Chart chart_from_name(const std::string& name);

/// Optional asymptotic-class metadata carried by modifier entries.
struct ClassTag {
  int m = 0, k = 0, l = 0;
  std::string algebra = "none";  // "Q", "Qprime" or "none"
};

/// A sampled function on the truncated cone {0 <= alpha <= t, t in
/// [t_min, t0]} with one radial sample vector per time slice.
struct ConeGridFunction {
  Chart chart = Chart::kAlphaT;
  std::vector<double> tGrid;                       // ordered sample times
  std::vector<std::vector<double>> radialGrids;    // per-time radial nodes
  std::vector<std::vector<double>> values;         // per-time samples
  ClassTag classTag;

  void validate() const;  // monotone radial grids, cone confinement, finiteness

  void write_csv(const std::string& path) const;
  static ConeGridFunction read_csv(const std::string& path);
};

/// Radial grid for one time slice: geometric spacing resolving scale
/// 1/lambda(t) near alpha = 0 glued to uniform spacing near alpha = t.
std::vector<double> cone_radial_grid(double t, const BlowupParams& p,
                                     std::size_t n_points = 512,
                                     double finest_over_lambda = 1e-3);

//----------------------------------------------------------------- energy ---

/// Total energy of a time slice sampled on alpha in [0, pi]:
///   E = int [ (u_t^2 + u_alpha^2)/2 + sin^2(u)/(2 sin^2 alpha) ] sin(alpha) d alpha.
/// u_alpha is formed by centered differences; the endpoint integrand is
/// extended by its analytic limit.
double energy(const std::vector<double>& alpha, const std::vector<double>& u,
              const std::vector<double>& u_t);

/// Same integrand restricted to alpha in (0, t_cut).
double local_energy(const std::vector<double>& alpha,
                    const std::vector<double>& u,
                    const std::vector<double>& u_t, double t_cut);

}  // namespace wmlab
