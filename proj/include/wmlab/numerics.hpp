#pragma once
//----------------------------------------------------------------------------
// numerics.hpp
//
// Small numerical toolbox shared by all modules: grid builders, quadrature,
// Hermite interpolation, an adaptive Dormand-Prince integrator, dense least
// squares, and slope/exponent fitting helpers.  Everything here is plain
// double-precision serial code; the hot loops that call into it decide about
// parallelism themselves.
//----------------------------------------------------------------------------

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wmlab {

//------------------------------------------------------------------ grids ---

/// n equally spaced points covering [a, b] inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

/// n logarithmically spaced points covering [a, b] inclusive (a, b > 0).
std::vector<double> logspace(double a, double b, std::size_t n);

/// Log-spaced grid with a fixed number of points per decade.  The last point
/// is forced to equal `b` exactly so downstream code can rely on the range.
std::vector<double> logspace_per_decade(double a, double b, double per_decade);

//-------------------------------------------------------------- quadrature ---

/// Trapezoid weights for an arbitrary monotone grid.
std::vector<double> trapezoid_weights(const std::vector<double>& x);

/// Integral of samples y over the grid x (trapezoid rule).
double integrate_trapezoid(const std::vector<double>& x,
                           const std::vector<double>& y);

/// Cumulative integral I(x_i) = int_{x_0}^{x_i} y dx using local parabolas
/// (Simpson-type accuracy on smooth nonuniform grids).  I[0] = 0.
std::vector<double> cumulative_integral(const std::vector<double>& x,
                                        const std::vector<double>& y);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_depth = 24);

//------------------------------------------------------------ interpolation ---

/// Piecewise-quintic Hermite interpolant built from nodal values together
/// with first and second derivatives.  When second derivatives come from an
/// ODE identity the interpolation error is O(h^6), which several modules
/// rely on to keep evaluation noise below the signals they measure.
class QuinticHermite {
 public:
  QuinticHermite() = default;
  QuinticHermite(std::vector<double> x, std::vector<double> f,
                 std::vector<double> fp, std::vector<double> fpp);

  double value(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;
  bool empty() const { return x_.empty(); }
  double xmin() const { return x_.front(); }
  double xmax() const { return x_.back(); }
  const std::vector<double>& nodes() const { return x_; }

 private:
  std::size_t interval(double x) const;
  std::vector<double> x_, f_, fp_, fpp_;
};

/// Natural cubic spline (used where only nodal values are available).
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> f);

  double value(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;
  bool empty() const { return x_.empty(); }

 private:
  std::size_t interval(double x) const;
  std::vector<double> x_, f_, m_;  // m_ holds second derivatives at nodes
};

//---------------------------------------------------------------- ODE/RK45 ---

/// Dormand-Prince 5(4) adaptive step integrator for small systems.
/// rhs(t, y, dydt) fills the derivative.  Integrates from t0 to t1 (either
/// direction) and invokes `observer` after every accepted step when set.
struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0;   // 0 => automatic
  double max_step = 0.0;       // 0 => unlimited
  std::size_t max_steps = 20'000'000;
};

using OdeRhs =
    std::function<void(double, const std::vector<double>&, std::vector<double>&)>;
using OdeObserver = std::function<void(double, const std::vector<double>&)>;

void integrate_ode(const OdeRhs& rhs, std::vector<double>& y, double t0,
                   double t1, const OdeOptions& opts = {},
                   const OdeObserver& observer = nullptr);

/// Integrate and sample the solution at the given monotone output times
/// (t_out.front() == t0, t_out.back() == t1).  Returns one state per output
/// time, obtained with dense (cubic Hermite) interpolation between steps.
std::vector<std::vector<double>> integrate_ode_sampled(
    const OdeRhs& rhs, const std::vector<double>& y0,
    const std::vector<double>& t_out, const OdeOptions& opts = {});

//------------------------------------------------------------ least squares ---

/// Solve min ||A c - b||_2 by Householder QR.  A is row-major m x n, m >= n.
std::vector<double> lstsq(const std::vector<double>& A, std::size_t m,
                          std::size_t n, const std::vector<double>& b);

/// Straight-line fit y = c0 + c1 x; returns {c0, c1}.
std::array<double, 2> fit_line(const std::vector<double>& x,
                               const std::vector<double>& y);

/// Log-log slope of |y| against x (points with y == 0 are skipped).
double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y);

/// Fit y = c0 + c1 x + g x^e on a window with the exponent e scanned over
/// [e_lo, e_hi]; returns the exponent minimising the residual.  Used to pull
/// fractional-power endpoint behaviour out from under analytic terms.
double fit_scanned_exponent(const std::vector<double>& x,
                            const std::vector<double>& y, double e_lo,
                            double e_hi, int poly_degree = 1);

//----------------------------------------------------------------- helpers ---

/// Smooth bump: 1 for s <= s0, 0 for s >= s1, C^inf monotone in between.
double smooth_bump(double s, double s0, double s1);

/// Polynomial evaluation, coefficients in ascending order.
double polyval(const std::vector<double>& c, double x);

/// FNV-1a hash, used to fingerprint grids and cache payloads.
std::uint64_t fnv1a(const void* data, std::size_t n,
                    std::uint64_t seed = 1469598103934665603ull);
std::uint64_t fnv1a(const std::vector<double>& v,
                    std::uint64_t seed = 1469598103934665603ull);

/// Throwing helpers that give a consistent error idiom across modules.
[[noreturn]] void fail_validation(const std::string& msg);   // bad inputs
[[noreturn]] void fail_numeric(const std::string& msg);      // solver trouble

}  // namespace wmlab
