#include "wmlab/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <limits>

namespace wmlab {

//------------------------------------------------------------------ grids ---

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) fail_validation("linspace: need at least two points");
  std::vector<double> x(n);
  const double h = (b - a) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + h * double(i);
  x.back() = b;
  return x;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  if (a <= 0.0 || b <= 0.0) fail_validation("logspace: endpoints must be > 0");
  std::vector<double> x = linspace(std::log(a), std::log(b), n);
  for (double& v : x) v = std::exp(v);
  x.front() = a;
  x.back() = b;
  return x;
}

std::vector<double> logspace_per_decade(double a, double b,
                                        double per_decade) {
  if (a <= 0.0 || b <= a) fail_validation("logspace_per_decade: bad range");
  const double decades = std::log10(b / a);
  const auto n = std::size_t(std::ceil(decades * per_decade)) + 1;
  return logspace(a, b, std::max<std::size_t>(n, 2));
}

//-------------------------------------------------------------- quadrature ---

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) fail_validation("trapezoid_weights: need at least two points");
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

double integrate_trapezoid(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size()) fail_validation("integrate_trapezoid: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return s;
}

std::vector<double> cumulative_integral(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (y.size() != n || n < 2) fail_validation("cumulative_integral: bad sizes");
  std::vector<double> I(n, 0.0);
  // Integrate each cell with the quadratic through the cell endpoints and a
  // flanking neighbour; averaging left/right parabolas keeps the rule
  // symmetric in the interior.
  auto cell = [&](std::size_t i0, std::size_t i1, std::size_t i2, double a,
                  double b) {
    // integral over [a,b] of the parabola through (x_{i0},y_{i0}), ...
    const double x0 = x[i0], x1 = x[i1], x2 = x[i2];
    const double d0 = (x0 - x1) * (x0 - x2);
    const double d1 = (x1 - x0) * (x1 - x2);
    const double d2 = (x2 - x0) * (x2 - x1);
    auto prim = [&](double t) {
      const double t3 = t * t * t / 3.0, t2 = t * t / 2.0;
      const double L0 = (t3 - (x1 + x2) * t2 + x1 * x2 * t) / d0;
      const double L1 = (t3 - (x0 + x2) * t2 + x0 * x2 * t) / d1;
      const double L2 = (t3 - (x0 + x1) * t2 + x0 * x1 * t) / d2;
      return y[i0] * L0 + y[i1] * L1 + y[i2] * L2;
    };
    return prim(b) - prim(a);
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double v;
    if (i == 0) {
      v = cell(0, 1, 2, x[0], x[1]);
    } else if (i + 2 == n) {
      v = cell(n - 3, n - 2, n - 1, x[i], x[i + 1]);
    } else {
      v = 0.5 * (cell(i - 1, i, i + 1, x[i], x[i + 1]) +
                 cell(i, i + 1, i + 2, x[i], x[i + 1]));
    }
    I[i + 1] = I[i] + v;
  }
  return I;
}

namespace {
double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}
}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_depth) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

//------------------------------------------------------------ interpolation ---

QuinticHermite::QuinticHermite(std::vector<double> x, std::vector<double> f,
                               std::vector<double> fp, std::vector<double> fpp)
    : x_(std::move(x)), f_(std::move(f)), fp_(std::move(fp)),
      fpp_(std::move(fpp)) {
  if (x_.size() < 2 || f_.size() != x_.size() || fp_.size() != x_.size() ||
      fpp_.size() != x_.size())
    fail_validation("QuinticHermite: inconsistent node arrays");
}

std::size_t QuinticHermite::interval(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

namespace {
// Quintic two-point Hermite basis evaluated via the Taylor-like form
//   p(s) = f0 + fp0 s + fpp0 s^2/2 + c3 s^3 + c4 s^4 + c5 s^5,  s = x - x0,
// with c3..c5 fixed by the data at the right node.
struct QuinticCoef {
  double c0, c1, c2, c3, c4, c5;
};
QuinticCoef quintic_coef(double h, double f0, double fp0, double fpp0,
                         double f1, double fp1, double fpp1) {
  const double h2 = h * h;
  const double A = f1 - (f0 + fp0 * h + 0.5 * fpp0 * h2);
  const double B = fp1 - (fp0 + fpp0 * h);
  const double C = fpp1 - fpp0;
  const double c3 = (10.0 * A - 4.0 * B * h + 0.5 * C * h2) / (h2 * h);
  const double c4 = (-15.0 * A + 7.0 * B * h - C * h2) / (h2 * h2);
  const double c5 = (6.0 * A - 3.0 * B * h + 0.5 * C * h2) / (h2 * h2 * h);
  return {f0, fp0, 0.5 * fpp0, c3, c4, c5};
}
}  // namespace

double QuinticHermite::value(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i], s = x - x_[i];
  const auto c = quintic_coef(h, f_[i], fp_[i], fpp_[i], f_[i + 1], fp_[i + 1],
                              fpp_[i + 1]);
  return c.c0 + s * (c.c1 + s * (c.c2 + s * (c.c3 + s * (c.c4 + s * c.c5))));
}

double QuinticHermite::deriv(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i], s = x - x_[i];
  const auto c = quintic_coef(h, f_[i], fp_[i], fpp_[i], f_[i + 1], fp_[i + 1],
                              fpp_[i + 1]);
  return c.c1 +
         s * (2.0 * c.c2 + s * (3.0 * c.c3 + s * (4.0 * c.c4 + s * 5.0 * c.c5)));
}

double QuinticHermite::deriv2(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i], s = x - x_[i];
  const auto c = quintic_coef(h, f_[i], fp_[i], fpp_[i], f_[i + 1], fp_[i + 1],
                              fpp_[i + 1]);
  return 2.0 * c.c2 + s * (6.0 * c.c3 + s * (12.0 * c.c4 + s * 20.0 * c.c5));
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> f)
    : x_(std::move(x)), f_(std::move(f)) {
  const std::size_t n = x_.size();
  if (n < 3 || f_.size() != n) fail_validation("CubicSpline: bad node arrays");
  // Natural spline: tridiagonal solve for second derivatives.
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  b[0] = b[n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
    a[i] = hl / 6.0;
    b[i] = (hl + hr) / 3.0;
    c[i] = hr / 6.0;
    d[i] = (f_[i + 1] - f_[i]) / hr - (f_[i] - f_[i - 1]) / hl;
  }
  // Thomas algorithm.
  m_.assign(n, 0.0);
  std::vector<double> cp(n, 0.0), dp(n, 0.0);
  cp[0] = c[0] / b[0];
  dp[0] = d[0] / b[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double den = b[i] - a[i] * cp[i - 1];
    cp[i] = c[i] / den;
    dp[i] = (d[i] - a[i] * dp[i - 1]) / den;
  }
  m_[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m_[i] = dp[i] - cp[i] * m_[i + 1];
}

std::size_t CubicSpline::interval(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicSpline::value(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
  return A * f_[i] + B * f_[i + 1] +
         ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
  return (f_[i + 1] - f_[i]) / h -
         (3.0 * A * A - 1.0) / 6.0 * h * m_[i] +
         (3.0 * B * B - 1.0) / 6.0 * h * m_[i + 1];
}

double CubicSpline::deriv2(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
  return A * m_[i] + B * m_[i + 1];
}

//---------------------------------------------------------------- ODE/RK45 ---

namespace {
// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                 e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640,
                 e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct DpStepper {
  const OdeRhs& rhs;
  std::size_t n;
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;

  explicit DpStepper(const OdeRhs& r, std::size_t dim)
      : rhs(r), n(dim), k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim),
        k7(dim), ytmp(dim), ynew(dim) {}

  // One trial step from (t, y) with size h; k1 must hold rhs(t, y).
  // Returns scaled error estimate; leaves result in ynew and rhs at the new
  // point in k7 (FSAL).
  double step(double t, const std::vector<double>& y, double h, double rel,
              double abs) {
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                            a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                            b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, ynew, k7);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc =
          abs + rel * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                            e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(e) / sc);
    }
    return err;
  }
};
}  // namespace

void integrate_ode(const OdeRhs& rhs, std::vector<double>& y, double t0,
                   double t1, const OdeOptions& opts,
                   const OdeObserver& observer) {
  if (t0 == t1) return;
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  const std::size_t n = y.size();
  DpStepper st(rhs, n);
  double t = t0;
  double h = opts.initial_step != 0.0
                 ? std::abs(opts.initial_step)
                 : std::max(1e-8, 1e-3 * std::abs(t1 - t0));
  rhs(t, y, st.k1);
  std::size_t steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opts.max_steps) fail_numeric("integrate_ode: step budget exhausted");
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    h = std::min(h, std::abs(t1 - t));
    const double err = st.step(t, y, dir * h, opts.rel_tol, opts.abs_tol);
    if (err <= 1.0) {
      t += dir * h;
      y = st.ynew;
      st.k1 = st.k7;
      if (observer) observer(t, y);
      h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < 1e-15 * std::abs(t1 - t0))
        fail_numeric("integrate_ode: step size underflow");
    }
  }
}

std::vector<std::vector<double>> integrate_ode_sampled(
    const OdeRhs& rhs, const std::vector<double>& y0,
    const std::vector<double>& t_out, const OdeOptions& opts) {
  if (t_out.size() < 2) fail_validation("integrate_ode_sampled: need >= 2 times");
  const std::size_t n = y0.size();
  std::vector<std::vector<double>> out;
  out.reserve(t_out.size());
  out.push_back(y0);

  std::vector<double> y = y0;
  std::vector<double> y_prev = y0, f_prev(n), f_curr(n);
  double t_prev = t_out.front();
  rhs(t_prev, y_prev, f_prev);
  std::size_t next = 1;
  const double dir = (t_out.back() > t_out.front()) ? 1.0 : -1.0;

  auto observer = [&](double t, const std::vector<double>& yc) {
    rhs(t, yc, f_curr);
    while (next < t_out.size() && dir * (t_out[next] - t) <= 1e-300) {
      // cubic Hermite between (t_prev, y_prev) and (t, yc)
      const double h = t - t_prev;
      std::vector<double> yi(n);
      if (std::abs(h) < 1e-300) {
        yi = yc;
      } else {
        const double s = (t_out[next] - t_prev) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        for (std::size_t i = 0; i < n; ++i)
          yi[i] = h00 * y_prev[i] + h10 * h * f_prev[i] + h01 * yc[i] +
                  h11 * h * f_curr[i];
      }
      out.push_back(std::move(yi));
      ++next;
    }
    t_prev = t;
    y_prev = yc;
    f_prev = f_curr;
  };
  integrate_ode(rhs, y, t_out.front(), t_out.back(), opts, observer);
  while (next < t_out.size()) {  // final point(s), guard rounding
    out.push_back(y);
    ++next;
  }
  return out;
}

//------------------------------------------------------------ least squares ---

std::vector<double> lstsq(const std::vector<double>& A_in, std::size_t m,
                          std::size_t n, const std::vector<double>& b_in) {
  if (A_in.size() != m * n || b_in.size() != m || m < n)
    fail_validation("lstsq: inconsistent dimensions");
  std::vector<double> A = A_in, b = b_in;
  // Householder QR, applied in place.
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm += A[i * n + k] * A[i * n + k];
    norm = std::sqrt(norm);
    if (norm == 0.0) fail_numeric("lstsq: rank-deficient system");
    if (A[k * n + k] > 0) norm = -norm;
    std::vector<double> v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = A[i * n + k];
    v[0] -= norm;
    double vnorm2 = 0.0;
    for (double vv : v) vnorm2 += vv * vv;
    if (vnorm2 == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i - k] * A[i * n + j];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = k; i < m; ++i) A[i * n + j] -= f * v[i - k];
    }
    double dot = 0.0;
    for (std::size_t i = k; i < m; ++i) dot += v[i - k] * b[i];
    const double f = 2.0 * dot / vnorm2;
    for (std::size_t i = k; i < m; ++i) b[i] -= f * v[i - k];
  }
  std::vector<double> c(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= A[k * n + j] * c[j];
    if (A[k * n + k] == 0.0) fail_numeric("lstsq: singular R factor");
    c[k] = s / A[k * n + k];
  }
  return c;
}

std::array<double, 2> fit_line(const std::vector<double>& x,
                               const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (y.size() != m || m < 2) fail_validation("fit_line: bad inputs");
  std::vector<double> A(m * 2);
  for (std::size_t i = 0; i < m; ++i) {
    A[i * 2] = 1.0;
    A[i * 2 + 1] = x[i];
  }
  auto c = lstsq(A, m, 2, y);
  return {c[0], c[1]};
}

double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && std::abs(y[i]) > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(std::abs(y[i])));
    }
  }
  if (lx.size() < 2) fail_numeric("fit_loglog_slope: not enough usable points");
  return fit_line(lx, ly)[1];
}

double fit_scanned_exponent(const std::vector<double>& x,
                            const std::vector<double>& y, double e_lo,
                            double e_hi, int poly_degree) {
  const std::size_t m = x.size();
  if (y.size() != m || m < std::size_t(poly_degree + 3))
    fail_validation("fit_scanned_exponent: not enough points");
  auto residual = [&](double e) {
    const std::size_t n = std::size_t(poly_degree) + 2;
    std::vector<double> A(m * n);
    for (std::size_t i = 0; i < m; ++i) {
      double p = 1.0;
      for (int j = 0; j <= poly_degree; ++j) {
        A[i * n + std::size_t(j)] = p;
        p *= x[i];
      }
      A[i * n + n - 1] = std::pow(x[i], e);
    }
    auto c = lstsq(A, m, n, y);
    double r2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double fit = c[n - 1] * std::pow(x[i], e);
      double p = 1.0;
      for (int j = 0; j <= poly_degree; ++j) {
        fit += c[std::size_t(j)] * p;
        p *= x[i];
      }
      r2 += (fit - y[i]) * (fit - y[i]);
    }
    return r2;
  };
  // Golden-section search on [e_lo, e_hi].
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = e_lo, b = e_hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = residual(x1), f2 = residual(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-6; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = residual(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = residual(x2);
    }
  }
  return 0.5 * (a + b);
}

//----------------------------------------------------------------- helpers ---

double smooth_bump(double s, double s0, double s1) {
  if (s <= s0) return 1.0;
  if (s >= s1) return 0.0;
  const double u = (s - s0) / (s1 - s0);
  // C^inf transition exp(-1/u) / (exp(-1/u) + exp(-1/(1-u))).
  const double a = std::exp(-1.0 / (1.0 - u));
  const double b = std::exp(-1.0 / u);
  return a / (a + b);
}

double polyval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a(const std::vector<double>& v, std::uint64_t seed) {
  return fnv1a(v.data(), v.size() * sizeof(double), seed);
}

void fail_validation(const std::string& msg) {
  throw std::invalid_argument(msg);
}

void fail_numeric(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace wmlab
