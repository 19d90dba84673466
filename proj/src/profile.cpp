#include "wmlab/profile.hpp"

#include "wmlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wmlab {

//--------------------------------------------------------------- profile ---

double q_profile(double R) {
  if (R < 0.0) fail_validation("q_profile: R must be >= 0");
  return 2.0 * std::atan(R);
}

double q_profile_deriv(double R) { return 2.0 / (1.0 + R * R); }

double q_profile_deriv2(double R) {
  const double d = 1.0 + R * R;
  return -4.0 * R / (d * d);
}

double lambda_scale(double t, double nu) {
  if (t <= 0.0) fail_validation("lambda_scale: t must be > 0");
  return std::pow(t, -1.0 - nu);
}

//------------------------------------------------------------ cone point ---

ConePoint ConePoint::from_t_alpha(double t, double alpha,
                                  const BlowupParams& p) {
  if (t <= 0.0) fail_validation("ConePoint: t must be > 0");
  if (alpha < 0.0) fail_validation("ConePoint: alpha must be >= 0");
  ConePoint c;
  c.t = t;
  c.alpha = alpha;
  c.lambda = lambda_scale(t, p.nu);
  c.R = c.lambda * alpha;
  c.a = alpha / t;
  c.tau = -std::pow(t, -p.nu) / p.nu;
  const double lg = std::log(2.0 + c.R * c.R);
  c.b1 = std::pow(t, 2.0 * p.nu) * lg * lg;
  c.b2 = t * t * lg * lg;
  c.b3 = alpha * alpha;
  c.b4 = std::pow(t, 2.0 * p.nu);
  c.b5 = t * t;
  return c;
}

ConePoint ConePoint::from_tau_R(double tau, double R, const BlowupParams& p) {
  if (tau >= 0.0) fail_validation("ConePoint: signed tau must be negative");
  const double t = std::pow(-p.nu * tau, -1.0 / p.nu);
  const double alpha = R / lambda_scale(t, p.nu);
  return from_t_alpha(t, alpha, p);
}

//------------------------------------------------------ grid function type ---

std::string chart_name(Chart c) {
  switch (c) {
    case Chart::kAlphaT: return "alpha-t";
    case Chart::kRTau: return "R-tau";
    case Chart::kAT: return "a-t";
  }
  return "alpha-t";
}

Chart chart_from_name(const std::string& name) {
  if (name == "alpha-t") return Chart::kAlphaT;
  if (name == "R-tau") return Chart::kRTau;
  if (name == "a-t") return Chart::kAT;
  fail_validation("unknown chart name: " + name);
}

void ConeGridFunction::validate() const {
  const std::size_t nt = tGrid.size();
  if (radialGrids.size() != nt || values.size() != nt)
    fail_validation("ConeGridFunction: per-time array count mismatch");
  for (std::size_t i = 0; i < nt; ++i) {
    const auto& r = radialGrids[i];
    const auto& v = values[i];
    if (r.size() != v.size())
      fail_validation("ConeGridFunction: radial/value size mismatch");
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j > 0 && !(r[j] > r[j - 1]))
        fail_validation("ConeGridFunction: radial grid not strictly increasing");
      if (!std::isfinite(v[j]))
        fail_validation("ConeGridFunction: non-finite sample");
      if (chart == Chart::kAlphaT && r[j] > tGrid[i] * (1.0 + 1e-12))
        fail_validation("ConeGridFunction: sample outside the light cone");
    }
  }
}

void ConeGridFunction::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail_validation("cannot open for writing: " + path);
  out << "t,radial,value,chart\n";
  char buf[96];
  for (std::size_t i = 0; i < tGrid.size(); ++i) {
    for (std::size_t j = 0; j < radialGrids[i].size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%s\n", tGrid[i],
                    radialGrids[i][j], values[i][j],
                    chart_name(chart).c_str());
      out << buf;
    }
  }
}

ConeGridFunction ConeGridFunction::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_validation("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,radial,value,chart", 0) != 0)
    fail_validation("bad ConeGridFunction CSV header in " + path);
  ConeGridFunction g;
  double last_t = 0.0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    double t, r, v;
    std::getline(ss, tok, ','); t = std::stod(tok);
    std::getline(ss, tok, ','); r = std::stod(tok);
    std::getline(ss, tok, ','); v = std::stod(tok);
    std::getline(ss, tok, ',');
    g.chart = chart_from_name(tok);
    if (first || t != last_t) {
      g.tGrid.push_back(t);
      g.radialGrids.emplace_back();
      g.values.emplace_back();
      last_t = t;
      first = false;
    }
    g.radialGrids.back().push_back(r);
    g.values.back().push_back(v);
  }
  g.validate();
  return g;
}

std::vector<double> cone_radial_grid(double t, const BlowupParams& p,
                                     std::size_t n_points,
                                     double finest_over_lambda) {
  if (n_points < 16) fail_validation("cone_radial_grid: too few points");
  const double lam = lambda_scale(t, p.nu);
  const double fine = finest_over_lambda / lam;  // finest cell near alpha = 0
  // Geometric block from `fine` out to alpha where spacing reaches the
  // uniform target, then uniform out to alpha = t.
  const std::size_t n_geo = n_points / 2;
  const std::size_t n_uni = n_points - n_geo;
  std::vector<double> g;
  g.reserve(n_points + 2);
  g.push_back(0.0);
  // geometric: alpha_j = fine * r^j with r chosen so alpha_{n_geo} = t/2
  const double r = std::pow(0.5 * t / fine, 1.0 / double(n_geo - 1));
  double x = fine;
  for (std::size_t j = 0; j < n_geo; ++j) {
    g.push_back(x);
    x *= r;
  }
  const double start = g.back();
  const double h = (t - start) / double(n_uni);
  for (std::size_t j = 1; j <= n_uni; ++j) g.push_back(start + h * double(j));
  g.back() = t;
  return g;
}

//----------------------------------------------------------------- energy ---

namespace {

// Integrand of the energy at one interior node, with u_alpha supplied.
double energy_density(double alpha, double u, double u_t, double u_a) {
  const double sa = std::sin(alpha);
  const double su = std::sin(u);
  return (0.5 * (u_t * u_t + u_a * u_a) + su * su / (2.0 * sa * sa)) * sa;
}

// Density samples with centered differences for u_alpha and analytic-limit
// extension at alpha in {0, pi}.
std::vector<double> density_samples(const std::vector<double>& alpha,
                                    const std::vector<double>& u,
                                    const std::vector<double>& u_t) {
  const std::size_t n = alpha.size();
  if (n < 16) fail_validation("energy: grid too coarse (< 16 points)");
  if (u.size() != n || u_t.size() != n)
    fail_validation("energy: array size mismatch");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u_a;
    if (i == 0 || i + 1 == n) {
      u_a = 0.0;  // replaced by extrapolation below
    } else {
      u_a = (u[i + 1] - u[i - 1]) / (alpha[i + 1] - alpha[i - 1]);
    }
    const double sa = std::sin(alpha[i]);
    if (std::abs(sa) < 1e-12 || i == 0 || i + 1 == n) {
      d[i] = 0.0;  // filled by one-sided extrapolation
    } else {
      d[i] = energy_density(alpha[i], u[i], u_t[i], u_a);
      if (!std::isfinite(d[i]))
        fail_numeric("energy: non-finite integrand at alpha = " +
                     std::to_string(alpha[i]));
    }
  }
  // One-sided second-order extrapolation of the density into the endpoints;
  // the analytic limit is ~ u'(0)^2 alpha -> 0 at alpha = 0 and the mirror
  // statement at alpha = pi, so extrapolating the smooth density is safe.
  auto extrapolate = [&](std::size_t i0, std::size_t i1, std::size_t i2,
                         std::size_t target) {
    const double x0 = alpha[i0], x1 = alpha[i1], x2 = alpha[i2];
    const double xt = alpha[target];
    const double L0 = (xt - x1) * (xt - x2) / ((x0 - x1) * (x0 - x2));
    const double L1 = (xt - x0) * (xt - x2) / ((x1 - x0) * (x1 - x2));
    const double L2 = (xt - x0) * (xt - x1) / ((x2 - x0) * (x2 - x1));
    d[target] = L0 * d[i0] + L1 * d[i1] + L2 * d[i2];
  };
  extrapolate(1, 2, 3, 0);
  extrapolate(n - 2, n - 3, n - 4, n - 1);
  return d;
}

}  // namespace

double energy(const std::vector<double>& alpha, const std::vector<double>& u,
              const std::vector<double>& u_t) {
  return integrate_trapezoid(alpha, density_samples(alpha, u, u_t));
}

double local_energy(const std::vector<double>& alpha,
                    const std::vector<double>& u,
                    const std::vector<double>& u_t, double t_cut) {
  const auto d = density_samples(alpha, u, u_t);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < alpha.size(); ++i) {
    if (alpha[i + 1] <= t_cut) {
      s += 0.5 * (alpha[i + 1] - alpha[i]) * (d[i] + d[i + 1]);
    } else if (alpha[i] < t_cut) {
      // partial cell, linear density across it
      const double f = (t_cut - alpha[i]) / (alpha[i + 1] - alpha[i]);
      const double d_cut = d[i] + f * (d[i + 1] - d[i]);
      s += 0.5 * (t_cut - alpha[i]) * (d[i] + d_cut);
    }
  }
  return s;
}

//----------------------------------------------------------- exec policy ---

ExecPolicy& default_exec_policy() {
  static ExecPolicy p = ExecPolicy::kParallel;
  return p;
}

}  // namespace wmlab
