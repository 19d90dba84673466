#pragma once
//----------------------------------------------------------------------------
// params.hpp
//
// The handful of scalars that govern the whole construction: the rate
// exponent nu, the starting time t0, the correction depth k, the decay
// exponent N and the Sobolev index s.  Validation lives here so every module
// can assume a consistent parameter set.
//----------------------------------------------------------------------------

#include "wmlab/numerics.hpp"

namespace wmlab {

struct BlowupParams {
  double nu = 1.0;   // blow-up rate exponent, lambda(t) = t^{-1-nu}
  double t0 = 0.1;   // initial (largest) time on the truncated cone
  int k = 1;         // correction depth: approximant u_{2k-1}
  int bigN = 4;      // target decay exponent for the Fourier-side solution
  double s = 0.45;   // Sobolev index for the weighted-L2 norms

  void validate() const {
    if (!(nu > 0.5 && nu <= 1.0))
      fail_validation("BlowupParams: nu must lie in (1/2, 1]");
    if (!(s > 0.25 && s < 0.5 * nu))
      fail_validation("BlowupParams: s must lie in (1/4, nu/2)");
    if (!(t0 > 0.0))
      fail_validation("BlowupParams: t0 must be positive");
    if (t0 >= 1.0)
      fail_validation("BlowupParams: t0 must be < 1 (truncated-cone regime)");
    if (k < 1) fail_validation("BlowupParams: k must be >= 1");
    if (bigN < 1) fail_validation("BlowupParams: N must be >= 1");
  }

  double lambda(double t) const;     // t^{-1-nu}
  double lambda_dt(double t) const;  // d lambda / dt

  /// Positive rescaled-time magnitude tau = t^{-nu}/nu used by the
  /// Fourier-side solver; see ConePoint::tau for the signed convention.
  double tau_of_t(double t) const { return std::pow(t, -nu) / nu; }
  double t_of_tau(double tau) const { return std::pow(nu * tau, -1.0 / nu); }
  /// d(log lambda)/d tau along the blow-up trajectory, equal to (1+nu)/(nu tau).
  double mu_of_tau(double tau) const { return (1.0 + nu) / (nu * tau); }
};

}  // namespace wmlab
