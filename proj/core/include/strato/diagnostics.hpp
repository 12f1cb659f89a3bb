#pragma once

// Self-checks on manufactured fixtures for a given scenario: transform
// identities and the eps-scaling of the shear-stress equation.

#include <cstddef>
#include <vector>

#include "strato/limit.hpp"
#include "strato/thermo.hpp"

namespace strato::diagnostics {

struct TransformCheck {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double jac_min = 0.0;
  double ell_M = 0.0;           // quadrature at x = L for p == c1 sigma0
  double ell_M_expected = 0.0;  // c1 sigma0 L
  double ell_M_rel_error = 0.0;
  double stream_discrepancy = 0.0;  // two-path difference, biquadratic psi
  double stream_norm = 0.0;         // max |psi|
  double momentum_convective[2] = {0.0, 0.0};  // at step d and d/2
  double momentum_viscous[2] = {0.0, 0.0};
  double momentum_order = 0.0;  // observed from the viscous residuals
};

// Fixtures: p == c1 sigma0, rho(y) = density_of_u(U y / h), a biquadratic
// divergence-free mass flux scaled by rho at the wall, and the profile
// f(z) = z - 1 + exp(-z) with i0 from the free stream.
TransformCheck transform_check(const thermo::FreeStream& fs, const thermo::GasProperties& gas,
                               thermo::NormalizationMode mode, std::size_t nx = 129,
                               std::size_t ny = 33);

struct EpsilonSweepRow {
  double eps = 0.0;
  limit::EpsilonResidual residual;
};

struct EpsilonSweep {
  std::vector<EpsilonSweepRow> rows;
  double slope = 0.0;                   // least-squares d log(lhs_norm) / d log(eps)
  double limit_residual_constant = 0.0;  // limit_equation_residual of u* == U
};

// Fixed fields: u(x*, y*) = U sin(pi y* / 2) and tau_s = tau(u) from the
// Crocco shooting solution of the scenario, both on an nx x ny grid.
EpsilonSweep epsilon_sweep(const thermo::FreeStream& fs, const thermo::GasProperties& gas,
                           thermo::NormalizationMode mode, const std::vector<double>& eps_values,
                           std::size_t nx = 33, std::size_t ny = 33);

// Least-squares slope of log(y) against log(x); all values must be positive.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace strato::diagnostics
