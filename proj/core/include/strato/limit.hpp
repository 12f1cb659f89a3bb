#pragma once

// Thin-layer (Reynolds) limit eps = h/L -> 0 of the shear-stress equation and
// the closed-form shear and density estimates that follow from it.

#include <array>
#include <cstddef>
#include <vector>

#include "strato/crocco.hpp"
#include "strato/field.hpp"
#include "strato/thermo.hpp"

namespace strato::limit {

// (x, y) -> (x*, y*) = (x / L, y / (L eps)).
class EpsilonScaling {
 public:
  // Throws InvariantError unless L > 0 and 0 < eps <= 1.
  EpsilonScaling(double eps, double L);

  double eps() const noexcept { return eps_; }
  double L() const noexcept { return L_; }
  double h() const noexcept { return eps_ * L_; }

  std::array<double, 2> forward(double x, double y) const noexcept {
    return {x / L_, y / (L_ * eps_)};
  }
  std::array<double, 2> inverse(double x_star, double y_star) const noexcept {
    return {x_star * L_, y_star * L_ * eps_};
  }

 private:
  double eps_;
  double L_;
};

// eps = h / L of the free stream.
EpsilonScaling rescale(const thermo::FreeStream& fs);

struct EpsilonResidual {
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
  double residual_norm = 0.0;
};

// Evaluates, at interior nodes,
//   lhs = eps c~ x^1/2 (sigma^eps)^(19/25) tau_y / u*_y - eps^2 tau_y^2 / u*_y^2
//   rhs = -K u (1 - u^2 / (2 i0))^(-6/25)
// with c~ = c1^1/2 c2^-1 sigma0^(1/2 - b/(b-1)) and K = dc.K_detau.
//
// `u_profile` holds the velocity u (m s^-1) at the nodes of the unit square
// (x*_i, y*_j) = (i / (nx-1), j / (ny-1)); u^eps = u / L, u*_y = d u^eps / d y*,
// x = L x* and sigma^eps = 1 - (L u^eps)^2 / (2 i0). `tau_field` holds tau_s on
// the same node layout and tau_y is its derivative in the field's own y
// spacing. Both inputs are held fixed while eps varies, so the lhs scales as
// A eps + B eps^2. Throws DomainError where u*_y vanishes.
EpsilonResidual epsilon_residual(const ScalarField& u_profile, const ScalarField& tau_field,
                                 const EpsilonScaling& es, const thermo::DerivedConstants& dc,
                                 const thermo::FreeStream& fs);

// Max-norm of grad[(1 - u*^2 / (2 i0))^(19/25)] by chain rule, with grad u*
// from finite differences (centered inside, one-sided on the boundary).
// Exactly zero for spatially constant u*. Throws DomainError if u*^2 >= 2 i0.
double limit_equation_residual(const ScalarField& u_star, const thermo::FreeStream& fs);

// 1 - b/(b-1) - 6/25 + 1/2
double tau_s_exponent(double b);

// c1^1/2 c2^-1 (U/h) x^1/2 sigma0^(1 - b/(b-1) - 6/25 + 1/2)
double tau_s_estimate(double x, const thermo::DerivedConstants& dc,
                      const thermo::FreeStream& fs, const thermo::GasProperties& gas);

// (U/h) (1 - U^2 / (2 c_p T0))^omega, omega = 19/25 by default. Units s^-1.
// Throws DomainError unless U^2 < 2 c_p T0 and h > 0.
double tau_star(double U, double h, const thermo::GasProperties& gas, double T0);

// p0 T^(2b/(b-1)) T0^-1 R_hat^-1 sigma0^(b/(b-1) - 1) with T = T0 (paper-raw)
// or T0 / T_h (normalized).
double density_estimate(const thermo::DerivedConstants& dc, const thermo::FreeStream& fs,
                        const thermo::GasProperties& gas);

struct ShearEstimates {
  double tau_star = 0.0;
  std::vector<double> x;
  std::vector<double> tau_s_profile;
  double rho_estimate = 0.0;
  double sigma0 = 1.0;
};

ShearEstimates shear_estimates(const thermo::DerivedConstants& dc, const thermo::FreeStream& fs,
                               const thermo::GasProperties& gas, std::size_t n_x = 11);

struct ComparisonRow {
  double x = 0.0;
  double tau_s = 0.0;              // corollary estimate at x
  double ratio_wall_to_tau_s = 0.0;
};

struct ComparisonReport {
  double tau_wall = 0.0;
  double tau_star = 0.0;             // exponent 19/25
  double exponent_tau_star = 19.0 / 25.0;
  double exponent_tau_s = 0.0;       // 1 - b/(b-1) - 6/25 + 1/2
  double ratio_wall_to_tau_star = 0.0;
  std::vector<ComparisonRow> rows;
};

// Tabulates the ODE wall value against tau* and the tau_s estimate at
// `n_x` points x in (0, L]. No agreement tolerance is implied.
ComparisonReport compare_estimates(const crocco::CroccoSolution& sol,
                                   const thermo::FreeStream& fs,
                                   const thermo::DerivedConstants& dc, std::size_t n_x = 5);

}  // namespace strato::limit
