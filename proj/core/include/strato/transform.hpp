#pragma once

// Discrete Dorodnitzyn map (x, y) -> (l, s) with l = int_0^x p dx and
// s = int_0^y rho dy, the strip variable z = s / sqrt(l), the stream function
// of a divergence-free mass flux, and finite-difference checks of the
// momentum-equation identities under Psi(l, s) = sqrt(l) f(s / sqrt(l)).

#include <functional>
#include <limits>
#include <optional>
#include <span>

#include "strato/field.hpp"
#include "strato/thermo.hpp"

namespace strato::transform {

struct DorodnitzynMap {
  ScalarField ell;  // Pa m
  ScalarField s;    // kg m^-2
  ScalarField jac;  // c1 sigma0 rho
};

// Trapezoid quadrature of p(., y_hat) over [0, x_hat]; rows are linearly
// interpolated in y and the last partial cell uses the interpolated endpoint.
// Throws DomainError outside R and InvariantError if p has a nonpositive node.
double ell_coordinate(const ScalarField& p, double x_hat, double y_hat);

// Same along y: int_0^y_hat rho(x_hat, y) dy.
double s_coordinate(const ScalarField& rho, double x_hat, double y_hat);

// Node-wise l and s (cumulative trapezoid, identical to the pointwise
// quadratures at nodes) and jac = c1 sigma0 rho. Throws InvariantError on
// mismatched grids, p <= 0, or any jac <= 0.
DorodnitzynMap build_map(const ScalarField& p, const ScalarField& rho,
                         const thermo::DerivedConstants& dc, const thermo::FreeStream& fs);

// z = s / sqrt(l); throws DomainError for l <= 0.
double blasius_z(double ell, double s);

// Max-norm of the centered-difference divergence over interior nodes.
double divergence_residual(const ScalarField& rho_u, const ScalarField& rho_v);

// 1e-8 * max(|rho u|, |rho v|) / min(dx, dy)
double default_divergence_tolerance(const ScalarField& rho_u, const ScalarField& rho_v);

enum class StreamPath {
  kBottomThenUp,    // -rho v along y = 0, then rho u upward (canonical)
  kLeftThenAcross,  // rho u along x = 0, then -rho v across
};

// psi with psi(0, 0) = 0, d psi/dx = -rho v and d psi/dy = rho u, integrated
// by composite trapezoid along the chosen L-shaped path. Throws
// InvariantError when divergence_residual exceeds the tolerance.
ScalarField stream_function(const ScalarField& rho_u, const ScalarField& rho_v,
                            std::optional<double> divergence_tolerance = std::nullopt,
                            StreamPath path = StreamPath::kBottomThenUp);

// Max-norm difference between the two L-shaped integration paths.
double stream_function_path_discrepancy(const ScalarField& rho_u, const ScalarField& rho_v,
                                        std::optional<double> divergence_tolerance = std::nullopt);

// f and its first three derivatives on the strip variable z.
struct SmoothProfile {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
  std::function<double(double)> d3f;
};

struct MomentumIdentityResidual {
  double convective = 0.0;  // psi_s psi_ls - psi_l psi_ss vs -(1/2) l^-1 f f''
  double viscous = 0.0;     // d/ds(sigma^-6/25 psi_ss) vs l^-1 d/dz(sigma^-6/25 f'')
};

// Builds Psi = sqrt(l) f(s / sqrt(l)), evaluates both identities at each z in
// `z_nodes` by centered differences of step `step` in (l, s) and analytically
// in (l, z), and returns the max-norm discrepancies. sigma = 1 - f'^2 / (2 i0);
// i0 = infinity gives sigma = 1.
MomentumIdentityResidual momentum_identity_check(
    const SmoothProfile& profile, double ell, std::span<const double> z_nodes, double step,
    double i0 = std::numeric_limits<double>::infinity());

}  // namespace strato::transform
