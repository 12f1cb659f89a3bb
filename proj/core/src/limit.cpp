#include "strato/limit.hpp"

#include <algorithm>
#include <cmath>

#include "strato/errors.hpp"

namespace strato::limit {

namespace {

constexpr double kOmega = 19.0 / 25.0;
constexpr double kViscous = -6.0 / 25.0;

double tau_s_closed_form(double x, double b, const thermo::DerivedConstants& dc,
                         const thermo::FreeStream& fs) {
  if (!(x >= 0.0)) throw DomainError("tau_s_estimate: x must be nonnegative");
  return std::sqrt(dc.c1) / dc.c2 * (fs.U() / fs.h()) * std::sqrt(x) *
         std::pow(fs.sigma0(), tau_s_exponent(b));
}

}  // namespace

EpsilonScaling::EpsilonScaling(double eps, double L) : eps_(eps), L_(L) {
  if (!(L_ > 0.0) || !std::isfinite(L_)) throw InvariantError("EpsilonScaling: L must be positive");
  if (!(eps_ > 0.0 && eps_ <= 1.0)) throw InvariantError("EpsilonScaling: eps must lie in (0, 1]");
}

EpsilonScaling rescale(const thermo::FreeStream& fs) {
  return EpsilonScaling(fs.h() / fs.L(), fs.L());
}

EpsilonResidual epsilon_residual(const ScalarField& u_profile, const ScalarField& tau_field,
                                 const EpsilonScaling& es, const thermo::DerivedConstants& dc,
                                 const thermo::FreeStream& fs) {
  if (u_profile.nx() != tau_field.nx() || u_profile.ny() != tau_field.ny()) {
    throw InvariantError("epsilon_residual: u and tau node layouts differ");
  }
  const std::size_t nx = u_profile.nx();
  const std::size_t ny = u_profile.ny();
  const double L = es.L();
  const double eps = es.eps();
  const double i0 = fs.i0();
  const double k = thermo::polytropic_ratio(dc.b);
  const double c_tilde = std::sqrt(dc.c1) / dc.c2 * std::pow(fs.sigma0(), 0.5 - k);

  const double dy_star = 1.0 / static_cast<double>(ny - 1);
  const double dy_tau = tau_field.dy();
  const double slope_floor = 1e-12 * std::max(u_profile.max_abs(), 1e-300) / L;

  EpsilonResidual out;
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double u = u_profile(i, j);
      const double sigma = 1.0 - u * u / (2.0 * i0);
      if (!(sigma > 0.0)) throw DomainError("epsilon_residual: u^2 >= 2 i0");
      const double du_eps = (u_profile(i, j + 1) - u_profile(i, j - 1)) / (2.0 * dy_star) / L;
      if (!(std::abs(du_eps) > slope_floor)) {
        throw DomainError("epsilon_residual: du^eps/dy* vanishes at an interior node");
      }
      const double dtau = (tau_field(i, j + 1) - tau_field(i, j - 1)) / (2.0 * dy_tau);
      const double x = L * static_cast<double>(i) / static_cast<double>(nx - 1);
      const double ratio = dtau / du_eps;

      const double lhs =
          eps * c_tilde * std::sqrt(x) * std::pow(sigma, kOmega) * ratio - eps * eps * ratio * ratio;
      const double rhs = -dc.K_detau * u * std::pow(sigma, kViscous);
      out.lhs_norm = std::max(out.lhs_norm, std::abs(lhs));
      out.rhs_norm = std::max(out.rhs_norm, std::abs(rhs));
      out.residual_norm = std::max(out.residual_norm, std::abs(lhs - rhs));
    }
  }
  return out;
}

double limit_equation_residual(const ScalarField& u_star, const thermo::FreeStream& fs) {
  const std::size_t nx = u_star.nx();
  const std::size_t ny = u_star.ny();
  const double i0 = fs.i0();

  // Second-order derivative along a line of samples: centered inside,
  // three-point one-sided at the ends (two-point when only two samples).
  auto derivative = [](auto&& at, std::size_t n, std::size_t k, double d) {
    if (n == 2) return (at(1) - at(0)) / d;
    if (k == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * d);
    if (k == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * d);
    return (at(k + 1) - at(k - 1)) / (2.0 * d);
  };

  double worst = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double u = u_star(i, j);
      const double sigma = 1.0 - u * u / (2.0 * i0);
      if (!(sigma > 0.0)) throw DomainError("limit_equation_residual: u*^2 >= 2 i0");
      const double ux = derivative([&](std::size_t m) { return u_star(m, j); }, nx, i, u_star.dx());
      const double uy = derivative([&](std::size_t m) { return u_star(i, m); }, ny, j, u_star.dy());
      const double dS_du = kOmega * std::pow(sigma, kOmega - 1.0) * (-u / i0);
      worst = std::max(worst, std::abs(dS_du) * std::hypot(ux, uy));
    }
  }
  return worst;
}

double tau_s_exponent(double b) { return 1.0 - thermo::polytropic_ratio(b) + kViscous + 0.5; }

double tau_s_estimate(double x, const thermo::DerivedConstants& dc,
                      const thermo::FreeStream& fs, const thermo::GasProperties& gas) {
  return tau_s_closed_form(x, gas.b, dc, fs);
}

double tau_star(double U, double h, const thermo::GasProperties& gas, double T0) {
  if (!(h > 0.0)) throw DomainError("tau_star: h must be positive");
  if (!(T0 > 0.0)) throw DomainError("tau_star: T0 must be positive");
  const double speed = std::abs(U);
  const double sigma = 1.0 - speed * speed / (2.0 * gas.c_p * T0);
  if (!(sigma > 0.0)) throw DomainError("tau_star: U^2 >= 2 c_p T0");
  return speed / h * std::pow(sigma, gas.omega);
}

double density_estimate(const thermo::DerivedConstants& dc, const thermo::FreeStream& fs,
                        const thermo::GasProperties& gas) {
  const double k = thermo::polytropic_ratio(gas.b);
  const double t_power =
      dc.mode == thermo::NormalizationMode::kPaperRaw ? fs.T0() : fs.T0() / gas.T_h;
  return fs.p0() * std::pow(t_power, 2.0 * k) / fs.T0() / gas.R_hat *
         std::pow(fs.sigma0(), k - 1.0);
}

ShearEstimates shear_estimates(const thermo::DerivedConstants& dc, const thermo::FreeStream& fs,
                               const thermo::GasProperties& gas, std::size_t n_x) {
  ShearEstimates out;
  out.sigma0 = fs.sigma0();
  out.tau_star = tau_star(fs.U(), fs.h(), gas, fs.T0());
  out.rho_estimate = density_estimate(dc, fs, gas);
  const std::size_t n = std::max<std::size_t>(n_x, 2);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = fs.L() * static_cast<double>(k) / static_cast<double>(n - 1);
    out.x.push_back(x);
    out.tau_s_profile.push_back(tau_s_estimate(x, dc, fs, gas));
  }
  return out;
}

ComparisonReport compare_estimates(const crocco::CroccoSolution& sol,
                                   const thermo::FreeStream& fs,
                                   const thermo::DerivedConstants& dc, std::size_t n_x) {
  ComparisonReport rep;
  rep.tau_wall = sol.tau_wall;
  rep.tau_star = fs.U() / fs.h() * std::pow(fs.sigma0(), kOmega);
  rep.exponent_tau_s = tau_s_exponent(dc.b);
  rep.ratio_wall_to_tau_star = rep.tau_star > 0.0 ? sol.tau_wall / rep.tau_star : 0.0;
  const std::size_t n = std::max<std::size_t>(n_x, 1);
  for (std::size_t k = 1; k <= n; ++k) {
    ComparisonRow row;
    row.x = fs.L() * static_cast<double>(k) / static_cast<double>(n);
    row.tau_s = tau_s_closed_form(row.x, dc.b, dc, fs);
    row.ratio_wall_to_tau_s = row.tau_s > 0.0 ? sol.tau_wall / row.tau_s : 0.0;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace strato::limit
