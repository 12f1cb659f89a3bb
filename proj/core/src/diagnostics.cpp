#include "strato/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "strato/crocco.hpp"
#include "strato/errors.hpp"
#include "strato/field.hpp"
#include "strato/transform.hpp"

namespace strato::diagnostics {

TransformCheck transform_check(const thermo::FreeStream& fs, const thermo::GasProperties& gas,
                               thermo::NormalizationMode mode, std::size_t nx, std::size_t ny) {
  const auto dc = thermo::derived_constants(fs, gas, mode);
  const double L = fs.L();
  const double h = fs.h();
  const double U = fs.U();

  TransformCheck out;
  out.nx = nx;
  out.ny = ny;

  const double p_const = dc.c1 * fs.sigma0();
  const auto p = ScalarField::sample(nx, ny, L, h, [&](double, double) { return p_const; });
  const auto rho = ScalarField::sample(nx, ny, L, h, [&](double, double y) {
    return thermo::density_of_u(U * y / h, dc, fs);
  });
  const auto map = transform::build_map(p, rho, dc, fs);
  out.jac_min = map.jac.min_value();
  out.ell_M = transform::ell_coordinate(p, L, 0.0);
  out.ell_M_expected = p_const * L;
  out.ell_M_rel_error = std::abs(out.ell_M - out.ell_M_expected) / out.ell_M_expected;

  // psi = rho_w U (y^2 / (2h) + x y / L + x^2 h / L^2): exact under trapezoid.
  const double rho_w = thermo::density_of_u(0.0, dc, fs);
  const double scale = rho_w * std::max(U, 1.0);
  const auto rho_u = ScalarField::sample(nx, ny, L, h, [&](double x, double y) {
    return scale * (y / h + x / L);
  });
  const auto rho_v = ScalarField::sample(nx, ny, L, h, [&](double x, double y) {
    return -scale * (y / L + 2.0 * x * h / (L * L));
  });
  const auto psi = transform::stream_function(rho_u, rho_v);
  out.stream_norm = psi.max_abs();
  out.stream_discrepancy = transform::stream_function_path_discrepancy(rho_u, rho_v);

  transform::SmoothProfile prof{
      [](double z) { return z - 1.0 + std::exp(-z); },
      [](double z) { return 1.0 - std::exp(-z); },
      [](double z) { return std::exp(-z); },
      [](double z) { return -std::exp(-z); }};
  const std::vector<double> z = {0.5, 1.0, 2.0, 3.0};
  const double ell = 1.0;
  const double d = 1e-2;
  for (int k = 0; k < 2; ++k) {
    const auto r = transform::momentum_identity_check(prof, ell, z, d / (1 << k), fs.i0());
    out.momentum_convective[k] = r.convective;
    out.momentum_viscous[k] = r.viscous;
  }
  out.momentum_order = std::log2(out.momentum_viscous[0] / out.momentum_viscous[1]);
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvariantError("loglog_slope: need two or more paired samples");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw DomainError("loglog_slope: values must be positive");
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

EpsilonSweep epsilon_sweep(const thermo::FreeStream& fs, const thermo::GasProperties& gas,
                           thermo::NormalizationMode mode, const std::vector<double>& eps_values,
                           std::size_t nx, std::size_t ny) {
  const auto dc = thermo::derived_constants(fs, gas, mode);
  const double U = fs.U();
  if (!(U > 0.0)) throw DomainError("epsilon_sweep: needs U > 0");

  std::vector<double> u_col(ny);
  for (std::size_t j = 0; j < ny; ++j) {
    u_col[j] = U * std::sin(0.5 * std::numbers::pi * static_cast<double>(j) /
                            static_cast<double>(ny - 1));
  }
  u_col.front() = 0.0;
  u_col.back() = U;
  const auto prob = crocco::CroccoProblem::from_scenario(dc, fs);
  const auto sol = crocco::solve_shooting(prob, 1e-10, u_col);

  std::vector<double> uv(nx * ny), tv(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      uv[j * nx + i] = u_col[j];
      tv[j * nx + i] = sol.tau[j];
    }
  }
  const ScalarField u_field(nx, ny, fs.L(), fs.h(), std::move(uv));
  const ScalarField tau_field(nx, ny, fs.L(), fs.h(), std::move(tv));

  EpsilonSweep out;
  std::vector<double> xs, ys;
  for (double eps : eps_values) {
    const limit::EpsilonScaling es(eps, fs.L());
    const auto r = limit::epsilon_residual(u_field, tau_field, es, dc, fs);
    out.rows.push_back({eps, r});
    xs.push_back(eps);
    ys.push_back(r.lhs_norm);
  }
  if (xs.size() >= 2) out.slope = loglog_slope(xs, ys);

  const auto u_const = ScalarField::sample(nx, ny, fs.L(), fs.h(), [&](double, double) { return U; });
  out.limit_residual_constant = limit::limit_equation_residual(u_const, fs);
  return out;
}

}  // namespace strato::diagnostics
