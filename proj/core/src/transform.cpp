#include "strato/transform.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "strato/errors.hpp"

namespace strato::transform {

namespace {

constexpr double kViscousExponent = -6.0 / 25.0;

void require_positive(const ScalarField& f, const char* what) {
  if (!(f.min_value() > 0.0)) throw InvariantError(what);
}

void require_inside(const ScalarField& f, double x, double y) {
  if (!(x >= 0.0 && x <= f.L() && y >= 0.0 && y <= f.h())) {
    throw DomainError("point outside R = [0,L]x[0,h]");
  }
}

// Trapezoid of a uniformly sampled line g_0..g_{n-1} (spacing d) over
// [0, t], with the final partial cell closed by linear interpolation.
double trapezoid_to(const std::vector<double>& g, double d, double t) {
  const std::size_t n = g.size();
  const double ft = t / d;
  const std::size_t k = std::min(static_cast<std::size_t>(ft), n - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += 0.5 * d * (g[i] + g[i + 1]);
  const double rem = t - static_cast<double>(k) * d;
  if (rem > 0.0 && k + 1 < n) {
    const double w = rem / d;
    const double g_t = (1.0 - w) * g[k] + w * g[k + 1];
    sum += 0.5 * rem * (g[k] + g_t);
  }
  return sum;
}

}  // namespace

double ell_coordinate(const ScalarField& p, double x_hat, double y_hat) {
  require_inside(p, x_hat, y_hat);
  require_positive(p, "ell_coordinate: pressure must be strictly positive");
  std::vector<double> row(p.nx());
  for (std::size_t i = 0; i < p.nx(); ++i) row[i] = p.interpolate(p.x(i), y_hat);
  return trapezoid_to(row, p.dx(), x_hat);
}

double s_coordinate(const ScalarField& rho, double x_hat, double y_hat) {
  require_inside(rho, x_hat, y_hat);
  require_positive(rho, "s_coordinate: density must be strictly positive");
  std::vector<double> col(rho.ny());
  for (std::size_t j = 0; j < rho.ny(); ++j) col[j] = rho.interpolate(x_hat, rho.y(j));
  return trapezoid_to(col, rho.dy(), y_hat);
}

DorodnitzynMap build_map(const ScalarField& p, const ScalarField& rho,
                         const thermo::DerivedConstants& dc, const thermo::FreeStream& fs) {
  if (!p.same_grid(rho)) throw InvariantError("build_map: p and rho grids differ");
  const std::size_t nx = p.nx();
  const std::size_t ny = p.ny();

  std::vector<double> jac(nx * ny);
  const double scale = dc.c1 * fs.sigma0();
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      jac[j * nx + i] = scale * rho(i, j);
      if (!(jac[j * nx + i] > 0.0)) {
        throw InvariantError("build_map: nonpositive Jacobian, map is not a diffeomorphism");
      }
    }
  }
  require_positive(p, "build_map: pressure must be strictly positive");

  std::vector<double> ell(nx * ny, 0.0);
  std::vector<double> s(nx * ny, 0.0);
  const double dx = p.dx();
  const double dy = p.dy();
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 1; i < nx; ++i) {
      ell[j * nx + i] = ell[j * nx + i - 1] + 0.5 * dx * (p(i - 1, j) + p(i, j));
    }
  }
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 1; j < ny; ++j) {
      s[j * nx + i] = s[(j - 1) * nx + i] + 0.5 * dy * (rho(i, j - 1) + rho(i, j));
    }
  }
  return {ScalarField(nx, ny, p.L(), p.h(), std::move(ell)),
          ScalarField(nx, ny, p.L(), p.h(), std::move(s)),
          ScalarField(nx, ny, p.L(), p.h(), std::move(jac))};
}

double blasius_z(double ell, double s) {
  if (!(ell > 0.0)) throw DomainError("blasius_z: strip map undefined for l <= 0");
  return s / std::sqrt(ell);
}

double divergence_residual(const ScalarField& rho_u, const ScalarField& rho_v) {
  if (!rho_u.same_grid(rho_v)) throw InvariantError("divergence_residual: grids differ");
  const double inv2dx = 0.5 / rho_u.dx();
  const double inv2dy = 0.5 / rho_u.dy();
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < rho_u.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < rho_u.nx(); ++i) {
      const double div = (rho_u(i + 1, j) - rho_u(i - 1, j)) * inv2dx +
                         (rho_v(i, j + 1) - rho_v(i, j - 1)) * inv2dy;
      worst = std::max(worst, std::abs(div));
    }
  }
  return worst;
}

double default_divergence_tolerance(const ScalarField& rho_u, const ScalarField& rho_v) {
  const double scale = std::max(rho_u.max_abs(), rho_v.max_abs());
  return 1e-8 * scale / std::min(rho_u.dx(), rho_u.dy());
}

ScalarField stream_function(const ScalarField& rho_u, const ScalarField& rho_v,
                            std::optional<double> divergence_tolerance, StreamPath path) {
  if (!rho_u.same_grid(rho_v)) throw InvariantError("stream_function: grids differ");
  const double tol = divergence_tolerance.value_or(default_divergence_tolerance(rho_u, rho_v));
  const double res = divergence_residual(rho_u, rho_v);
  if (res > tol) {
    throw InvariantError("stream_function: mass flux is not divergence-free (residual " +
                         std::to_string(res) + " > " + std::to_string(tol) + ")");
  }

  const std::size_t nx = rho_u.nx();
  const std::size_t ny = rho_u.ny();
  const double dx = rho_u.dx();
  const double dy = rho_u.dy();
  std::vector<double> psi(nx * ny, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return psi[j * nx + i]; };

  if (path == StreamPath::kBottomThenUp) {
    for (std::size_t i = 1; i < nx; ++i) {
      at(i, 0) = at(i - 1, 0) - 0.5 * dx * (rho_v(i - 1, 0) + rho_v(i, 0));
    }
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 1; j < ny; ++j) {
        at(i, j) = at(i, j - 1) + 0.5 * dy * (rho_u(i, j - 1) + rho_u(i, j));
      }
    }
  } else {
    for (std::size_t j = 1; j < ny; ++j) {
      at(0, j) = at(0, j - 1) + 0.5 * dy * (rho_u(0, j - 1) + rho_u(0, j));
    }
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 1; i < nx; ++i) {
        at(i, j) = at(i - 1, j) - 0.5 * dx * (rho_v(i - 1, j) + rho_v(i, j));
      }
    }
  }
  return ScalarField(nx, ny, rho_u.L(), rho_u.h(), std::move(psi));
}

double stream_function_path_discrepancy(const ScalarField& rho_u, const ScalarField& rho_v,
                                        std::optional<double> divergence_tolerance) {
  const auto a = stream_function(rho_u, rho_v, divergence_tolerance, StreamPath::kBottomThenUp);
  const auto b = stream_function(rho_u, rho_v, divergence_tolerance, StreamPath::kLeftThenAcross);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
  }
  return worst;
}

MomentumIdentityResidual momentum_identity_check(const SmoothProfile& profile, double ell,
                                                 std::span<const double> z_nodes, double step,
                                                 double i0) {
  if (!(ell > 0.0)) throw DomainError("momentum_identity_check: l must be positive");
  if (!(step > 0.0) || step >= ell) {
    throw DomainError("momentum_identity_check: step must lie in (0, l)");
  }
  const double d = step;
  auto psi = [&](double l, double s) { return std::sqrt(l) * profile.f(s / std::sqrt(l)); };
  auto sigma = [&](double u) { return std::isinf(i0) ? 1.0 : 1.0 - u * u / (2.0 * i0); };

  auto psi_s = [&](double l, double s) { return (psi(l, s + d) - psi(l, s - d)) / (2.0 * d); };
  auto psi_ss = [&](double l, double s) {
    return (psi(l, s + d) - 2.0 * psi(l, s) + psi(l, s - d)) / (d * d);
  };
  // sigma^-6/25 psi_ss with u = psi_s in the transformed plane.
  auto viscous_flux = [&](double l, double s) {
    return std::pow(sigma(psi_s(l, s)), kViscousExponent) * psi_ss(l, s);
  };

  MomentumIdentityResidual out;
  for (double z : z_nodes) {
    const double s = z * std::sqrt(ell);

    const double ps = psi_s(ell, s);
    const double pl = (psi(ell + d, s) - psi(ell - d, s)) / (2.0 * d);
    const double pss = psi_ss(ell, s);
    const double pls = (psi(ell + d, s + d) - psi(ell + d, s - d) - psi(ell - d, s + d) +
                        psi(ell - d, s - d)) /
                       (4.0 * d * d);
    const double convective_fd = ps * pls - pl * pss;

    const double f = profile.f(z);
    const double f1 = profile.df(z);
    const double f2 = profile.d2f(z);
    const double f3 = profile.d3f(z);
    const double convective_exact = -0.5 / ell * f * f2;

    const double viscous_fd = (viscous_flux(ell, s + d) - viscous_flux(ell, s - d)) / (2.0 * d);
    const double sg = sigma(f1);
    const double dsigma = std::isinf(i0) ? 0.0 : -f1 * f2 / i0;
    const double viscous_exact =
        (std::pow(sg, kViscousExponent) * f3 +
         kViscousExponent * std::pow(sg, kViscousExponent - 1.0) * dsigma * f2) /
        ell;

    out.convective = std::max(out.convective, std::abs(convective_fd - convective_exact));
    out.viscous = std::max(out.viscous, std::abs(viscous_fd - viscous_exact));
  }
  return out;
}

}  // namespace strato::transform
