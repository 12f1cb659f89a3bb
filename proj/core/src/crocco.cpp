#include "strato/crocco.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <boost/numeric/odeint.hpp>
#include <json.hpp>

#include "strato/errors.hpp"

namespace strato::crocco {

namespace odeint = boost::numeric::odeint;

CroccoProblem CroccoProblem::from_scenario(const thermo::DerivedConstants& dc,
                                           const thermo::FreeStream& fs) {
  return {dc.K_detau, fs.i0(), fs.U()};
}

double CroccoProblem::tau_scale() const { return std::sqrt(K * U * U * U); }

void validate(const CroccoProblem& prob) {
  if (!(prob.K >= 0.0) || !std::isfinite(prob.K)) {
    throw InvariantError("CroccoProblem: K must be finite and nonnegative");
  }
  if (!(prob.U > 0.0) || !std::isfinite(prob.U)) {
    throw InvariantError("CroccoProblem: U must be finite and positive");
  }
  if (!(prob.i0 > 0.0)) throw InvariantError("CroccoProblem: i0 must be positive");
  if (!prob.is_incompressible() && !(prob.U * prob.U < 2.0 * prob.i0)) {
    throw InvariantError("CroccoProblem: U^2 must be below 2 i0");
  }
}

namespace {

using State = std::array<double, 2>;

// Width of the edge band (relative to U) where the shooting integration
// switches to the logarithmic variable.
constexpr double kEdgeBand = 1e-3;
// ... or earlier, once tau has fallen below this fraction of the wall value.
constexpr double kSwitchFraction = 0.02;
// e-folds of tau covered by the logarithmic phase.
constexpr double kLogSpan = 40.0;
constexpr double kParabolaScale = 0.47;

// K u sigma(u)^(-6/25), continued past U while sigma > 0. NaN beyond.
double forcing(double u, const CroccoProblem& prob) {
  if (prob.is_incompressible()) return prob.K * u;
  const double sigma = 1.0 - u * u / (2.0 * prob.i0);
  if (!(sigma > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return prob.K * u * std::pow(sigma, kSigmaExponent);
}

double sigma_of(double u, const CroccoProblem& prob) {
  return prob.is_incompressible() ? 1.0 : 1.0 - u * u / (2.0 * prob.i0);
}

struct Shot {
  double u_zero = 0.0;    // where tau reaches zero (extrapolated through the log phase)
  double tau_at_U = 0.0;  // 0 when u_zero <= U
  bool overshoot = false; // trajectory ran past sqrt(2 i0) before tau vanished
  // Landing point of the zero crossing; overshoot counts as far past U.
  double landing(double U) const { return overshoot ? 2.0 * U : u_zero; }
};

template <class Stepper, class Fn>
double bisect_time(Stepper& stepper, double lo, double hi, Fn&& above) {
  State x;
  for (int k = 0; k < 80 && hi - lo > 0.0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    stepper.calc_state(mid, x);
    if (above(x)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// Integrates from the wall with tau(0) = tau_wall, tau'(0) = 0. When
// `nodes` is nonempty, tau at each node is written to `tau_out`.
Shot shoot(const CroccoProblem& prob, double tau_wall, std::span<const double> nodes,
           std::vector<double>* tau_out) {
  const double U = prob.U;
  const double scale = prob.tau_scale();
  const double rel_tol = 1e-12;
  const double huge = 1e300;

  if (tau_out) tau_out->assign(nodes.size(), 0.0);
  std::size_t next = 0;

  // Phase 1: (tau, tau') against u.
  auto wall_system = [&](const State& x, State& dxdu, double u) {
    dxdu[0] = x[1];
    dxdu[1] = x[0] > 0.0 ? -forcing(u, prob) / x[0] : -huge;
  };
  const double u_band = U * (1.0 - kEdgeBand);
  const double threshold = kSwitchFraction * tau_wall;
  auto stepper_u = odeint::make_dense_output(1e-13 * std::min(scale, scale / U), rel_tol,
                                             kEdgeBand * U, odeint::runge_kutta_dopri5<State>());
  stepper_u.initialize(State{tau_wall, 0.0}, 0.0, 1e-4 * U);

  double u_switch = 0.0;
  State x_switch{};
  for (int steps = 0;; ++steps) {
    if (steps > 2000000) throw ConvergenceError("solve_shooting: step budget exhausted", steps, 0);
    const auto [u0, u1] = stepper_u.do_step(wall_system);
    const double u_end = std::min(u1, u_band);
    State xe;
    stepper_u.calc_state(u_end, xe);
    bool done = false;
    if (!(xe[0] > threshold)) {
      u_switch = bisect_time(stepper_u, u0, u_end, [&](const State& x) { return x[0] > threshold; });
      done = true;
    } else if (u1 >= u_band) {
      u_switch = u_band;
      done = true;
    }
    const double emit_to = done ? u_switch : u1;
    while (tau_out && next < nodes.size() && nodes[next] <= emit_to) {
      State xn;
      stepper_u.calc_state(std::max(nodes[next], u0), xn);
      (*tau_out)[next++] = xn[0];
    }
    if (done) {
      stepper_u.calc_state(u_switch, x_switch);
      break;
    }
  }

  // Phase 2: with t = -ln(tau) and p = tau'^2 / 2,
  //   du/dt = e^-t / sqrt(2 p),   dp/dt = K u sigma^(-6/25),
  // which stays regular as tau -> 0.
  Shot shot;
  auto log_system = [&](const State& y, State& dydt, double t) {
    const double c = forcing(y[0], prob);
    if (std::isnan(c)) {
      shot.overshoot = true;
      dydt = {0.0, 0.0};
      return;
    }
    dydt[0] = std::exp(-t) / std::sqrt(2.0 * y[1]);
    dydt[1] = c;
  };
  const double p_switch = 0.5 * x_switch[1] * x_switch[1];
  const double t_start = -std::log(x_switch[0]);
  const double t_stop = t_start + kLogSpan;
  auto stepper_t = odeint::make_dense_output(
      1e-13 * std::min(U, std::max(p_switch, 1e-300)), rel_tol, 1.0,
      odeint::runge_kutta_dopri5<State>());
  stepper_t.initialize(State{u_switch, p_switch}, t_start, 1e-3);

  bool edge_found = false;
  for (int steps = 0;; ++steps) {
    if (steps > 2000000) throw ConvergenceError("solve_shooting: step budget exhausted", steps, 0);
    const auto [t0, t1] = stepper_t.do_step(log_system);
    if (shot.overshoot) return shot;
    State y0, y1;
    stepper_t.calc_state(t0, y0);
    stepper_t.calc_state(t1, y1);
    while (tau_out && next < nodes.size() && nodes[next] <= y1[0]) {
      const double target = nodes[next];
      const double t = bisect_time(stepper_t, t0, t1, [&](const State& y) { return y[0] < target; });
      (*tau_out)[next++] = std::exp(-t);
    }
    if (!edge_found && U <= y1[0] && U > y0[0]) {
      const double t = bisect_time(stepper_t, t0, t1, [&](const State& y) { return y[0] < U; });
      shot.tau_at_U = std::exp(-t);
      edge_found = true;
    }
    if (t1 >= t_stop) {
      State y_end;
      stepper_t.calc_state(t_stop, y_end);
      shot.u_zero = y_end[0];
      break;
    }
  }
  return shot;
}

SolverMeta degenerate_meta(const char* method) {
  SolverMeta meta;
  meta.method = method;
  meta.degenerate = true;
  return meta;
}

}  // namespace

double rhs(double u, const CroccoProblem& prob) {
  const double slack = 1e-12 * prob.U;
  if (!(u >= 0.0 && u <= prob.U + slack)) throw DomainError("crocco::rhs: u outside [0, U]");
  return -forcing(u, prob);
}

CroccoSolution solve_shooting(const CroccoProblem& prob, double tol, std::size_t n_out) {
  if (n_out < 2) throw InvariantError("solve_shooting: need at least 2 output nodes");
  std::vector<double> nodes(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    nodes[i] = prob.U * static_cast<double>(i) / static_cast<double>(n_out - 1);
  }
  nodes.back() = prob.U;
  return solve_shooting(prob, tol, nodes);
}

CroccoSolution solve_shooting(const CroccoProblem& prob, double tol,
                              std::span<const double> u_nodes) {
  validate(prob);
  if (!(tol > 0.0)) throw InvariantError("solve_shooting: tol must be positive");
  if (u_nodes.size() < 2 || u_nodes.front() != 0.0 || u_nodes.back() != prob.U ||
      !std::is_sorted(u_nodes.begin(), u_nodes.end())) {
    throw InvariantError("solve_shooting: output nodes must ascend from 0 to U");
  }

  CroccoSolution sol;
  sol.u_grid.assign(u_nodes.begin(), u_nodes.end());
  if (prob.K == 0.0) {
    sol.tau.assign(u_nodes.size(), 0.0);
    sol.meta = degenerate_meta("shooting");
    return sol;
  }

  const double U = prob.U;
  auto miss = [&](double tw) { return (shoot(prob, tw, {}, nullptr).landing(U) - U) / U; };

  const double guess = kParabolaScale * prob.tau_scale();
  double a = 0.5 * guess;
  double b = 1.5 * guess;
  double fa = miss(a);
  double fb = miss(b);
  int evaluations = 2;
  for (int k = 0; fa >= 0.0; ++k) {
    if (k == 40) throw ConvergenceError("solve_shooting: cannot bracket from below", evaluations, fa);
    a *= 0.5;
    fa = miss(a);
    ++evaluations;
  }
  for (int k = 0; fb <= 0.0; ++k) {
    if (k == 40) throw ConvergenceError("solve_shooting: cannot bracket from above", evaluations, fb);
    b *= 2.0;
    fb = miss(b);
    ++evaluations;
  }

  // Secant steps between the bracket ends, Illinois-weighted so the bracket
  // keeps shrinking from both sides.
  const double miss_tol = std::max(1e-14, std::min(1e-13, 1e-3 * tol));
  double tw = b;
  double f_tw = fb;
  int it = 0;
  for (; it < 200; ++it) {
    tw = (a * fb - b * fa) / (fb - fa);
    f_tw = miss(tw);
    ++evaluations;
    if (std::abs(f_tw) <= miss_tol || std::abs(b - a) <= 1e-15 * tw) break;
    if (f_tw * fb > 0.0) {
      fa *= 0.5;
    } else {
      a = b;
      fa = fb;
    }
    b = tw;
    fb = f_tw;
  }
  if (it == 200) throw ConvergenceError("solve_shooting: secant iteration stalled", it, f_tw);

  const Shot final_shot = shoot(prob, tw, u_nodes, &sol.tau);
  const double terminal = final_shot.tau_at_U / tw;
  if (terminal > tol) {
    throw ConvergenceError("solve_shooting: |tau(U)| exceeds tol * tau_wall", it, terminal);
  }
  if (final_shot.u_zero < U * (1.0 - tol)) {
    throw PrematureSeparationError("solve_shooting: tau vanishes before u = U", final_shot.u_zero);
  }
  sol.tau.back() = final_shot.tau_at_U;
  sol.tau_wall = tw;
  sol.meta.method = "shooting";
  sol.meta.iterations = evaluations;
  sol.meta.residual_norm = std::max(terminal, std::abs(final_shot.u_zero - U) / U);
  return sol;
}

std::vector<double> graded_grid(double U, std::size_t n) {
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = 1.0 - static_cast<double>(i) / static_cast<double>(n - 1);
    u[i] = U * (1.0 - s * s);
  }
  u.front() = 0.0;
  u.back() = U;
  return u;
}

CroccoSolution solve_fd_newton(const CroccoProblem& prob, std::size_t n, double tol) {
  validate(prob);
  if (n < 50) throw InvariantError("solve_fd_newton: need n >= 50");
  if (!(tol > 0.0)) throw InvariantError("solve_fd_newton: tol must be positive");

  CroccoSolution sol;
  sol.u_grid = graded_grid(prob.U, n);
  const auto& u = sol.u_grid;
  if (prob.K == 0.0) {
    sol.tau.assign(n, 0.0);
    sol.meta = degenerate_meta("fd-newton");
    return sol;
  }

  const double U = prob.U;
  const double scale = prob.tau_scale();
  const double eq_scale = 1.0 / (prob.K * U);  // rows 1..m-1 are tau tau'' - rhs
  const double wall_scale = U / scale;         // row 0 is tau'(0)
  const std::size_t m = n - 1;                 // unknowns tau_0 .. tau_{n-2}

  std::vector<double> forcing_at(n);  // -rhs, so rows read tau tau'' + forcing
  for (std::size_t i = 0; i < n; ++i) forcing_at[i] = -rhs(u[i], prob);

  // Stencil weights of the nonuniform centered second difference.
  std::vector<double> cm(n, 0.0), c0(n, 0.0), cp(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = u[i] - u[i - 1];
    const double hp = u[i + 1] - u[i];
    cm[i] = 2.0 / (hm * (hm + hp));
    cp[i] = 2.0 / (hp * (hm + hp));
    c0[i] = -cm[i] - cp[i];
  }
  const double h1 = u[1] - u[0];
  const double h2 = u[2] - u[1];
  const double a0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
  const double a1 = (h1 + h2) / (h1 * h2);
  const double a2 = -h1 / (h2 * (h1 + h2));

  std::vector<double> tau(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = u[i] / U;
    tau[i] = kParabolaScale * scale * (1.0 - r * r);
  }

  // Max-norm of the scaled rows. `floor` receives the round-off level of the
  // same rows (cancellation in the second difference grows like n^2 eps).
  auto residual = [&](const std::vector<double>& t, std::vector<double>& r, double* floor) {
    r[0] = (a0 * t[0] + a1 * t[1] + a2 * t[2]) * wall_scale;
    double worst = std::abs(r[0]);
    double noise = (std::abs(a0 * t[0]) + std::abs(a1 * t[1]) + std::abs(a2 * t[2])) * wall_scale;
    for (std::size_t i = 1; i < m; ++i) {
      const double d2 = cm[i] * t[i - 1] + c0[i] * t[i] + cp[i] * t[i + 1];
      r[i] = (t[i] * d2 + forcing_at[i]) * eq_scale;
      worst = std::max(worst, std::abs(r[i]));
      const double mag = std::abs(t[i]) * (std::abs(cm[i] * t[i - 1]) + std::abs(c0[i] * t[i]) +
                                           std::abs(cp[i] * t[i + 1]));
      noise = std::max(noise, (mag + std::abs(forcing_at[i])) * eq_scale);
    }
    if (floor) *floor = 16.0 * std::numeric_limits<double>::epsilon() * noise;
    return worst;
  };

  std::vector<double> r(m), lower(m), diag(m), upper(m), delta(m), trial(n, 0.0), r_trial(m);
  double floor = 0.0;
  double norm = residual(tau, r, &floor);
  auto target = [&] { return std::max(tol, floor); };
  double best = norm;
  int since_best = 0;
  constexpr int kStallWindow = 20;
  int it = 0;
  for (; it < 200 && norm > target(); ++it) {
    // Jacobian rows (scaled like the residual).
    diag[0] = a0 * wall_scale;
    upper[0] = a1 * wall_scale;
    const double wall_third = a2 * wall_scale;
    for (std::size_t i = 1; i < m; ++i) {
      const double d2 = cm[i] * tau[i - 1] + c0[i] * tau[i] + cp[i] * tau[i + 1];
      lower[i] = tau[i] * cm[i] * eq_scale;
      diag[i] = (d2 + tau[i] * c0[i]) * eq_scale;
      upper[i] = i + 1 < m ? tau[i] * cp[i] * eq_scale : 0.0;
    }
    // Remove the third wall entry with row 1 to leave a tridiagonal system.
    std::vector<double> rhs_vec(r);
    const double mult = wall_third / upper[1];
    diag[0] -= mult * lower[1];
    upper[0] -= mult * diag[1];
    rhs_vec[0] -= mult * rhs_vec[1];

    // Thomas algorithm for J delta = -r.
    std::vector<double> cprime(m), dprime(m);
    cprime[0] = upper[0] / diag[0];
    dprime[0] = -rhs_vec[0] / diag[0];
    for (std::size_t i = 1; i < m; ++i) {
      const double denom = diag[i] - lower[i] * cprime[i - 1];
      if (denom == 0.0 || !std::isfinite(denom)) {
        throw ConvergenceError("solve_fd_newton: singular Jacobian", it, norm);
      }
      cprime[i] = upper[i] / denom;
      dprime[i] = (-rhs_vec[i] - lower[i] * dprime[i - 1]) / denom;
    }
    delta[m - 1] = dprime[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) delta[i] = dprime[i] - cprime[i] * delta[i + 1];

    // Damping only to keep tau > 0; the residual may rise transiently while
    // the edge rows settle, so progress is judged over a window instead.
    double lambda = 1.0;
    for (int k = 0; k < 60; ++k) {
      bool positive = true;
      for (std::size_t i = 0; i < m && positive; ++i) positive = tau[i] + lambda * delta[i] > 0.0;
      if (positive) break;
      lambda *= 0.5;
    }
    for (std::size_t i = 0; i < m; ++i) trial[i] = tau[i] + lambda * delta[i];
    const double trial_norm = residual(trial, r_trial, &floor);
    if (!std::isfinite(trial_norm)) {
      throw ConvergenceError("solve_fd_newton: non-finite residual", it, norm);
    }
    tau.swap(trial);
    trial.assign(n, 0.0);
    r.swap(r_trial);
    norm = trial_norm;
    if (norm < 0.5 * best) {
      best = norm;
      since_best = 0;
    } else if (++since_best > kStallWindow) {
      throw ConvergenceError("solve_fd_newton: Newton iteration stagnated", it, norm);
    }
  }
  if (norm > target()) throw ConvergenceError("solve_fd_newton: no convergence", it, norm);

  tau.back() = 0.0;
  sol.tau = std::move(tau);
  sol.tau_wall = sol.tau.front();
  sol.meta.method = "fd-newton";
  sol.meta.iterations = it;
  sol.meta.residual_norm = norm;
  return sol;
}

SimilarityProfile reconstruct_f(const CroccoSolution& sol, const CroccoProblem& prob) {
  validate(prob);
  if (sol.meta.degenerate) throw InvariantError("reconstruct_f: degenerate solution");
  const std::size_t n = sol.u_grid.size();
  if (n < 3 || sol.tau.size() != n) throw InvariantError("reconstruct_f: malformed solution");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(sol.tau[i] > 0.0)) throw InvariantError("reconstruct_f: nonpositive interior tau");
  }

  SimilarityProfile out;
  const std::size_t m = n - 1;
  out.z.assign(m, 0.0);
  out.f.assign(m, 0.0);
  out.u.assign(sol.u_grid.begin(), sol.u_grid.begin() + static_cast<std::ptrdiff_t>(m));
  auto dzdu = [&](std::size_t i) {
    return std::pow(sigma_of(sol.u_grid[i], prob), kSigmaExponent) / sol.tau[i];
  };
  double g_prev = dzdu(0);
  for (std::size_t i = 1; i < m; ++i) {
    const double g = dzdu(i);
    const double du = sol.u_grid[i] - sol.u_grid[i - 1];
    out.z[i] = out.z[i - 1] + 0.5 * du * (g_prev + g);
    out.f[i] = out.f[i - 1] + 0.5 * du * (sol.u_grid[i - 1] * g_prev + sol.u_grid[i] * g);
    g_prev = g;
  }
  return out;
}

void write_csv(std::ostream& os, const CroccoSolution& sol) {
  char buf[64];
  os << "u,tau\n";
  for (std::size_t i = 0; i < sol.u_grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", sol.u_grid[i], sol.tau[i]);
    os << buf;
  }
}

std::string to_json(const CroccoSolution& sol, const CroccoProblem& prob) {
  nlohmann::json j;
  j["problem"] = {{"K", prob.K},
                  {"U", prob.U},
                  {"i0", prob.is_incompressible() ? nlohmann::json(nullptr) : nlohmann::json(prob.i0)},
                  {"exponent", kSigmaExponent}};
  j["tau_wall"] = sol.tau_wall;
  j["meta"] = {{"method", sol.meta.method},
               {"iterations", sol.meta.iterations},
               {"residual_norm", sol.meta.residual_norm},
               {"degenerate", sol.meta.degenerate}};
  j["u"] = sol.u_grid;
  j["tau"] = sol.tau;
  return j.dump(2);
}

}  // namespace strato::crocco
