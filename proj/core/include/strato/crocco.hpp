#pragma once

// Quasi-linear shear-stress equation in Crocco variables,
//
//   tau tau'' = -K u (1 - u^2 / (2 i0))^(-6/25),   0 <= u <= U,
//   tau'(0) = 0 (adiabatic wall, no pressure gradient),  tau(U) = 0,
//
// solved by shooting on the wall value and, independently, by finite
// differences with Newton iteration.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "strato/thermo.hpp"

namespace strato::crocco {

inline constexpr double kSigmaExponent = -6.0 / 25.0;

struct CroccoProblem {
  double K = 0.0;
  double i0 = std::numeric_limits<double>::infinity();  // infinity: incompressible
  double U = 0.0;

  static CroccoProblem incompressible(double K, double U) {
    return {K, std::numeric_limits<double>::infinity(), U};
  }
  // K = dc.K_detau, i0 and U from the free stream.
  static CroccoProblem from_scenario(const thermo::DerivedConstants& dc,
                                     const thermo::FreeStream& fs);

  bool is_incompressible() const noexcept { return i0 == std::numeric_limits<double>::infinity(); }
  // sqrt(K U^3): the natural scale of tau.
  double tau_scale() const;
};

// Throws InvariantError unless K >= 0, U > 0, i0 > 0 and U^2 < 2 i0.
void validate(const CroccoProblem& prob);

struct SolverMeta {
  std::string method;
  int iterations = 0;
  double residual_norm = 0.0;
  bool degenerate = false;  // K == 0: tau == 0 is the only solution
};

struct CroccoSolution {
  std::vector<double> u_grid;  // ascending, u_grid.front() == 0, u_grid.back() == U
  std::vector<double> tau;
  double tau_wall = 0.0;
  SolverMeta meta;
};

// -K u sigma(u)^(-6/25); -K u when incompressible. Throws DomainError for
// u outside [0, U].
double rhs(double u, const CroccoProblem& prob);

// Secant iteration on tau(0) with an adaptive Dormand-Prince integrator.
// Within the edge band the integration continues in xi = ln(tau), which
// removes the tau -> 0 singularity, and the miss function is the position
// where tau vanishes. On return |tau(U)| <= tol * tau_wall. The profile is
// reported on `n_out` uniform nodes, or on the caller's nodes.
CroccoSolution solve_shooting(const CroccoProblem& prob, double tol = 1e-10,
                              std::size_t n_out = 201);
CroccoSolution solve_shooting(const CroccoProblem& prob, double tol,
                              std::span<const double> u_nodes);

// Second-order finite differences on the graded mesh u_i = U (1 - (1 - i/(n-1))^2)
// with a one-sided Neumann row at the wall and tau = 0 at the edge; damped
// Newton from a parabolic guess until the scaled residual max-norm <= tol.
CroccoSolution solve_fd_newton(const CroccoProblem& prob, std::size_t n = 2001,
                               double tol = 1e-12);

// The graded mesh used by solve_fd_newton.
std::vector<double> graded_grid(double U, std::size_t n);

struct SimilarityProfile {
  std::vector<double> z;  // strip variable, z[0] == 0
  std::vector<double> u;  // u_s(z), increasing towards U
  std::vector<double> f;  // f(z) = int_0^z u_s dz'
};

// Inverts du_s/dz = sigma^(6/25) tau(u_s) from u_s(0) = 0 by trapezoid
// quadrature of dz = sigma^(-6/25) / tau du on the solution grid (the edge
// node, where tau = 0 and z is infinite, is dropped).
SimilarityProfile reconstruct_f(const CroccoSolution& sol, const CroccoProblem& prob);

// u,tau table.
void write_csv(std::ostream& os, const CroccoSolution& sol);
// {"problem": {...}, "tau_wall": .., "meta": {...}, "u": [...], "tau": [...]}
std::string to_json(const CroccoSolution& sol, const CroccoProblem& prob);

}  // namespace strato::crocco
