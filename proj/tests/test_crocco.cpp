#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "strato/crocco.hpp"
#include "strato/errors.hpp"

using namespace strato;
using namespace strato::crocco;
using doctest::Approx;

namespace {

const double kUnitWall = static_cast<double>(oracle::crocco_unit_wall());

// Max-norm of tau tau'' + K u sigma^(-6/25) over interior nodes, with the
// nonuniform three-point second derivative, scaled by K U.
double ode_residual(const CroccoSolution& sol, const CroccoProblem& prob, std::size_t stop) {
  double worst = 0.0;
  const auto& u = sol.u_grid;
  const auto& t = sol.tau;
  for (std::size_t i = 1; i + 1 < stop; ++i) {
    const double hm = u[i] - u[i - 1], hp = u[i + 1] - u[i];
    const double d2 = 2.0 * (hm * t[i + 1] - (hm + hp) * t[i] + hp * t[i - 1]) / (hm * hp * (hm + hp));
    worst = std::max(worst, std::abs(t[i] * d2 - rhs(u[i], prob)) / (prob.K * prob.U));
  }
  return worst;
}

}  // namespace

TEST_CASE("Blasius oracle") {
  CHECK(static_cast<double>(oracle::blasius_fpp0()) == Approx(0.332057336).epsilon(1e-8));
  CHECK(kUnitWall == Approx(0.46960).epsilon(1e-4));
}

TEST_CASE("rhs") {
  const auto inc = CroccoProblem::incompressible(1.0, 1.0);
  CHECK(rhs(0.0, inc) == 0.0);
  CHECK(rhs(0.5, inc) == -0.5);
  const CroccoProblem comp{1.0, 1.0, 1.0};
  CHECK(rhs(1.0, comp) == Approx(-std::pow(0.5, -0.24)).epsilon(1e-15));
  CHECK(rhs(1.0, comp) == Approx(-1.18102).epsilon(5e-5));
  CHECK_THROWS_AS(rhs(1.5, inc), DomainError);
  CHECK_THROWS_AS(rhs(-0.1, inc), DomainError);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(CroccoProblem::incompressible(-1.0, 1.0)), InvariantError);
  CHECK_THROWS_AS(validate(CroccoProblem::incompressible(1.0, 0.0)), InvariantError);
  CHECK_THROWS_AS(validate(CroccoProblem{1.0, 0.4, 1.0}), InvariantError);
}

TEST_CASE("shooting: incompressible unit problem") {
  const auto prob = CroccoProblem::incompressible(1.0, 1.0);
  const auto sol = solve_shooting(prob, 1e-10);
  CHECK(sol.tau_wall == Approx(kUnitWall).epsilon(1e-8));
  CHECK(std::abs(sol.tau_wall - 0.46960) <= 1e-4);
  CHECK(sol.u_grid.front() == 0.0);
  CHECK(sol.u_grid.back() == 1.0);
  CHECK(std::abs(sol.tau.back()) <= 1e-10 * sol.tau_wall);
  CHECK(sol.meta.method == "shooting");
  CHECK(sol.meta.residual_norm <= 1e-10);
  for (std::size_t i = 0; i + 1 < sol.tau.size(); ++i) {
    CHECK(sol.tau[i] > 0.0);
    CHECK(sol.tau[i + 1] <= sol.tau[i]);  // tau' <= 0 since tau'' < 0 and tau'(0) = 0
  }
}

TEST_CASE("shooting: caller nodes") {
  const auto prob = CroccoProblem::incompressible(2.0, 3.0);
  const std::vector<double> nodes = {0.0, 0.7, 1.9, 2.5, 3.0};
  const auto sol = solve_shooting(prob, 1e-10, nodes);
  CHECK(sol.u_grid == nodes);
  CHECK(sol.tau.size() == nodes.size());
  const std::vector<double> bad = {0.0, 2.0, 1.0, 3.0};
  CHECK_THROWS_AS(solve_shooting(prob, 1e-10, bad), InvariantError);
}

TEST_CASE("degenerate K = 0") {
  const auto sol = solve_shooting(CroccoProblem::incompressible(0.0, 1.0));
  CHECK(sol.meta.degenerate);
  CHECK(sol.tau_wall == 0.0);
  for (double t : sol.tau) CHECK(t == 0.0);
  const auto fd = solve_fd_newton(CroccoProblem::incompressible(0.0, 1.0), 101);
  CHECK(fd.meta.degenerate);
}

TEST_CASE("finite differences: unit problem and second-order convergence") {
  const auto prob = CroccoProblem::incompressible(1.0, 1.0);
  std::vector<double> err;
  for (std::size_t n : {251u, 501u, 1001u, 2001u}) {
    const auto sol = solve_fd_newton(prob, n);
    CHECK(sol.meta.method == "fd-newton");
    // Target 1e-12, floored at the round-off level of the n^2-scaled stencil.
    const double nn = static_cast<double>(n) / 250.0;
    CHECK(sol.meta.residual_norm <= 1e-11 * nn * nn);
    err.push_back(std::abs(sol.tau_wall - kUnitWall));
  }
  CHECK(std::abs(err.back()) <= 1e-4);
  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    CHECK(err[k] / err[k + 1] > 3.6);
    CHECK(err[k] / err[k + 1] < 4.4);
  }
}

TEST_CASE("finite differences: discrete ODE residual") {
  const CroccoProblem prob{1.5, 3.0, 2.0};
  const auto sol = solve_fd_newton(prob, 801, 1e-12);

  CHECK(ode_residual(sol, prob, sol.u_grid.size()) <= 10 * std::max(1e-12, sol.meta.residual_norm));
}

TEST_CASE("solvers agree on compressible problems") {
  for (double i0 : {1.0, 5.0, 50.0}) {
    const CroccoProblem prob{1.0, i0, 1.0};
    const auto s = solve_shooting(prob, 1e-12);
    const auto f = solve_fd_newton(prob, 8001);
    CHECK(f.tau_wall == Approx(s.tau_wall).epsilon(1e-6));
  }
  // sigma < 1 makes the forcing stronger, so the wall shear grows.
  CHECK(solve_shooting(CroccoProblem{1.0, 1.0, 1.0}).tau_wall > kUnitWall);
}

TEST_CASE("scaling law") {
  const double ref = solve_shooting(CroccoProblem::incompressible(1.0, 1.0), 1e-12).tau_wall;
  for (double K : {0.3, 7.0, 1e6})
    for (double U : {0.2, 15.0}) {
      const auto prob = CroccoProblem::incompressible(K, U);
      CHECK(solve_shooting(prob, 1e-12).tau_wall / prob.tau_scale() == Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("reconstruct_f") {
  const auto prob = CroccoProblem::incompressible(1.0, 1.0);
  const auto sol = solve_fd_newton(prob, 2001);
  const auto prof = reconstruct_f(sol, prob);
  REQUIRE(prof.z.size() == sol.u_grid.size() - 1);
  CHECK(prof.z.front() == 0.0);
  CHECK(prof.f.front() == 0.0);
  for (std::size_t i = 1; i < prof.z.size(); ++i) {
    CHECK(prof.z[i] > prof.z[i - 1]);
    CHECK(prof.u[i] > prof.u[i - 1]);
    CHECK(prof.f[i] >= prof.f[i - 1]);
  }
  // f'' = sigma^(6/25) tau / ... is nonnegative and vanishes at the edge.
  for (double t : sol.tau) CHECK(t >= 0.0);
  CHECK(sol.tau.back() == 0.0);
  // For K = 1/2 the strip profile is Blasius with f''(0) = 0.332057.
  const auto half = CroccoProblem::incompressible(0.5, 1.0);
  const auto hs = solve_fd_newton(half, 4001);
  CHECK(hs.tau_wall == Approx(static_cast<double>(oracle::blasius_fpp0())).epsilon(1e-5));
}

TEST_CASE("exports") {
  const auto prob = CroccoProblem::incompressible(1.0, 1.0);
  const auto sol = solve_shooting(prob, 1e-10, 11);
  std::ostringstream os;
  write_csv(os, sol);
  CHECK(os.str().rfind("u,tau\n", 0) == 0);
  const auto j = nlohmann::json::parse(to_json(sol, prob));
  CHECK(j["u"].size() == 11);
  CHECK(j["tau"][0].get<double>() == sol.tau_wall);
  CHECK(j["meta"]["method"] == "shooting");
}
