// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "strato/batch.hpp"
#include "strato/crocco.hpp"
#include "strato/diagnostics.hpp"
#include "strato/field.hpp"
#include "strato/limit.hpp"
#include "strato/thermo.hpp"
#include "strato/transform.hpp"

#ifndef STRATO_CLI_PATH
#define STRATO_CLI_PATH ""
#endif
#ifndef STRATO_TEST_DATA_DIR
#define STRATO_TEST_DATA_DIR "tests/data"
#endif

using namespace strato;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

thermo::FreeStream stream(double U, double T0, double h, double L = 0.0, double p0 = 101325.0,
                          const thermo::GasProperties& g = thermo::paper_atmosphere().dry) {
  thermo::FreeStreamInputs in;
  in.U = U;
  in.T0 = T0;
  in.p0 = p0;
  in.h = h;
  in.L = L > 0.0 ? L : 100.0 * h;
  return thermo::FreeStream(in, g);
}

// 1. Closed-form tau* for dry and moist air.
Outcome closed_form() {
  Outcome o;
  const auto gas = thermo::paper_atmosphere();
  const auto moist = thermo::mix_gases(gas.dry, gas.vapor, {0.01});

  double best = std::numeric_limits<double>::infinity();
  double dry = 0.0, wet = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const auto t0 = Clock::now();
    dry = limit::tau_star(10.0, 1000.0, gas.dry, 300.0);
    wet = limit::tau_star(10.0, 1000.0, moist, 300.0);
    best = std::min(best, seconds_since(t0));
  }
  const double ref_dry = static_cast<double>(oracle::tau_star(10, 1000, 1004, 300));
  const double ref_wet = static_cast<double>(oracle::tau_star(10, 1000, 0.99L * 1004 + 0.01L * 1875, 300));
  const double e_dry = rel(dry, ref_dry);
  const double e_wet = rel(wet, ref_wet);
  const bool digits = std::abs(dry - 9.99874e-3) <= 0.5e-8 && std::abs(wet - 9.99875e-3) <= 0.5e-8;
  o.pass = e_dry <= 1e-9 && e_wet <= 1e-9 && wet > dry && digits && best < 1e-3;
  o.detail = "dry=" + batch::format15(dry) + " moist=" + batch::format15(wet) +
             " rel_err=" + sci(std::max(e_dry, e_wet)) + " t=" + sci(best) + "s";
  return o;
}

// 2. Crocco solvers against the Blasius oracle and each other.
Outcome crocco_validation() {
  Outcome o;
  const auto t0 = Clock::now();
  const double oracle_wall = static_cast<double>(oracle::crocco_unit_wall());
  const auto unit = crocco::CroccoProblem::incompressible(1.0, 1.0);
  const double shoot = crocco::solve_shooting(unit, 1e-12).tau_wall;
  const double fd = crocco::solve_fd_newton(unit, 4001).tau_wall;

  double worst = 0.0;
  int n = 0;
  for (double i0 : {std::numeric_limits<double>::infinity(), 50.0, 5.0}) {
    for (auto [K, U] : {std::pair{1.0, 1.0}, {0.5, 2.0}, {3.0, 0.7}, {10.0, 1.5}}) {
      const crocco::CroccoProblem p{K, i0, U};
      const double a = crocco::solve_shooting(p, 1e-12).tau_wall;
      const double b = crocco::solve_fd_newton(p, 4001).tau_wall;
      worst = std::max(worst, rel(b, a));
      ++n;
    }
  }
  const double t = seconds_since(t0);
  o.pass = std::abs(shoot - 0.46960) <= 1e-4 && std::abs(fd - 0.46960) <= 1e-4 &&
           rel(shoot, oracle_wall) <= 1e-6 && n == 12 && worst <= 1e-6 && t < 5.0;
  o.detail = "shoot=" + batch::format15(shoot) + " oracle=" + batch::format15(oracle_wall) +
             " fd=" + batch::format15(fd) + " max_rel(shoot,fd;12)=" + sci(worst) + " t=" + sci(t) + "s";
  return o;
}

// 3. tau_wall / sqrt(K U^3) is constant.
Outcome scaling_law() {
  Outcome o;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double K : {0.5, 1.0, 2.0, 4.0})
    for (double U : {0.5, 1.0, 2.0}) {
      const auto p = crocco::CroccoProblem::incompressible(K, U);
      const double r = crocco::solve_shooting(p, 1e-12).tau_wall / std::sqrt(K * U * U * U);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  const double spread = (hi - lo) / lo;
  o.pass = spread <= 1e-8;
  o.detail = "ratio=" + batch::format15(lo) + " spread=" + sci(spread);
  return o;
}

// 4. Transform identities.
Outcome transform_identities() {
  Outcome o;
  const auto gas = thermo::paper_atmosphere().dry;
  auto gen = oracle::rng(4);

  bool jac_ok = true;
  double ell_err = 0.0;
  for (int n = 0; n < 30; ++n) {
    const auto fs = stream(oracle::uniform(gen, 0.0, 120.0), oracle::uniform(gen, 230.0, 315.0),
                           oracle::uniform(gen, 100.0, 4000.0), 0.0, oracle::uniform(gen, 6e4, 1.05e5));
    for (auto mode : {thermo::NormalizationMode::kNormalized, thermo::NormalizationMode::kPaperRaw}) {
      const auto dc = thermo::derived_constants(fs, gas, mode);
      const std::size_t nx = 33, ny = 17;
      const auto rho = ScalarField::sample(nx, ny, fs.L(), fs.h(), [&](double, double y) {
        return thermo::density_of_u(fs.U() * y / fs.h(), dc, fs);
      });
      const double pm = dc.c1 * fs.sigma0();
      const auto p = ScalarField::sample(nx, ny, fs.L(), fs.h(), [&](double, double) { return pm; });
      const auto map = transform::build_map(p, rho, dc, fs);
      jac_ok = jac_ok && map.jac.min_value() > 0.0;
      ell_err = std::max(ell_err, rel(transform::ell_coordinate(p, fs.L(), 0.0), pm * fs.L()));
      ell_err = std::max(ell_err, rel(map.ell(nx - 1, ny / 2), pm * fs.L()));
    }
  }

  // Quadrature: ell of p = 1 + sin(x) over [0, 10] and s of rho = exp(-y).
  std::vector<double> eq, es;
  for (std::size_t n : {17u, 33u, 65u, 129u}) {
    const auto p = ScalarField::sample(n, 5, 10.0, 1.0, [](double x, double) { return 1.0 + std::sin(x); });
    eq.push_back(std::abs(transform::ell_coordinate(p, 10.0, 0.5) - (11.0 - std::cos(10.0))));
    const auto r = ScalarField::sample(5, n, 10.0, 1.0, [](double, double y) { return std::exp(-y); });
    es.push_back(std::abs(transform::s_coordinate(r, 2.5, 1.0) - (1.0 - std::exp(-1.0))));
  }
  // Momentum identity with a compressible sigma.
  transform::SmoothProfile prof{[](double z) { return z - 1.0 + std::exp(-z); },
                                [](double z) { return 1.0 - std::exp(-z); },
                                [](double z) { return std::exp(-z); },
                                [](double z) { return -std::exp(-z); }};
  const std::vector<double> z = {0.25, 0.5, 1.0, 2.0, 3.0};
  std::vector<double> mc, mv;
  for (double d : {4e-2, 2e-2, 1e-2, 5e-3}) {
    const auto r = transform::momentum_identity_check(prof, 1.3, z, d, 3.0);
    mc.push_back(r.convective);
    mv.push_back(r.viscous);
  }
  double rmin = 1e300, rmax = 0.0;
  for (const auto* e : {&eq, &es, &mc, &mv})
    for (std::size_t k = 0; k + 1 < e->size(); ++k) {
      const double ratio = (*e)[k] / (*e)[k + 1];
      rmin = std::min(rmin, ratio);
      rmax = std::max(rmax, ratio);
    }
  const double order_min = std::log2(rmin);
  o.pass = jac_ok && ell_err <= 1e-12 && rmin >= 3.6 && rmax <= 4.4 && order_min >= 1.9;
  o.detail = std::string("jac>0=") + (jac_ok ? "yes" : "no") + " ell_M_rel_err=" + sci(ell_err) +
             " richardson=[" + sci(rmin) + "," + sci(rmax) + "] order>=" + sci(order_min);
  return o;
}

// 5. Stream function two-path discrepancy on 257 x 65.
Outcome stream_function() {
  Outcome o;
  auto gen = oracle::rng(5);
  double worst = 0.0;
  for (int n = 0; n < 10; ++n) {
    const double L = oracle::uniform(gen, 1.0, 1e4);
    const double h = L * oracle::uniform(gen, 1e-3, 0.5);
    // psi = sum a_mn (x/L)^m (y/h)^n, m, n <= 2.
    double a[3][3];
    for (auto& row : a)
      for (double& v : row) v = oracle::uniform(gen, -2.0, 2.0);
    auto psi = [&](double x, double y) {
      double s = 0.0;
      for (int m = 0; m < 3; ++m)
        for (int k = 0; k < 3; ++k) s += a[m][k] * std::pow(x / L, m) * std::pow(y / h, k);
      return s;
    };
    auto psi_x = [&](double x, double y) {
      double s = 0.0;
      for (int m = 1; m < 3; ++m)
        for (int k = 0; k < 3; ++k) s += a[m][k] * m * std::pow(x / L, m - 1) / L * std::pow(y / h, k);
      return s;
    };
    auto psi_y = [&](double x, double y) {
      double s = 0.0;
      for (int m = 0; m < 3; ++m)
        for (int k = 1; k < 3; ++k) s += a[m][k] * std::pow(x / L, m) * k * std::pow(y / h, k - 1) / h;
      return s;
    };
    const auto ru = ScalarField::sample(257, 65, L, h, psi_y);
    const auto rv = ScalarField::sample(257, 65, L, h, [&](double x, double y) { return -psi_x(x, y); });
    const auto exact = ScalarField::sample(257, 65, L, h, [&](double x, double y) { return psi(x, y) - psi(0, 0); });
    worst = std::max(worst, transform::stream_function_path_discrepancy(ru, rv) / exact.max_abs());
  }
  o.pass = worst <= 1e-8;
  o.detail = "max discrepancy/|field| = " + sci(worst) + " (10 fields)";
  return o;
}

// 6. eps-scaling and the limit equation.
Outcome epsilon_scaling() {
  Outcome o;
  const auto gas = thermo::paper_atmosphere().dry;
  double slope_min = 1e300, slope_max = -1e300, limit_res = 0.0;
  for (auto [U, T0, h] : {std::tuple{10.0, 300.0, 1000.0}, {35.0, 260.0, 500.0}, {3.0, 285.0, 2500.0}}) {
    const auto fs = stream(U, T0, h);
    const auto sw = diagnostics::epsilon_sweep(fs, gas, thermo::NormalizationMode::kNormalized,
                                               {1e-1, 1e-2, 1e-3, 1e-4});
    slope_min = std::min(slope_min, sw.slope);
    slope_max = std::max(slope_max, sw.slope);
    for (double c : {0.0, 0.5 * U, U}) {
      const auto f = ScalarField::sample(33, 17, fs.L(), fs.h(), [c](double, double) { return c; });
      limit_res = std::max(limit_res, limit::limit_equation_residual(f, fs));
    }
  }
  o.pass = slope_min >= 0.9 && slope_max <= 2.1 &&
           limit_res <= std::numeric_limits<double>::epsilon();
  o.detail = "slopes=[" + sci(slope_min) + "," + sci(slope_max) + "] limit_residual=" + sci(limit_res);
  return o;
}

// 7. density_estimate against density_of_u(U).
Outcome density_consistency() {
  Outcome o;
  auto gen = oracle::rng(7);
  const auto prof = thermo::paper_atmosphere();
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    const double q = oracle::uniform(gen, 0.0, 0.03);
    const auto gas = thermo::mix_gases(prof.dry, prof.vapor, {q});
    const auto fs = stream(oracle::uniform(gen, 0.0, 250.0), oracle::uniform(gen, 200.0, 330.0),
                           oracle::uniform(gen, 50.0, 5000.0), 0.0, oracle::uniform(gen, 3e4, 1.1e5), gas);
    const auto mode = n % 2 ? thermo::NormalizationMode::kPaperRaw : thermo::NormalizationMode::kNormalized;
    const auto dc = thermo::derived_constants(fs, gas, mode);
    worst = std::max(worst, rel(limit::density_estimate(dc, fs, gas), thermo::density_of_u(fs.U(), dc, fs)));
  }
  o.pass = worst <= 1e-12;
  o.detail = "max rel diff over 50 scenarios = " + sci(worst);
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 8. Byte-identical CLI batch output.
Outcome cli_determinism() {
  Outcome o;
  const std::string cli = STRATO_CLI_PATH;
  if (cli.empty()) {
    o.pass = false;
    o.detail = "CLI not built";
    return o;
  }
  const std::string fixture = std::string(STRATO_TEST_DATA_DIR) + "/soundings_20.csv";
  const std::string base = "acceptance_cli_run";
  bool same = true;
  int rc_all = 0;
  for (const char* fmt : {"csv", "json"}) {
    std::vector<std::string> outs;
    for (int run = 0; run < 2; ++run) {
      const std::string out = base + std::to_string(run) + "." + fmt;
      const std::string cmd = "\"" + cli + "\" --format " + fmt + " --out " + out + " batch --solve --stress \"" +
                              fixture + "\"";
      rc_all |= std::system(cmd.c_str());
      outs.push_back(slurp(out));
      std::remove(out.c_str());
    }
    same = same && !outs[0].empty() && outs[0] == outs[1];
  }
  o.pass = same && rc_all == 0;
  o.detail = std::string("csv+json byte-identical=") + (same ? "yes" : "no") +
             " exit=" + std::to_string(rc_all) + " (suite time bounded by ctest TIMEOUT 60)";
  return o;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form tau* (dry, moist)", closed_form},
      {"Crocco solvers vs Blasius oracle", crocco_validation},
      {"scaling law tau_wall/sqrt(K U^3)", scaling_law},
      {"transform identities", transform_identities},
      {"stream function two paths", stream_function},
      {"eps-scaling and limit equation", epsilon_scaling},
      {"density cross-check", density_consistency},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << "criterion " << k + 1 << " [" << criteria[k].first << "]: " << (o.pass ? "PASS" : "FAIL")
              << " -- " << o.detail << '\n';
  }
  std::cout << "acceptance: " << criteria.size() - failed << "/" << criteria.size() << " passed in "
            << sci(seconds_since(t0)) << " s\n";
  return failed == 0 ? 0 : 1;
}
