// strato-shear: command-line front end for the boundary-layer shear library.
//
// Exit codes: 0 success, 1 fatal input error, 2 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "strato/batch.hpp"
#include "strato/crocco.hpp"
#include "strato/diagnostics.hpp"
#include "strato/errors.hpp"
#include "strato/limit.hpp"
#include "strato/thermo.hpp"

namespace {

using namespace strato;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

struct Common {
  std::optional<std::string> gas;
  std::string mode = "normalized";
  std::string format = "csv";
  std::string out;
};

struct Scenario {
  double p0 = 101325.0;
  double T0 = 0.0;
  double U = 0.0;
  double h = 0.0;
  double L = 0.0;  // 0: 100 h
  double q = 0.0;
  bool t0_from_th = false;
};

void add_scenario(CLI::App* sub, Scenario& sc) {
  sub->add_option("--p0", sc.p0, "surface pressure, Pa")->capture_default_str();
  sub->add_option("--T0", sc.T0, "surface temperature, K");
  sub->add_option("--U", sc.U, "free-stream speed, m/s");
  sub->add_option("--h", sc.h, "layer thickness, m");
  sub->add_option("--L", sc.L, "layer length, m (default 100 h)");
  sub->add_flag("--t0-from-th", sc.t0_from_th, "derive T0 = T_h + 1 - U^2/(2 c_p)");
}

thermo::FreeStream make_free_stream(const Scenario& sc, const thermo::GasProperties& gas) {
  thermo::FreeStreamInputs in;
  in.U = sc.U;
  in.T0 = sc.T0;
  in.p0 = sc.p0;
  in.h = sc.h;
  in.L = sc.L > 0.0 ? sc.L : 100.0 * sc.h;
  if (sc.t0_from_th) return thermo::FreeStream::from_free_stream_temperature(in, gas);
  if (!(sc.T0 > 0.0)) throw batch::InputError("--T0 is required (or pass --t0-from-th)");
  return thermo::FreeStream(in, gas);
}

// Writes to --out (buffered, so a failure leaves no partial file) or stdout.
void emit(const Common& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw batch::InputError("cannot write '" + c.out + "'");
  f << text;
  if (!f) throw batch::InputError("write failed for '" + c.out + "'");
}

std::map<std::string, std::string> config_echo(const CLI::App& app) {
  std::map<std::string, std::string> echo;
  auto collect = [&](const CLI::App& a, const std::string& prefix) {
    for (const auto* opt : a.get_options()) {
      if (opt->count() == 0 || opt->get_name() == "--help") continue;
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : " ") + r;
      echo[prefix + opt->get_name(false, true)] = joined;
    }
  };
  collect(app, "");
  for (const auto* sub : app.get_subcommands()) collect(*sub, sub->get_name() + ".");
  return echo;
}

std::string fmt(double v) { return batch::format15(v); }

const char* kBatchFooter =
    "CSV columns, in order: station_id, sigma0, tau_star_dry, tau_star_moist,\n"
    "rho_estimate, pressure_estimate, [tau_wall with --solve], [stress_dry with\n"
    "--stress], status. Input header: station_id,p0,T0,U,h[,L][,q].\n"
    "JSON output is an array of objects with the same keys.";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shear-stress indicators for a compressible atmospheric boundary layer"};
  // -h is taken by the layer thickness.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", batch::version());
  app.set_config("--config", "", "key=value configuration file; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--gas", common.gas,
                 "paper-atmosphere or a key=value profile file "
                 "(default: $STRATO_SHEAR_PROFILE, then paper-atmosphere)");
  app.add_option("--mode", common.mode, "constant normalization")
      ->check(CLI::IsMember({"normalized", "paper-raw"}))
      ->capture_default_str();
  app.add_option("--format", common.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", common.out, "output path (default stdout)");

  // tau ------------------------------------------------------------------
  Scenario tau_sc;
  bool tau_solve = false, tau_stress = false;
  std::string sweep;
  auto* tau = app.add_subcommand("tau", "indicators for a single scenario");
  add_scenario(tau, tau_sc);
  tau->add_option("--q", tau_sc.q, "specific humidity, kg/kg")->capture_default_str();
  tau->add_flag("--solve", tau_solve, "add tau_wall from the Crocco solver");
  tau->add_flag("--stress", tau_stress, "add stress_dry = mu(T0) tau_star_dry");
  tau->add_option("--sweep", sweep, "U=start:stop:count -> U,tau_star table at fixed h, T0, q");
  tau->footer(kBatchFooter);

  // batch ----------------------------------------------------------------
  std::string input;
  std::string manifest_path;
  bool batch_solve = false, batch_stress = false;
  auto* bat = app.add_subcommand("batch", "indicators for every row of a soundings CSV");
  bat->add_option("input", input, "soundings CSV")->required();
  bat->add_flag("--solve", batch_solve, "add tau_wall from the Crocco solver");
  bat->add_flag("--stress", batch_stress, "add stress_dry = mu(T0) tau_star_dry");
  bat->add_option("--manifest", manifest_path, "write the run manifest (JSON) here");
  bat->footer(kBatchFooter);

  // solve-crocco -----------------------------------------------------------
  Scenario cr_sc;
  std::optional<double> cr_K, cr_i0;
  std::string method = "shooting";
  std::size_t n_nodes = 201;
  double tol = 1e-10;
  auto* cro = app.add_subcommand("solve-crocco", "solve tau tau'' = -K u sigma^(-6/25)");
  cro->add_option("--K", cr_K, "explicit coefficient K (skips the scenario constants)");
  cro->add_option("--i0", cr_i0, "explicit i0 = c_p T0 with --K (default: incompressible)");
  add_scenario(cro, cr_sc);
  cro->add_option("--method", method, "solver")
      ->check(CLI::IsMember({"shooting", "fd"}))
      ->capture_default_str();
  cro->add_option("--n", n_nodes, "output nodes (shooting) / mesh nodes (fd)")->capture_default_str();
  cro->add_option("--tol", tol, "solver tolerance")->capture_default_str();

  // transform-check --------------------------------------------------------
  Scenario tc_sc;
  auto* tch = app.add_subcommand("transform-check", "transform identities on manufactured fixtures");
  add_scenario(tch, tc_sc);

  // epsilon-sweep ----------------------------------------------------------
  Scenario ep_sc;
  std::vector<double> eps_values = {1e-1, 1e-2, 1e-3, 1e-4};
  auto* eps = app.add_subcommand("epsilon-sweep", "residual norms of the eps-rescaled equation");
  add_scenario(eps, ep_sc);
  eps->add_option("--eps", eps_values, "eps values")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    const auto profile = batch::resolve_gas_profile(common.gas);
    const auto mode = thermo::parse_mode(common.mode);
    const bool json = common.format == "json";
    std::ostringstream os;

    if (*tau) {
      if (!sweep.empty()) {
        if (!(tau_sc.T0 > 0.0)) throw batch::InputError("--sweep needs --T0");
        const auto spec = batch::parse_sweep(sweep);
        batch::write_sweep_csv(os, batch::sweep_tau_star(spec, tau_sc.h, tau_sc.T0, tau_sc.q, profile));
        emit(common, os.str());
        return kExitOk;
      }
      const auto fs = make_free_stream(tau_sc, profile.dry);
      batch::SoundingRecord r{"scenario", fs.p0(), fs.T0(), fs.U(), fs.h(), fs.L(), tau_sc.q, 1};
      batch::BatchOptions opt;
      opt.mode = mode;
      opt.solve = tau_solve;
      opt.stress = tau_stress;
      const auto rep = batch::run_batch(std::vector<batch::SoundingRecord>{r}, profile, opt);
      if (json) batch::write_json(os, rep); else batch::write_csv(os, rep);
      emit(common, os.str());
      const auto& row = rep.rows.front();
      if (row.status == batch::RowStatus::kOk) return kExitOk;
      std::cerr << "strato-shear: " << row.message << '\n';
      return row.status == batch::RowStatus::kNumericalError ? kExitNumerical : kExitInput;
    }

    if (*bat) {
      const auto parsed = batch::parse_soundings_file(input);
      batch::BatchOptions opt;
      opt.mode = mode;
      opt.solve = batch_solve;
      opt.stress = batch_stress;
      const auto rep = batch::run_batch(parsed, profile, opt);
      if (json) batch::write_json(os, rep); else batch::write_csv(os, rep);
      emit(common, os.str());
      if (!manifest_path.empty()) {
        std::ostringstream ms;
        batch::write_manifest(ms, batch::make_manifest(rep, config_echo(app), profile, opt));
        Common mc = common;
        mc.out = manifest_path;
        emit(mc, ms.str());
      }
      for (const auto& row : rep.rows) {
        if (row.status != batch::RowStatus::kOk) {
          std::cerr << "line " << row.line << " (" << row.station_id << "): "
                    << batch::to_string(row.status) << ": " << row.message << '\n';
        }
      }
      return kExitOk;
    }

    if (*cro) {
      crocco::CroccoProblem prob;
      if (cr_K) {
        prob = crocco::CroccoProblem::incompressible(*cr_K, std::abs(cr_sc.U));
        if (cr_i0) prob.i0 = *cr_i0;
      } else {
        const auto fs = make_free_stream(cr_sc, profile.dry);
        prob = crocco::CroccoProblem::from_scenario(thermo::derived_constants(fs, profile.dry, mode), fs);
      }
      const auto sol = method == "fd" ? crocco::solve_fd_newton(prob, n_nodes, tol)
                                      : crocco::solve_shooting(prob, tol, n_nodes);
      if (json) os << crocco::to_json(sol, prob) << '\n'; else crocco::write_csv(os, sol);
      emit(common, os.str());
      std::cerr << "tau_wall = " << fmt(sol.tau_wall) << " (" << sol.meta.method << ", "
                << sol.meta.iterations << " iterations)\n";
      return kExitOk;
    }

    if (*tch) {
      const auto fs = make_free_stream(tc_sc, profile.dry);
      const auto r = diagnostics::transform_check(fs, profile.dry, mode);
      const bool ok = r.jac_min > 0.0 && r.ell_M_rel_error <= 1e-12 &&
                      r.stream_discrepancy <= 1e-8 * r.stream_norm && r.momentum_order >= 1.9;
      os << "check,value\n"
         << "jacobian_min," << fmt(r.jac_min) << '\n'
         << "ell_M," << fmt(r.ell_M) << '\n'
         << "ell_M_expected," << fmt(r.ell_M_expected) << '\n'
         << "ell_M_rel_error," << fmt(r.ell_M_rel_error) << '\n'
         << "stream_two_path_discrepancy," << fmt(r.stream_discrepancy) << '\n'
         << "stream_norm," << fmt(r.stream_norm) << '\n'
         << "momentum_viscous_d," << fmt(r.momentum_viscous[0]) << '\n'
         << "momentum_viscous_d_half," << fmt(r.momentum_viscous[1]) << '\n'
         << "momentum_convective_d," << fmt(r.momentum_convective[0]) << '\n'
         << "momentum_convective_d_half," << fmt(r.momentum_convective[1]) << '\n'
         << "momentum_order," << fmt(r.momentum_order) << '\n'
         << "all_ok," << (ok ? "true" : "false") << '\n';
      emit(common, os.str());
      return ok ? kExitOk : kExitNumerical;
    }

    if (*eps) {
      const auto fs = make_free_stream(ep_sc, profile.dry);
      const auto r = diagnostics::epsilon_sweep(fs, profile.dry, mode, eps_values);
      os << "eps,lhs_norm,rhs_norm,residual_norm\n";
      for (const auto& row : r.rows) {
        os << fmt(row.eps) << ',' << fmt(row.residual.lhs_norm) << ','
           << fmt(row.residual.rhs_norm) << ',' << fmt(row.residual.residual_norm) << '\n';
      }
      emit(common, os.str());
      std::cerr << "log-log slope of lhs_norm: " << fmt(r.slope)
                << "; limit residual (constant u*): " << fmt(r.limit_residual_constant) << '\n';
      return kExitOk;
    }
  } catch (const batch::InputError& e) {
    std::cerr << "strato-shear: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConvergenceError& e) {
    std::cerr << "strato-shear: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const PrematureSeparationError& e) {
    std::cerr << "strato-shear: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DomainError& e) {
    std::cerr << "strato-shear: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "strato-shear: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "strato-shear: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
