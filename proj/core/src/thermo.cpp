#include "strato/thermo.hpp"

#include <cmath>
#include <string>

#include "strato/errors.hpp"

namespace strato::thermo {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvariantError(what);
}

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

void validate(const GasProperties& gas) {
  require(finite_all({gas.c_p, gas.R_hat, gas.b, gas.omega, gas.mu_h, gas.T_h, gas.Pr}),
          "gas: non-finite property");
  require(gas.c_p > 0.0, "gas: c_p must be positive");
  require(gas.R_hat > 0.0, "gas: R_hat must be positive");
  require(gas.b > 1.0, "gas: polytropic exponent b must exceed 1");
  require(gas.omega > 0.0 && gas.omega < 1.0, "gas: omega must lie in (0, 1)");
  require(gas.mu_h > 0.0, "gas: mu_h must be positive");
  require(gas.T_h > 0.0, "gas: T_h must be positive");
  require(gas.Pr == 1.0, "gas: only Pr = 1 is supported");
  if (gas.molar) {
    const auto& m = *gas.molar;
    require(m.M > 0.0 && m.R_star > 0.0, "gas: molar metadata needs M, R* > 0");
    require(std::abs(gas.R_hat - m.R_star / m.M) <= 1e-12 * gas.R_hat,
            "gas: R_hat must equal R*/M");
  }
}

GasProfile paper_atmosphere() {
  GasProperties dry;
  dry.c_p = 1004.0;
  dry.R_hat = 287.0;
  dry.b = 1.405;
  dry.omega = kPowerLawExponent;
  dry.mu_h = 1.789e-5;
  dry.T_h = 288.0;
  dry.Pr = 1.0;

  GasProperties vapor = dry;
  vapor.c_p = 1875.0;
  vapor.R_hat = 461.50;

  return {"paper-atmosphere", dry, vapor};
}

GasProperties mix_gases(const GasProperties& dry, const GasProperties& vapor,
                        const MoistureSpec& m) {
  if (!(m.q >= 0.0 && m.q <= 1.0)) {
    throw DomainError("mix_gases: specific humidity must lie in [0, 1]");
  }
  validate(dry);
  validate(vapor);
  GasProperties mixed = dry;
  mixed.c_p = (1.0 - m.q) * dry.c_p + m.q * vapor.c_p;
  mixed.R_hat = (1.0 - m.q) * dry.R_hat + m.q * vapor.R_hat;
  // Molar metadata describes a pure gas; it no longer applies to the mixture.
  if (m.q != 0.0) mixed.molar.reset();
  return mixed;
}

FreeStream::FreeStream(const FreeStreamInputs& in, const GasProperties& gas) {
  validate(gas);
  require(finite_all({in.U, in.T0, in.p0, in.L, in.h, in.g, in.beta}),
          "free stream: non-finite input");
  require(in.T0 > 0.0, "free stream: T0 must be positive");
  require(in.p0 > 0.0, "free stream: p0 must be positive");
  require(in.h > 0.0 && in.L > in.h, "free stream: need L > h > 0");
  // The upper boundary carries (-U, 0); every closure depends on U^2 only.
  U_ = std::abs(in.U);
  T0_ = in.T0;
  p0_ = in.p0;
  L_ = in.L;
  h_ = in.h;
  g_ = in.g;
  beta_ = in.beta;
  i0_ = gas.c_p * in.T0;
  sigma0_ = 1.0 - U_ * U_ / (2.0 * i0_);
  if (!(sigma0_ > 0.0)) {
    throw DomainError("free stream: U^2 must be below 2 c_p T0 (subsonic model)");
  }
}

FreeStream FreeStream::from_free_stream_temperature(FreeStreamInputs in,
                                                    const GasProperties& gas) {
  validate(gas);
  in.T0 = gas.T_h + 1.0 - in.U * in.U / (2.0 * gas.c_p);
  return FreeStream(in, gas);
}

double total_energy(const FreeStream& fs, const GasProperties& gas) {
  return gas.c_p * gas.T_h + 0.5 * fs.U() * fs.U();
}

NormalizationMode parse_mode(const std::string& s) {
  if (s == "normalized") return NormalizationMode::kNormalized;
  if (s == "paper-raw") return NormalizationMode::kPaperRaw;
  throw std::invalid_argument("unknown normalization mode '" + s + "'");
}

std::string to_string(NormalizationMode mode) {
  return mode == NormalizationMode::kNormalized ? "normalized" : "paper-raw";
}

double polytropic_ratio(double b) { return b / (b - 1.0); }

double sigma_of_u(double u, const FreeStream& fs) {
  const double sigma = 1.0 - u * u / (2.0 * fs.i0());
  if (!(sigma > 0.0)) {
    throw DomainError("sigma_of_u: u^2 >= 2 i0, outside the subsonic model");
  }
  return sigma;
}

double crocco_temperature(double u, const FreeStream& fs, const GasProperties& gas) {
  validate(gas);
  return fs.T0() * sigma_of_u(u, fs);
}

double viscosity_power_law(double T, const GasProperties& gas) {
  if (!(T > 0.0)) throw DomainError("viscosity_power_law: T must be positive");
  validate(gas);
  return gas.mu_h * std::pow(T / gas.T_h, gas.omega);
}

double thermal_conductivity(double mu, const GasProperties& gas) {
  if (!(mu >= 0.0)) throw DomainError("thermal_conductivity: mu must be nonnegative");
  validate(gas);
  return gas.c_p * mu / gas.Pr;
}

DerivedConstants derived_constants(const FreeStream& fs, const GasProperties& gas,
                                   NormalizationMode mode) {
  validate(gas);
  const double k = polytropic_ratio(gas.b);
  const double t_power = mode == NormalizationMode::kPaperRaw ? fs.T0() : fs.T0() / gas.T_h;

  DerivedConstants dc;
  dc.b = gas.b;
  dc.mode = mode;
  dc.c1 = fs.p0() * std::pow(t_power, 2.0 * k);
  dc.c2 = dc.c1 / (gas.R_hat * fs.T0());
  dc.c3 = gas.mu_h * std::pow(gas.T_h, -gas.omega) * std::pow(fs.T0(), gas.omega);
  dc.K_detau = 0.5 * dc.c1 / (dc.c2 * dc.c3) * std::pow(fs.sigma0(), 1.0 - k);
  return dc;
}

double pressure_estimate(const DerivedConstants& dc, const FreeStream& fs) {
  return dc.c1 * std::pow(fs.sigma0(), polytropic_ratio(dc.b));
}

double density_of_u(double u, const DerivedConstants& dc, const FreeStream& fs) {
  return dc.c2 * std::pow(fs.sigma0(), polytropic_ratio(dc.b)) / sigma_of_u(u, fs);
}

}  // namespace strato::thermo
