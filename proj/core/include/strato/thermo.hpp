#pragma once

// Thermodynamic closures of the compressible boundary layer: ideal gas with
// Pr = 1, polytropic atmosphere p V^b = const, power-law viscosity, and the
// Crocco relation T(u) = T0 (1 - u^2 / (2 c_p T0)).

#include <optional>
#include <string>

namespace strato::thermo {

inline constexpr double kPowerLawExponent = 19.0 / 25.0;
inline constexpr double kStandardGravity = 9.80665;

// Ideal-gas molar bookkeeping for p V = n R* T. Optional; when present the
// specific constant must satisfy R_hat = R_star / M.
struct MolarMetadata {
  double n = 0.0;       // mol
  double R_star = 0.0;  // J K^-1 mol^-1
  double V = 0.0;       // m^3
  double M = 0.0;       // kg mol^-1
};

struct GasProperties {
  double c_p = 0.0;    // J K^-1 kg^-1
  double R_hat = 0.0;  // J K^-1 kg^-1
  double b = 1.405;    // polytropic exponent
  double omega = kPowerLawExponent;
  double mu_h = 0.0;   // Pa s, free-stream viscosity
  double T_h = 0.0;    // K, free-stream temperature
  double Pr = 1.0;
  std::optional<MolarMetadata> molar;
};

// Throws InvariantError unless c_p, R_hat, mu_h, T_h > 0, b > 1,
// 0 < omega < 1, Pr == 1 and the molar metadata (if any) is consistent.
void validate(const GasProperties& gas);

struct MoistureSpec {
  double q = 0.0;  // specific humidity, kg kg^-1
};

// Dry air and water vapour constants shipped together as a named profile.
struct GasProfile {
  std::string name;
  GasProperties dry;
  GasProperties vapor;
};

// R_d = 287, R_v = 461.50, c_pd = 1004, c_pv = 1875, b = 1.405.
GasProfile paper_atmosphere();

// Mass-weighted mixture; b, omega, mu_h, T_h and Pr come from `dry`.
GasProperties mix_gases(const GasProperties& dry, const GasProperties& vapor,
                        const MoistureSpec& m);

struct FreeStreamInputs {
  double U = 0.0;   // m s^-1 (sign ignored, only |U| enters the formulas)
  double T0 = 0.0;  // K, surface temperature
  double p0 = 0.0;  // Pa, surface pressure
  double L = 0.0;   // m
  double h = 0.0;   // m
  double g = kStandardGravity;
  double beta = 0.0065;  // K m^-1, lapse rate in T(x, y) = T0 - beta y
};

class FreeStream {
 public:
  // Derives i0 = c_p T0 and sigma0 = 1 - U^2 / (2 i0) with c_p from `gas`.
  // Throws DomainError when U^2 >= 2 i0 and InvariantError on bad inputs.
  FreeStream(const FreeStreamInputs& in, const GasProperties& gas);

  // Literal T0 = T_h + 1 - U^2 / (2 c_p); the T0 field of `in` is ignored.
  static FreeStream from_free_stream_temperature(FreeStreamInputs in,
                                                 const GasProperties& gas);

  double U() const noexcept { return U_; }
  double T0() const noexcept { return T0_; }
  double p0() const noexcept { return p0_; }
  double L() const noexcept { return L_; }
  double h() const noexcept { return h_; }
  double g() const noexcept { return g_; }
  double beta() const noexcept { return beta_; }
  double i0() const noexcept { return i0_; }
  double sigma0() const noexcept { return sigma0_; }

 private:
  double U_, T0_, p0_, L_, h_, g_, beta_, i0_, sigma0_;
};

// Read-only total energy per unit mass at the free stream, c_p T_h + U^2 / 2.
double total_energy(const FreeStream& fs, const GasProperties& gas);

enum class NormalizationMode { kNormalized, kPaperRaw };

NormalizationMode parse_mode(const std::string& s);
std::string to_string(NormalizationMode mode);

struct DerivedConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  // (1/2) c1 c2^-1 c3^-1 sigma0^(1 - b/(b-1)), the Crocco ODE coefficient.
  double K_detau = 0.0;
  double b = 1.405;
  NormalizationMode mode = NormalizationMode::kNormalized;
};

// b / (b - 1)
double polytropic_ratio(double b);

// 1 - u^2 / (2 i0). Throws DomainError when u^2 >= 2 i0.
double sigma_of_u(double u, const FreeStream& fs);

double crocco_temperature(double u, const FreeStream& fs, const GasProperties& gas);

// mu_h (T / T_h)^omega
double viscosity_power_law(double T, const GasProperties& gas);

// kappa = c_p mu (Pr = 1)
double thermal_conductivity(double mu, const GasProperties& gas);

// paper-raw: c1 = p0 T0^(2b/(b-1)); normalized: c1 = p0 (T0/T_h)^(2b/(b-1)).
// Both: c2 = c1 / (R_hat T0), c3 = mu_h T_h^-omega T0^omega.
DerivedConstants derived_constants(const FreeStream& fs, const GasProperties& gas,
                                   NormalizationMode mode = NormalizationMode::kNormalized);

// c1 sigma0^(b/(b-1)), uniform over the layer.
double pressure_estimate(const DerivedConstants& dc, const FreeStream& fs);

// c2 sigma0^(b/(b-1)) / sigma(u)
double density_of_u(double u, const DerivedConstants& dc, const FreeStream& fs);

}  // namespace strato::thermo
