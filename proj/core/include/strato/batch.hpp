#pragma once

// Sounding batch pipeline: parse station records, evaluate the closed-form
// shear indicators per record (optionally with a Crocco solve), and emit
// CSV / JSON tables plus a run manifest.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strato/thermo.hpp"

namespace strato::batch {

// Unrecoverable input problem (missing column, unreadable file, bad flag).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string version();

struct SoundingRecord {
  std::string station_id;
  double p0 = 0.0;  // Pa
  double T0 = 0.0;  // K
  double U = 0.0;   // m s^-1
  double h = 0.0;   // m
  double L = 0.0;   // m, 100 h when the column is absent or empty
  double q = 0.0;   // kg kg^-1
  std::size_t line = 0;  // 1-based line in the source file
};

enum class RowStatus { kOk, kParseError, kDomainError, kInvariantError, kNumericalError };
std::string to_string(RowStatus s);
RowStatus parse_status(const std::string& s);

struct RowError {
  std::size_t line = 0;
  std::string station_id;
  RowStatus status = RowStatus::kParseError;
  std::string message;
};

struct ParseResult {
  std::vector<SoundingRecord> records;
  std::vector<RowError> errors;  // malformed rows, in file order
};

// Header `station_id,p0,T0,U,h[,L][,q]`, columns matched by name in any
// order. Unquoted comma-separated fields; blank lines and lines starting
// with '#' are skipped. Rows that do not parse or violate the record
// invariants are collected as errors. Throws InputError when a required
// column is missing.
ParseResult parse_soundings(std::istream& is);
ParseResult parse_soundings_file(const std::string& path);

// Throws InvariantError unless the record satisfies its field invariants.
void validate(const SoundingRecord& r);

struct BatchOptions {
  thermo::NormalizationMode mode = thermo::NormalizationMode::kNormalized;
  bool solve = false;   // add tau_wall from the Crocco shooting solver
  bool stress = false;  // add stress_dry = mu(T0) * tau_star_dry (Pa)
  double solve_tol = 1e-10;
};

struct ReportRow {
  std::string station_id;
  std::size_t line = 0;
  RowStatus status = RowStatus::kOk;
  std::string message;
  // Column values keyed by name; absent on failure.
  std::map<std::string, double> values;
};

struct Report {
  std::vector<std::string> columns;  // numeric columns, in output order
  std::vector<ReportRow> rows;       // input order
};

// Numeric columns for the given options:
//   sigma0, tau_star_dry, tau_star_moist, rho_estimate, pressure_estimate
//   [, tau_wall] [, stress_dry]
std::vector<std::string> report_columns(const BatchOptions& opt);

// Evaluates one record. Never throws for per-record failures; they are
// recorded in the status and message.
ReportRow evaluate(const SoundingRecord& r, const thermo::GasProfile& gas,
                   const BatchOptions& opt);

// Rows for records and parse errors, merged in line order.
Report run_batch(const ParseResult& parsed, const thermo::GasProfile& gas,
                 const BatchOptions& opt);
Report run_batch(const std::vector<SoundingRecord>& records, const thermo::GasProfile& gas,
                 const BatchOptions& opt);

bool any_failed(const Report& report);

// CSV: station_id,<columns...>,status with %.15g numbers and empty cells
// for missing values.
void write_csv(std::ostream& os, const Report& report);
// JSON: array of objects, one per row; keys are the CSV column names and
// missing values are null.
void write_json(std::ostream& os, const Report& report);

// Inverse of write_csv / write_json (the message and line are not part of
// the table and are left empty).
Report read_csv(std::istream& is);
Report read_json(std::istream& is);

// Rounds to 15 significant digits, the precision of the emitted tables.
double round15(double v);
std::string format15(double v);

struct SweepSpec {
  std::string variable;  // only "U" is supported
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;
};

// "U=start:stop:count", inclusive linspace. Throws InputError.
SweepSpec parse_sweep(const std::string& text);

struct SweepRow {
  double U = 0.0;
  double tau_star = 0.0;
};

// tau*(U) at fixed (h, T0, q); the moist mixture is used when q > 0.
// Throws DomainError if any U leaves the validity range U^2 < 2 c_p T0.
std::vector<SweepRow> sweep_tau_star(const SweepSpec& spec, double h, double T0, double q,
                                     const thermo::GasProfile& gas);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

// key=value gas profile (c_pd, R_d, c_pv, R_v, b, omega, mu_h, T_h, Pr,
// name); unspecified keys take the paper-atmosphere value. '#' starts a
// comment. Throws InputError on unknown keys or unparsable values.
thermo::GasProfile parse_gas_profile(std::istream& is, const std::string& default_name);
thermo::GasProfile load_gas_profile(const std::string& path);

// `selector` is "paper-atmosphere" or a profile file path. Without a
// selector, STRATO_SHEAR_PROFILE is consulted, then the built-in profile.
thermo::GasProfile resolve_gas_profile(const std::optional<std::string>& selector);

struct RunManifest {
  std::map<std::string, std::string> config;
  std::string gas_profile;
  std::string mode;
  std::vector<RowError> entries;  // one per input row, status kOk on success
  std::string version;
  std::string timestamp;  // UTC, ISO 8601
};

RunManifest make_manifest(const Report& report, const std::map<std::string, std::string>& config,
                          const thermo::GasProfile& gas, const BatchOptions& opt);
void write_manifest(std::ostream& os, const RunManifest& m);

}  // namespace strato::batch
