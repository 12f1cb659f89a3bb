#include "strato/batch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "strato/crocco.hpp"
#include "strato/errors.hpp"
#include "strato/limit.hpp"

#ifndef STRATO_VERSION
#define STRATO_VERSION "0.0.0"
#endif

namespace strato::batch {

namespace {

using ojson = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Whole-string strtod; nullopt if anything is left over.
std::optional<double> to_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

bool skippable(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

const std::vector<std::string> kRequired = {"station_id", "p0", "T0", "U", "h"};
const std::vector<std::string> kOptional = {"L", "q"};

}  // namespace

std::string version() { return STRATO_VERSION; }

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::kOk: return "ok";
    case RowStatus::kParseError: return "parse_error";
    case RowStatus::kDomainError: return "domain_error";
    case RowStatus::kInvariantError: return "invariant_error";
    case RowStatus::kNumericalError: return "numerical_error";
  }
  return "unknown";
}

RowStatus parse_status(const std::string& s) {
  for (auto st : {RowStatus::kOk, RowStatus::kParseError, RowStatus::kDomainError,
                  RowStatus::kInvariantError, RowStatus::kNumericalError}) {
    if (to_string(st) == s) return st;
  }
  throw InputError("unknown row status '" + s + "'");
}

void validate(const SoundingRecord& r) {
  for (double v : {r.p0, r.T0, r.U, r.h, r.L, r.q}) {
    if (!std::isfinite(v)) throw InvariantError("record: non-finite field");
  }
  if (r.station_id.empty()) throw InvariantError("record: empty station_id");
  if (!(r.p0 > 0.0)) throw InvariantError("record: p0 must be positive");
  if (!(r.T0 > 0.0)) throw InvariantError("record: T0 must be positive");
  if (!(r.h > 0.0)) throw InvariantError("record: h must be positive");
  if (!(r.L > r.h)) throw InvariantError("record: L must exceed h");
  if (!(r.U >= 0.0)) throw InvariantError("record: U must be nonnegative");
  if (!(r.q >= 0.0 && r.q <= 1.0)) throw InvariantError("record: q must lie in [0, 1]");
}

ParseResult parse_soundings(std::istream& is) {
  ParseResult out;
  std::string line;
  std::size_t lineno = 0;

  std::vector<std::string> header;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw InputError("soundings: missing header line");

  std::map<std::string, std::size_t> col;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (col.count(header[k])) throw InputError("soundings: duplicate column '" + header[k] + "'");
    col[header[k]] = k;
  }
  for (const auto& name : kRequired) {
    if (!col.count(name)) throw InputError("soundings: missing required column '" + name + "'");
  }

  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto cells = split_csv(line);
    RowError err;
    err.line = lineno;
    if (cells.size() != header.size()) {
      err.station_id = cells.empty() ? "" : cells[std::min(col["station_id"], cells.size() - 1)];
      err.message = "expected " + std::to_string(header.size()) + " fields, got " +
                    std::to_string(cells.size());
      out.errors.push_back(err);
      continue;
    }
    SoundingRecord r;
    r.line = lineno;
    r.station_id = cells[col["station_id"]];
    err.station_id = r.station_id;

    std::string bad;
    auto field = [&](const std::string& name, double fallback, bool required) {
      const auto it = col.find(name);
      if (it == col.end() || (!required && cells[it->second].empty())) return fallback;
      const auto v = to_number(cells[it->second]);
      if (!v) {
        if (bad.empty()) bad = "column " + name + ": not a number '" + cells[it->second] + "'";
        return 0.0;
      }
      return *v;
    };
    r.p0 = field("p0", 0.0, true);
    r.T0 = field("T0", 0.0, true);
    r.U = field("U", 0.0, true);
    r.h = field("h", 0.0, true);
    r.L = field("L", 100.0 * r.h, false);
    r.q = field("q", 0.0, false);
    if (!bad.empty()) {
      err.message = bad;
      out.errors.push_back(err);
      continue;
    }
    try {
      validate(r);
    } catch (const InvariantError& e) {
      err.status = RowStatus::kInvariantError;
      err.message = e.what();
      out.errors.push_back(err);
      continue;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

ParseResult parse_soundings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open soundings file '" + path + "'");
  return parse_soundings(in);
}

std::vector<std::string> report_columns(const BatchOptions& opt) {
  std::vector<std::string> c = {"sigma0", "tau_star_dry", "tau_star_moist", "rho_estimate",
                                "pressure_estimate"};
  if (opt.solve) c.emplace_back("tau_wall");
  if (opt.stress) c.emplace_back("stress_dry");
  return c;
}

ReportRow evaluate(const SoundingRecord& r, const thermo::GasProfile& gas,
                   const BatchOptions& opt) {
  ReportRow row;
  row.station_id = r.station_id;
  row.line = r.line;
  try {
    validate(r);
    thermo::FreeStreamInputs in;
    in.U = r.U;
    in.T0 = r.T0;
    in.p0 = r.p0;
    in.L = r.L;
    in.h = r.h;
    const thermo::FreeStream fs(in, gas.dry);
    const auto dc = thermo::derived_constants(fs, gas.dry, opt.mode);
    const auto moist = thermo::mix_gases(gas.dry, gas.vapor, {r.q});

    std::map<std::string, double> v;
    v["sigma0"] = fs.sigma0();
    v["tau_star_dry"] = limit::tau_star(r.U, r.h, gas.dry, r.T0);
    v["tau_star_moist"] = limit::tau_star(r.U, r.h, moist, r.T0);
    v["rho_estimate"] = limit::density_estimate(dc, fs, gas.dry);
    v["pressure_estimate"] = thermo::pressure_estimate(dc, fs);
    if (opt.solve) {
      if (fs.U() == 0.0) {
        v["tau_wall"] = 0.0;
      } else {
        const auto prob = crocco::CroccoProblem::from_scenario(dc, fs);
        v["tau_wall"] = crocco::solve_shooting(prob, opt.solve_tol, 2).tau_wall;
      }
    }
    if (opt.stress) {
      v["stress_dry"] = thermo::viscosity_power_law(r.T0, gas.dry) * v["tau_star_dry"];
    }
    for (const auto& [name, value] : v) {
      if (!std::isfinite(value)) throw ConvergenceError("non-finite " + name, 0, value);
    }
    row.values = std::move(v);
  } catch (const DomainError& e) {
    row.status = RowStatus::kDomainError;
    row.message = e.what();
  } catch (const InvariantError& e) {
    row.status = RowStatus::kInvariantError;
    row.message = e.what();
  } catch (const std::exception& e) {
    row.status = RowStatus::kNumericalError;
    row.message = e.what();
  }
  return row;
}

Report run_batch(const std::vector<SoundingRecord>& records, const thermo::GasProfile& gas,
                 const BatchOptions& opt) {
  Report rep;
  rep.columns = report_columns(opt);
  rep.rows.reserve(records.size());
  for (const auto& r : records) rep.rows.push_back(evaluate(r, gas, opt));
  return rep;
}

Report run_batch(const ParseResult& parsed, const thermo::GasProfile& gas,
                 const BatchOptions& opt) {
  Report rep = run_batch(parsed.records, gas, opt);
  for (const auto& e : parsed.errors) {
    ReportRow row;
    row.station_id = e.station_id;
    row.line = e.line;
    row.status = e.status;
    row.message = e.message;
    rep.rows.push_back(std::move(row));
  }
  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return a.line < b.line; });
  return rep;
}

bool any_failed(const Report& report) {
  return std::any_of(report.rows.begin(), report.rows.end(),
                     [](const ReportRow& r) { return r.status != RowStatus::kOk; });
}

std::string format15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

double round15(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format15(v).c_str(), nullptr);
}

void write_csv(std::ostream& os, const Report& report) {
  os << "station_id";
  for (const auto& c : report.columns) os << ',' << c;
  os << ",status\n";
  for (const auto& row : report.rows) {
    os << row.station_id;
    for (const auto& c : report.columns) {
      os << ',';
      const auto it = row.values.find(c);
      if (it != row.values.end()) os << format15(it->second);
    }
    os << ',' << to_string(row.status) << '\n';
  }
}

void write_json(std::ostream& os, const Report& report) {
  ojson arr = ojson::array();
  for (const auto& row : report.rows) {
    ojson obj;
    obj["station_id"] = row.station_id;
    for (const auto& c : report.columns) {
      const auto it = row.values.find(c);
      if (it != row.values.end()) {
        obj[c] = round15(it->second);
      } else {
        obj[c] = nullptr;
      }
    }
    obj["status"] = to_string(row.status);
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << '\n';
}

Report read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("report csv: empty input");
  const auto header = split_csv(line);
  if (header.size() < 2 || header.front() != "station_id" || header.back() != "status") {
    throw InputError("report csv: header must start with station_id and end with status");
  }
  Report rep;
  rep.columns.assign(header.begin() + 1, header.end() - 1);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw InputError("report csv: wrong field count on line " + std::to_string(lineno));
    }
    ReportRow row;
    row.station_id = cells.front();
    row.status = parse_status(cells.back());
    for (std::size_t k = 0; k < rep.columns.size(); ++k) {
      const auto& cell = cells[k + 1];
      if (cell.empty()) continue;
      const auto v = to_number(cell);
      if (!v) throw InputError("report csv: bad number on line " + std::to_string(lineno));
      row.values[rep.columns[k]] = *v;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

Report read_json(std::istream& is) {
  ojson arr;
  try {
    arr = ojson::parse(is);
  } catch (const ojson::parse_error& e) {
    throw InputError(std::string("report json: ") + e.what());
  }
  if (!arr.is_array()) throw InputError("report json: expected an array");
  Report rep;
  bool first = true;
  for (const auto& obj : arr) {
    if (!obj.is_object()) throw InputError("report json: expected objects");
    ReportRow row;
    for (const auto& [key, val] : obj.items()) {
      if (key == "station_id") {
        row.station_id = val.get<std::string>();
      } else if (key == "status") {
        row.status = parse_status(val.get<std::string>());
      } else {
        if (first) rep.columns.push_back(key);
        if (!val.is_null()) row.values[key] = val.get<double>();
      }
    }
    first = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw InputError("sweep: expected VAR=start:stop:count");
  SweepSpec spec;
  spec.variable = trim(text.substr(0, eq));
  if (spec.variable != "U") throw InputError("sweep: only U can be swept");
  std::vector<std::string> parts;
  std::istringstream ss(text.substr(eq + 1));
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(trim(p));
  if (parts.size() != 3) throw InputError("sweep: expected VAR=start:stop:count");
  const auto a = to_number(parts[0]);
  const auto b = to_number(parts[1]);
  const auto n = to_number(parts[2]);
  if (!a || !b || !n || !std::isfinite(*a) || !std::isfinite(*b)) {
    throw InputError("sweep: start, stop and count must be numbers");
  }
  if (*n < 2 || *n != std::floor(*n)) throw InputError("sweep: count must be an integer >= 2");
  if (*a < 0.0 || *b < *a) throw InputError("sweep: need 0 <= start <= stop");
  spec.start = *a;
  spec.stop = *b;
  spec.count = static_cast<std::size_t>(*n);
  return spec;
}

std::vector<SweepRow> sweep_tau_star(const SweepSpec& spec, double h, double T0, double q,
                                     const thermo::GasProfile& gas) {
  const auto g = thermo::mix_gases(gas.dry, gas.vapor, {q});
  std::vector<SweepRow> rows;
  rows.reserve(spec.count);
  for (std::size_t k = 0; k < spec.count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(spec.count - 1);
    const double U = k + 1 == spec.count ? spec.stop : spec.start + t * (spec.stop - spec.start);
    rows.push_back({U, limit::tau_star(U, h, g, T0)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "U,tau_star\n";
  for (const auto& r : rows) os << format15(r.U) << ',' << format15(r.tau_star) << '\n';
}

thermo::GasProfile parse_gas_profile(std::istream& is, const std::string& default_name) {
  thermo::GasProfile prof = thermo::paper_atmosphere();
  prof.name = default_name;
  const std::map<std::string, double*> slots = {
      {"c_pd", &prof.dry.c_p},   {"R_d", &prof.dry.R_hat},  {"c_pv", &prof.vapor.c_p},
      {"R_v", &prof.vapor.R_hat}, {"b", &prof.dry.b},        {"omega", &prof.dry.omega},
      {"mu_h", &prof.dry.mu_h},  {"T_h", &prof.dry.T_h},    {"Pr", &prof.dry.Pr}};

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("gas profile line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "name") {
      prof.name = val;
      continue;
    }
    const auto it = slots.find(key);
    if (it == slots.end()) {
      throw InputError("gas profile line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    const auto v = to_number(val);
    if (!v) {
      throw InputError("gas profile line " + std::to_string(lineno) + ": bad value for " + key);
    }
    *it->second = *v;
  }
  // Shared properties of the mixture come from the dry component.
  prof.vapor.b = prof.dry.b;
  prof.vapor.omega = prof.dry.omega;
  prof.vapor.mu_h = prof.dry.mu_h;
  prof.vapor.T_h = prof.dry.T_h;
  prof.vapor.Pr = prof.dry.Pr;
  try {
    thermo::validate(prof.dry);
    thermo::validate(prof.vapor);
  } catch (const InvariantError& e) {
    throw InputError(std::string("gas profile: ") + e.what());
  }
  return prof;
}

thermo::GasProfile load_gas_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open gas profile '" + path + "'");
  return parse_gas_profile(in, path);
}

thermo::GasProfile resolve_gas_profile(const std::optional<std::string>& selector) {
  std::string sel;
  if (selector && !selector->empty()) {
    sel = *selector;
  } else if (const char* env = std::getenv("STRATO_SHEAR_PROFILE"); env && *env) {
    sel = env;
  }
  if (sel.empty() || sel == "paper-atmosphere") return thermo::paper_atmosphere();
  return load_gas_profile(sel);
}

RunManifest make_manifest(const Report& report, const std::map<std::string, std::string>& config,
                          const thermo::GasProfile& gas, const BatchOptions& opt) {
  RunManifest m;
  m.config = config;
  m.gas_profile = gas.name;
  m.mode = thermo::to_string(opt.mode);
  for (const auto& row : report.rows) {
    m.entries.push_back({row.line, row.station_id, row.status, row.message});
  }
  m.version = version();
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  m.timestamp = buf;
  return m;
}

void write_manifest(std::ostream& os, const RunManifest& m) {
  ojson j;
  j["tool"] = "strato-shear";
  j["version"] = m.version;
  j["timestamp"] = m.timestamp;
  j["gas_profile"] = m.gas_profile;
  j["mode"] = m.mode;
  j["config"] = ojson::object();
  for (const auto& [k, v] : m.config) j["config"][k] = v;
  j["records"] = ojson::array();
  for (const auto& e : m.entries) {
    j["records"].push_back({{"line", e.line},
                            {"station_id", e.station_id},
                            {"status", to_string(e.status)},
                            {"message", e.message}});
  }
  os << j.dump(2) << '\n';
}

}  // namespace strato::batch
