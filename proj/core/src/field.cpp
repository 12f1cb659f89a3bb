#include "strato/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "strato/errors.hpp"

namespace strato {

ScalarField::ScalarField(std::size_t nx, std::size_t ny, double L, double h,
                         std::vector<double> values)
    : nx_(nx), ny_(ny), L_(L), h_(h), values_(std::move(values)) {
  if (nx_ < 2 || ny_ < 2) throw InvariantError("ScalarField: need nx, ny >= 2");
  if (!(h_ > 0.0 && L_ > h_)) throw InvariantError("ScalarField: need L > h > 0");
  if (values_.size() != nx_ * ny_) throw InvariantError("ScalarField: size != nx * ny");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvariantError("ScalarField: non-finite sample");
  }
}

ScalarField ScalarField::sample(std::size_t nx, std::size_t ny, double L, double h,
                                const std::function<double(double, double)>& fn) {
  if (nx < 2 || ny < 2) throw InvariantError("ScalarField: need nx, ny >= 2");
  std::vector<double> v(nx * ny);
  const double dx = L / static_cast<double>(nx - 1);
  const double dy = h / static_cast<double>(ny - 1);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      v[j * nx + i] = fn(static_cast<double>(i) * dx, static_cast<double>(j) * dy);
    }
  }
  return ScalarField(nx, ny, L, h, std::move(v));
}

bool ScalarField::same_grid(const ScalarField& other) const noexcept {
  return nx_ == other.nx_ && ny_ == other.ny_ && L_ == other.L_ && h_ == other.h_;
}

double ScalarField::interpolate(double x, double y) const {
  if (!(x >= 0.0 && x <= L_ && y >= 0.0 && y <= h_)) {
    throw DomainError("ScalarField::interpolate: point outside [0,L]x[0,h]");
  }
  const double fx = x / dx();
  const double fy = y / dy();
  const std::size_t i = std::min(static_cast<std::size_t>(fx), nx_ - 2);
  const std::size_t j = std::min(static_cast<std::size_t>(fy), ny_ - 2);
  const double tx = fx - static_cast<double>(i);
  const double ty = fy - static_cast<double>(j);
  const double v00 = (*this)(i, j);
  const double v10 = (*this)(i + 1, j);
  const double v01 = (*this)(i, j + 1);
  const double v11 = (*this)(i + 1, j + 1);
  return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::min_value() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  // strtod handles the inf/nan spellings that from_chars rejects in libstdc++ 11.
  const char* begin = s.c_str();
  while (*begin == ' ') ++begin;
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw InvariantError("ScalarField CSV: bad number '" + s + "'");
  while (*end == ' ' || *end == '\r') ++end;
  if (*end != '\0') throw InvariantError("ScalarField CSV: bad number '" + s + "'");
  return v;
}

}  // namespace

void write_csv(std::ostream& os, const ScalarField& field) {
  os << "nx,ny,L,h\n";
  os << field.nx() << ',' << field.ny() << ',' << fmt17(field.L()) << ',' << fmt17(field.h())
     << '\n';
  for (std::size_t j = 0; j < field.ny(); ++j) {
    for (std::size_t i = 0; i < field.nx(); ++i) {
      if (i) os << ',';
      os << fmt17(field(i, j));
    }
    os << '\n';
  }
}

ScalarField read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvariantError("ScalarField CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "nx,ny,L,h") throw InvariantError("ScalarField CSV: expected header nx,ny,L,h");
  if (!std::getline(is, line)) throw InvariantError("ScalarField CSV: missing dimensions");
  const auto dims = split_csv(line);
  if (dims.size() != 4) throw InvariantError("ScalarField CSV: dimension line needs 4 cells");
  const double nx_d = parse_double(dims[0]);
  const double ny_d = parse_double(dims[1]);
  if (nx_d < 2 || ny_d < 2 || nx_d != std::floor(nx_d) || ny_d != std::floor(ny_d)) {
    throw InvariantError("ScalarField CSV: nx, ny must be integers >= 2");
  }
  const auto nx = static_cast<std::size_t>(nx_d);
  const auto ny = static_cast<std::size_t>(ny_d);
  const double L = parse_double(dims[2]);
  const double h = parse_double(dims[3]);

  std::vector<double> values;
  values.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    if (!std::getline(is, line)) throw InvariantError("ScalarField CSV: too few rows");
    const auto cells = split_csv(line);
    if (cells.size() != nx) throw InvariantError("ScalarField CSV: row length != nx");
    for (const auto& c : cells) values.push_back(parse_double(c));
  }
  return ScalarField(nx, ny, L, h, std::move(values));
}

void write_csv_file(const std::string& path, const ScalarField& field) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(os, field);
}

ScalarField read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(is);
}

}  // namespace strato
