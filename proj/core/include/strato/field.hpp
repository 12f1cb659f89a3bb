#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace strato {

// Samples of a scalar over R = [0, L] x [0, h] at uniform nodes
// x_i = i L / (nx - 1), y_j = j h / (ny - 1). Storage is row-major with one
// row per y_j: value(i, j) = values[j * nx + i].
class ScalarField {
 public:
  // Throws InvariantError unless nx, ny >= 2, L > h > 0, values.size() == nx*ny
  // and every value is finite.
  ScalarField(std::size_t nx, std::size_t ny, double L, double h, std::vector<double> values);

  // Samples fn(x, y) at every node.
  static ScalarField sample(std::size_t nx, std::size_t ny, double L, double h,
                            const std::function<double(double, double)>& fn);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double L() const noexcept { return L_; }
  double h() const noexcept { return h_; }
  double dx() const noexcept { return L_ / static_cast<double>(nx_ - 1); }
  double dy() const noexcept { return h_ / static_cast<double>(ny_ - 1); }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx(); }
  double y(std::size_t j) const noexcept { return static_cast<double>(j) * dy(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[j * nx_ + i]; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_grid(const ScalarField& other) const noexcept;

  // Bilinear interpolation; throws DomainError outside R.
  double interpolate(double x, double y) const;

  double max_abs() const noexcept;
  double min_value() const noexcept;

 private:
  std::size_t nx_;
  std::size_t ny_;
  double L_;
  double h_;
  std::vector<double> values_;
};

// CSV exchange format:
//   nx,ny,L,h
//   <nx>,<ny>,<L>,<h>
//   ny lines of nx comma-separated values, j = 0 first.
// Numbers are written with 17 significant digits so reading back is exact.
void write_csv(std::ostream& os, const ScalarField& field);
ScalarField read_csv(std::istream& is);

void write_csv_file(const std::string& path, const ScalarField& field);
ScalarField read_csv_file(const std::string& path);

}  // namespace strato
