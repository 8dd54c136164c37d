#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oamtilt {

using cdouble = std::complex<double>;

/// Uniform 2-D transverse sampling grid. Node (ix, iy) sits at
///   x = origin_x + (ix - (nx-1)/2) * dx,  y = origin_y + (iy - (ny-1)/2) * dy,
/// so an even sample count never places a node on the center.
struct GridSpec {
  std::size_t nx = 512;
  std::size_t ny = 512;
  double dx = 0.0;  // m
  double dy = 0.0;  // m
  double origin_x = 0.0;
  double origin_y = 0.0;

  GridSpec() = default;
  GridSpec(std::size_t nx_, std::size_t ny_, double dx_, double dy_,
           double ox = 0.0, double oy = 0.0);

  /// Square grid of n x n samples covering `extent` meters.
  static GridSpec square(std::size_t n, double extent);

  double extent_x() const { return static_cast<double>(nx) * dx; }
  double extent_y() const { return static_cast<double>(ny) * dy; }
  double min_extent() const;
  double x(std::size_t ix) const;
  double y(std::size_t iy) const;
  std::size_t size() const { return nx * ny; }

  bool operator==(const GridSpec&) const = default;
  std::string describe() const;
};

/// Throws DomainError("grid truncates mode") when the grid extent is below
/// 4x `waist`, and emits a warning below 6x.
void check_grid_extent(const GridSpec& grid, double waist, std::string_view what);

/// Warning sink for soft threshold violations. Defaults to stderr; set to an
/// empty function to silence.
void set_warning_handler(std::function<void(std::string_view)> handler);
void warn(std::string_view message);

template <typename T>
class SampledField {
 public:
  SampledField() = default;
  explicit SampledField(GridSpec grid) : grid_(grid), samples_(grid.size()) {}
  SampledField(GridSpec grid, std::vector<T> samples);

  const GridSpec& grid() const { return grid_; }
  std::span<const T> samples() const { return samples_; }
  std::span<T> samples() { return samples_; }

  T& at(std::size_t ix, std::size_t iy) { return samples_[iy * grid_.nx + ix]; }
  const T& at(std::size_t ix, std::size_t iy) const {
    return samples_[iy * grid_.nx + ix];
  }

  /// Fill from a function of physical coordinates (x, y).
  template <typename F>
  static SampledField from_function(const GridSpec& grid, F&& f) {
    SampledField out(grid);
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
      const double y = grid.y(iy);
      for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        out.at(ix, iy) = f(grid.x(ix), y);
      }
    }
    return out;
  }

 private:
  GridSpec grid_;
  std::vector<T> samples_;
};

using ComplexField = SampledField<cdouble>;
using RealField = SampledField<double>;

/// Discrete L2 inner product sum conj(f) g dx dy (midpoint rule).
cdouble inner_product(const ComplexField& f, const ComplexField& g);
double total_power(const ComplexField& f);

ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator*(cdouble s, const ComplexField& f);
RealField intensity(const ComplexField& f);
RealField phase(const ComplexField& f);
double max_abs(const ComplexField& f);

/// Topological charge from the unwrapped phase along a circle of the given
/// radius around the beam axis x = y = 0 (nearest-sample lookup).
int winding_number(const ComplexField& f, double radius);

/// Number of samples for the local Lagrange interpolator, and the margin (in
/// cells) a point must keep from the grid border.
inline constexpr int kInterpOrder = 8;
/// Largest radius about x = y = 0 on which interpolate() stays inside the grid.
double interpolation_safe_radius(const GridSpec& grid);

/// Separable 8-point Lagrange interpolation at physical (x, y). Throws
/// StructuralError if the stencil leaves the grid.
cdouble interpolate(const ComplexField& f, double x, double y);
double interpolate(const RealField& f, double x, double y);

}  // namespace oamtilt
