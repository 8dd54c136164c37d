#include "oamtilt/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>

#include "oamtilt/errors.hpp"

namespace oamtilt {

namespace {

std::mutex g_warn_mutex;
std::function<void(std::string_view)> g_warn_handler = [](std::string_view m) {
  std::cerr << "warning: " << m << '\n';
};

}  // namespace

void set_warning_handler(std::function<void(std::string_view)> handler) {
  std::lock_guard lock(g_warn_mutex);
  g_warn_handler = std::move(handler);
}

void warn(std::string_view message) {
  std::lock_guard lock(g_warn_mutex);
  if (g_warn_handler) g_warn_handler(message);
}

GridSpec::GridSpec(std::size_t nx_, std::size_t ny_, double dx_, double dy_,
                   double ox, double oy)
    : nx(nx_), ny(ny_), dx(dx_), dy(dy_), origin_x(ox), origin_y(oy) {
  if (nx < 2 || ny < 2) throw DomainError("grid needs at least 2x2 samples");
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw DomainError("grid pitch must be positive and finite");
  }
  if (!std::isfinite(ox) || !std::isfinite(oy)) {
    throw DomainError("grid origin must be finite");
  }
}

GridSpec GridSpec::square(std::size_t n, double extent) {
  return GridSpec(n, n, extent / static_cast<double>(n),
                  extent / static_cast<double>(n));
}

double GridSpec::min_extent() const { return std::min(extent_x(), extent_y()); }

double GridSpec::x(std::size_t ix) const {
  return origin_x + (static_cast<double>(ix) - 0.5 * static_cast<double>(nx - 1)) * dx;
}

double GridSpec::y(std::size_t iy) const {
  return origin_y + (static_cast<double>(iy) - 0.5 * static_cast<double>(ny - 1)) * dy;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os.precision(6);
  os << nx << "x" << ny << " @ (" << dx << ", " << dy << ") m, origin (" << origin_x
     << ", " << origin_y << ")";
  return os.str();
}

void check_grid_extent(const GridSpec& grid, double waist, std::string_view what) {
  const double ratio = grid.min_extent() / waist;
  if (ratio < 4.0) {
    std::ostringstream os;
    os << "grid truncates mode: extent " << grid.min_extent() << " m is " << ratio
       << "x the " << what << " waist (need >= 4x)";
    throw DomainError(os.str());
  }
  if (ratio < 6.0) {
    std::ostringstream os;
    os << "grid extent is only " << ratio << "x the " << what
       << " waist (recommended >= 6x)";
    warn(os.str());
  }
}

template <typename T>
SampledField<T>::SampledField(GridSpec grid, std::vector<T> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw StructuralError("sample count does not match grid " + grid_.describe());
  }
  for (const auto& v : samples_) {
    if constexpr (std::is_same_v<T, cdouble>) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw DomainError("field contains non-finite samples");
      }
    } else {
      if (!std::isfinite(v)) throw DomainError("field contains non-finite samples");
    }
  }
}

template class SampledField<cdouble>;
template class SampledField<double>;

namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) {
    throw StructuralError("grid mismatch: " + a.describe() + " vs " + b.describe());
  }
}

}  // namespace

cdouble inner_product(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid(), g.grid());
  const auto a = f.samples();
  const auto b = g.samples();
  // Row-wise partial sums keep the accumulation error at a few ulps of the
  // result even for 1e6-sample grids.
  cdouble acc{};
  const std::size_t nx = f.grid().nx;
  for (std::size_t iy = 0; iy < f.grid().ny; ++iy) {
    cdouble row{};
    for (std::size_t ix = 0; ix < nx; ++ix) {
      row += std::conj(a[iy * nx + ix]) * b[iy * nx + ix];
    }
    acc += row;
  }
  return acc * (f.grid().dx * f.grid().dy);
}

double total_power(const ComplexField& f) {
  double acc = 0.0;
  const std::size_t nx = f.grid().nx;
  const auto s = f.samples();
  for (std::size_t iy = 0; iy < f.grid().ny; ++iy) {
    double row = 0.0;
    for (std::size_t ix = 0; ix < nx; ++ix) row += std::norm(s[iy * nx + ix]);
    acc += row;
  }
  return acc * f.grid().dx * f.grid().dy;
}

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid());
  ComplexField out(a.grid());
  auto o = out.samples();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = a.samples()[i] + b.samples()[i];
  return out;
}

ComplexField operator*(cdouble s, const ComplexField& f) {
  ComplexField out(f.grid());
  auto o = out.samples();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = s * f.samples()[i];
  return out;
}

RealField intensity(const ComplexField& f) {
  RealField out(f.grid());
  auto o = out.samples();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::norm(f.samples()[i]);
  return out;
}

RealField phase(const ComplexField& f) {
  RealField out(f.grid());
  auto o = out.samples();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::arg(f.samples()[i]);
  return out;
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const auto& v : f.samples()) m = std::max(m, std::abs(v));
  return m;
}

int winding_number(const ComplexField& f, double radius) {
  const GridSpec& g = f.grid();
  const double pitch = std::max(g.dx, g.dy);
  if (!(radius > 2.0 * pitch)) {
    throw DomainError("winding radius must exceed two grid steps");
  }
  // Nearest-sample lookup reaches half a cell beyond the outermost node.
  const double half_x = 0.5 * static_cast<double>(g.nx - 1) * g.dx;
  const double half_y = 0.5 * static_cast<double>(g.ny - 1) * g.dy;
  if (radius + std::abs(g.origin_x) > half_x || radius + std::abs(g.origin_y) > half_y) {
    throw StructuralError("winding circle of radius " + std::to_string(radius) +
                          " m lies outside grid " + g.describe());
  }

  const double circumference_cells = 2.0 * std::numbers::pi * radius / std::min(g.dx, g.dy);
  const auto n = static_cast<std::size_t>(
      std::max(256.0, 4.0 * std::ceil(circumference_cells)));
  const double threshold = 1e-6 * max_abs(f);

  std::vector<double> phases(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const double x = radius * std::cos(t);
    const double y = radius * std::sin(t);
    const auto ix = static_cast<std::size_t>(
        std::lround((x - g.origin_x) / g.dx + 0.5 * static_cast<double>(g.nx - 1)));
    const auto iy = static_cast<std::size_t>(
        std::lround((y - g.origin_y) / g.dy + 0.5 * static_cast<double>(g.ny - 1)));
    const cdouble v = f.at(ix, iy);
    if (!(std::abs(v) > threshold)) {
      throw NumericalError("charge undefined on nodal circle (radius " +
                           std::to_string(radius) + " m)");
    }
    phases[k] = std::arg(v);
  }

  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double d = phases[(k + 1) % n] - phases[k];
    d = std::remainder(d, 2.0 * std::numbers::pi);
    total += d;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

double interpolation_safe_radius(const GridSpec& grid) {
  const double hx =
      (0.5 * static_cast<double>(grid.nx - 1) - 4.5) * grid.dx - std::abs(grid.origin_x);
  const double hy =
      (0.5 * static_cast<double>(grid.ny - 1) - 4.5) * grid.dy - std::abs(grid.origin_y);
  return std::max(0.0, std::min(hx, hy));
}

namespace {

constexpr int kHalf = kInterpOrder / 2;

// Denominators prod_{q != k} (k - q) for the equispaced stencil.
constexpr std::array<double, kInterpOrder> lagrange_denominators() {
  std::array<double, kInterpOrder> d{};
  for (int k = 0; k < kInterpOrder; ++k) {
    double p = 1.0;
    for (int q = 0; q < kInterpOrder; ++q) {
      if (q != k) p *= static_cast<double>(k - q);
    }
    d[k] = p;
  }
  return d;
}

constexpr auto kDenominators = lagrange_denominators();

struct Stencil {
  std::ptrdiff_t first;
  std::array<double, kInterpOrder> weights;
};

Stencil make_stencil(double u, std::size_t n) {
  const double fl = std::floor(u);
  const auto first = static_cast<std::ptrdiff_t>(fl) - (kHalf - 1);
  if (first < 0 || first + kInterpOrder > static_cast<std::ptrdiff_t>(n)) {
    throw StructuralError("interpolation point outside grid");
  }
  Stencil s{first, {}};
  const double t = u - fl + (kHalf - 1);  // position relative to stencil start
  std::array<double, kInterpOrder> diff{};
  for (int q = 0; q < kInterpOrder; ++q) diff[q] = t - q;
  for (int k = 0; k < kInterpOrder; ++k) {
    double p = 1.0;
    for (int q = 0; q < kInterpOrder; ++q) {
      if (q != k) p *= diff[q];
    }
    s.weights[k] = p / kDenominators[k];
  }
  return s;
}

template <typename T>
T interpolate_impl(const SampledField<T>& f, double x, double y) {
  const GridSpec& g = f.grid();
  const double u = (x - g.origin_x) / g.dx + 0.5 * static_cast<double>(g.nx - 1);
  const double v = (y - g.origin_y) / g.dy + 0.5 * static_cast<double>(g.ny - 1);
  const Stencil sx = make_stencil(u, g.nx);
  const Stencil sy = make_stencil(v, g.ny);
  T acc{};
  for (int b = 0; b < kInterpOrder; ++b) {
    T row{};
    const auto iy = static_cast<std::size_t>(sy.first + b);
    for (int a = 0; a < kInterpOrder; ++a) {
      row += sx.weights[a] * f.at(static_cast<std::size_t>(sx.first + a), iy);
    }
    acc += sy.weights[b] * row;
  }
  return acc;
}

}  // namespace

cdouble interpolate(const ComplexField& f, double x, double y) {
  return interpolate_impl(f, x, y);
}

double interpolate(const RealField& f, double x, double y) {
  return interpolate_impl(f, x, y);
}

}  // namespace oamtilt
