#include "oamtilt/lg_basis.hpp"

#include <cmath>
#include <numbers>

#include "oamtilt/errors.hpp"

namespace oamtilt {

LGIndex::LGIndex(int ell_, int p_) : ell(ell_), p(p_) {
  if (p < 0) throw DomainError("LG radial index p must be >= 0");
}

BeamParams::BeamParams(double w0_, cdouble amplitude_, double wavelength_)
    : w0(w0_), amplitude(amplitude_), wavelength(wavelength_) {
  if (!(w0 > 0.0) || !std::isfinite(w0)) throw DomainError("beam waist must be > 0");
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError("wavelength must be > 0");
  }
  if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag())) {
    throw DomainError("beam amplitude must be finite");
  }
}

namespace {

double normalization(int abs_ell, int p, double w0) {
  // sqrt(2 p! / (pi (p+|l|)!)) via lgamma to stay finite for large orders.
  const double log_ratio = std::lgamma(p + 1.0) - std::lgamma(p + abs_ell + 1.0);
  return std::sqrt(2.0 / std::numbers::pi * std::exp(log_ratio)) / w0;
}

}  // namespace

double lg_radial(LGIndex idx, double w0, double rho) {
  const int m = std::abs(idx.ell);
  const double s = rho / w0;
  const double x = 2.0 * s * s;
  const double laguerre = std::assoc_laguerre(static_cast<unsigned>(idx.p),
                                              static_cast<unsigned>(m), x);
  return normalization(m, idx.p, w0) * std::pow(std::numbers::sqrt2 * s, m) * laguerre *
         std::exp(-s * s);
}

cdouble lg_amplitude(LGIndex idx, const BeamParams& beam, double rho, double phi) {
  if (rho < 0.0) throw DomainError("lg_amplitude requires rho >= 0");
  return beam.amplitude * lg_radial(idx, beam.w0, rho) *
         std::polar(1.0, static_cast<double>(idx.ell) * phi);
}

ComplexField sample_lg(LGIndex idx, const BeamParams& beam, const GridSpec& grid) {
  check_grid_extent(grid, beam.w0, "LG");
  return ComplexField::from_function(grid, [&](double x, double y) {
    return lg_amplitude(idx, beam, std::hypot(x, y), std::atan2(y, x));
  });
}

double ring_radius(int ell, double w0) {
  if (ell == 0) throw DomainError("no ring for Gaussian (l = 0)");
  return std::sqrt(std::abs(ell) / 2.0) * w0;
}

GridSpec default_grid(double largest_waist) {
  return GridSpec::square(512, 12.0 * largest_waist);
}

}  // namespace oamtilt
