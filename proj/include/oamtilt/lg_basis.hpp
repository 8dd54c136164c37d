#pragma once

#include "oamtilt/field.hpp"

namespace oamtilt {

struct LGIndex {
  int ell = 0;  // topological charge, any sign
  int p = 0;    // radial index, >= 0

  LGIndex() = default;
  LGIndex(int ell_, int p_ = 0);
};

/// Cs D2 line; only diagnostics that propagate a field use it.
inline constexpr double kDefaultWavelength = 852.35e-9;

struct BeamParams {
  double w0 = 250e-6;  // m
  cdouble amplitude{1.0, 0.0};
  double wavelength = kDefaultWavelength;

  BeamParams() = default;
  BeamParams(double w0_, cdouble amplitude_ = {1.0, 0.0},
             double wavelength_ = kDefaultWavelength);
};

/// Waist-plane Laguerre-Gaussian envelope, unit L2 norm times `amplitude`:
///   N (rho sqrt2 / w0)^|l| L_p^|l|(2 rho^2/w0^2) exp(-rho^2/w0^2) exp(i l phi),
///   N = sqrt(2 p! / (pi (p+|l|)!)) / w0.
cdouble lg_amplitude(LGIndex idx, const BeamParams& beam, double rho, double phi);

/// Real radial factor of lg_amplitude for unit amplitude (no e^{i l phi}).
double lg_radial(LGIndex idx, double w0, double rho);

/// Sample on the grid. Throws "grid truncates mode" below 4x w0 extent.
ComplexField sample_lg(LGIndex idx, const BeamParams& beam, const GridSpec& grid);

/// Radius of maximal intensity of LG(l, p=0): sqrt(|l|/2) w0.
double ring_radius(int ell, double w0);

/// 512 x 512 samples over 12 waists.
GridSpec default_grid(double largest_waist);

}  // namespace oamtilt
