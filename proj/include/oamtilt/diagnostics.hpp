#pragma once

#include <optional>
#include <span>
#include <vector>

#include "oamtilt/field.hpp"
#include "oamtilt/lg_basis.hpp"

namespace oamtilt {

// ---------------------------------------------------------------------------
// Tilted-lens (astigmatic) charge test
// ---------------------------------------------------------------------------

struct AstigmaticLens {
  double fx = 0.0;        // m
  double fy = 0.0;        // m
  double distance = 0.0;  // m, lens to observation plane

  void validate() const;
};

/// fy / fx of the calibrated lens.
inline constexpr double kLensAstigmatism = 0.32;

/// Lens matched to a collimated beam of the given waist: fx is the beam's
/// Rayleigh range, fy = kLensAstigmatism fx, and the distance maximizes
/// sin|Gouy_x - Gouy_y| * min(wx, wy) / max(wx, wy) from a Gaussian-beam scan.
/// With this lens a charge l > 0 yields a pattern whose principal axis lies at
/// +45 deg (x to the right, y up); l < 0 lies at -45 deg.
AstigmaticLens calibrate_lens(double waist, double wavelength);

/// Fringe-contrast figure for a Gaussian beam of the given waist (1 at an
/// ideal pi/2 mode conversion).
double lens_contrast(const AstigmaticLens& lens, double waist, double wavelength);

/// Thin astigmatic lens phase followed by angular-spectrum propagation.
/// Output grid equals input grid.
ComplexField astigmatic_transform(const ComplexField& field, const AstigmaticLens& lens,
                                  double wavelength);

/// Mirror x -> -x. A beam written in the retrieval axes but travelling along
/// -z' (the retrieved beam C) must be viewed in its own propagation frame
/// before a camera-side diagnostic.
ComplexField to_beam_frame(const ComplexField& field);

struct FringeCount {
  int count = 0;
  int orientation = 0;      // +1: principal axis in (0, 90) deg, -1: (-90, 0)
  double axis_angle = 0.0;  // rad
};

/// Dark fringes along the principal (second-moment) axis of the pattern.
FringeCount count_fringe_minima(const RealField& intensity);

// ---------------------------------------------------------------------------
// Spiral interferogram
// ---------------------------------------------------------------------------

struct SpiralReference {
  double waist = 0.0;  // m; 0 selects 2 w0
  double curvature_radius = 0.5;  // m; +-inf = flat wavefront
  cdouble amplitude{1.0, 0.0};
};

/// |LG_0^l + G exp(i pi rho^2 / (lambda R))|^2.
RealField spiral_interferogram(int ell, const BeamParams& beam, const SpiralReference& ref,
                               const GridSpec& grid);

/// Dominant azimuthal harmonic of the intensity on the ring of largest
/// modulation; 0 when no ring carries modulation.
int count_spiral_arms(const RealField& intensity);

/// Sense of the spiral: +1 or -1, equal to sign(l) sign(R) for the patterns
/// produced by spiral_interferogram. Throws when there are no arms.
int spiral_handedness(const RealField& intensity);

// ---------------------------------------------------------------------------
// Larmor precession of the stored grating
// ---------------------------------------------------------------------------

/// mu_B / h in Hz per gauss.
inline constexpr double kBohrMagnetonHzPerGauss = 1.39962449361e6;

struct LarmorConfig {
  double field_gauss = 0.3;
  double g_factor = 0.25;
  int delta_m = 2;
  double gamma = 0.0;  // 1/s
  double i0 = 1.0;

  void validate() const;
};

/// g mu_B B / hbar in rad/s.
double larmor_angular_frequency(const LarmorConfig& cfg);

/// Retrieved-amplitude factor e^{-gamma t} cos(delta_m omega_L t / 2).
double larmor_amplitude(const LarmorConfig& cfg, double t);

/// I(t) = I0 e^{-2 gamma t} cos^2(delta_m omega_L t / 2).
std::vector<double> larmor_signal(const LarmorConfig& cfg, std::span<const double> t_grid);

/// 2 pi / (delta_m omega_L).
double larmor_period(const LarmorConfig& cfg);

struct PeriodEstimate {
  std::vector<double> peak_times;
  std::vector<double> peak_values;
  std::optional<double> period;  // unset: fewer than two interior maxima
};

/// Mean spacing of the interior local maxima of a sampled signal.
PeriodEstimate estimate_period(std::span<const double> t, std::span<const double> signal);

}  // namespace oamtilt
