#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "oamtilt/diagnostics.hpp"
#include "oamtilt/spectrum.hpp"
#include "oamtilt/tilt.hpp"

namespace oamtilt {

/// All run parameters in CLI units (degrees, micrometers, microseconds,
/// gauss, nanometers for the wavelength, millimeters for lens geometry,
/// meters for the spiral curvature radius). Keys in config files and CLI
/// flags share the names listed in RunConfig::keys().
struct RunConfig {
  double theta_deg = 2.0;
  int ell = 1;
  double w0_um = 250.0;
  double waist_ratio = 1.4;
  std::optional<double> basis_waist_um;  // unset = auto (effective waist)
  std::size_t grid = 512;
  std::optional<double> extent_um;  // unset = 12x the largest waist
  double gamma_per_us = 0.0;
  double ts_us = 0.0;
  double tau_us = 1.0;
  std::optional<double> reading_waist_um;
  double wavelength_nm = 852.35;
  std::optional<int> lmin;  // default ell - 4
  std::optional<int> lmax;  // default ell + 10
  std::size_t n_radial = 128;
  std::size_t n_phi = 256;
  bool fig4 = false;

  std::string what = "intensity";  // intensity | phase | tilted_lens | spiral
  std::string beam = "input";      // input | retrieved
  std::optional<double> lens_fx_mm, lens_fy_mm, lens_distance_mm;
  double curvature_m = 0.5;
  std::optional<double> ref_waist_um;

  double b_gauss = 0.3;
  double g_factor = 0.25;
  int delta_m = 2;
  double tmax_us = 30.0;
  double dt_us = 0.01;

  std::string out = "-";

  static const std::vector<std::string>& keys();
  void set(const std::string& key, const std::string& value);
  void apply(const std::map<std::string, std::string>& settings);
  /// Checks every value against the owning module before any work starts.
  void validate() const;

  BeamParams beam_params() const;
  TiltGeometry tilt() const;
  RetrievalConfig retrieval() const;
  LarmorConfig larmor() const;
  LRange lrange(int ell_in) const;
  DecomposeOptions decompose_options() const;
};

struct SpectrumPoint {
  double theta_deg = 0.0;
  int ell_in = 0;
  ModeSpectrum direct;
  ModeSpectrum fourier;
  double discrepancy = 0.0;  // max relative coefficient difference
};

/// Relative tolerance between the two quadrature routes before a run is
/// declared inconsistent.
inline constexpr double kQuadratureTolerance = 1e-5;

/// Synthesize, decompose both ways, and cross-check. Throws NumericalError
/// ("quadrature inconsistency") when the routes disagree.
SpectrumPoint compute_spectrum_point(const RunConfig& cfg, int ell_in, double theta_deg);

/// Sweep points: theta in {5, 10, 15, 20} deg (outer), l in 0..3.
std::vector<SpectrumPoint> compute_fig4(const RunConfig& cfg);

/// CSV: theta_deg,ell_in,ell_prime,re,im,abs,abs_maxnorm,power_frac.
std::string spectrum_csv(const std::vector<SpectrumPoint>& points);

std::string cmd_spectrum(const RunConfig& cfg);
std::string cmd_render(const RunConfig& cfg);

struct LarmorRun {
  std::string csv;
  std::string summary;  // one line, e.g. "period_us=4.76..."
};
LarmorRun cmd_larmor(const RunConfig& cfg);

/// Orthonormality, oracle-equivalence and identity-limit checks; one line
/// per check on `log`. Returns true when all pass.
bool run_selftest(std::ostream& log);

/// OAMTILT_THREADS (0 or unset: hardware concurrency).
unsigned worker_count();

}  // namespace oamtilt
