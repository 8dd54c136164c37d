#pragma once

#include <optional>

#include "oamtilt/field.hpp"
#include "oamtilt/lg_basis.hpp"

namespace oamtilt {

/// Retrieval axis z' is the write axis z rotated by theta about x.
struct TiltGeometry {
  double theta = 0.0;  // rad, [0, pi/2)

  TiltGeometry() = default;
  explicit TiltGeometry(double theta_rad);
  static TiltGeometry degrees(double theta_deg);
};

struct LabPoint {
  double x, y, z;
};

/// Lab-frame position of the retrieval-plane point (x', y', z' = 0).
LabPoint map_plane_point(const TiltGeometry& geom, double xp, double yp);

struct RetrievalConfig {
  double gamma = 0.0;        // 1/s, ground-state coherence decay
  double storage_time = 0.0; // s
  double pulse_tau = 1e-6;   // s, rise time of the default g_R(t)
  double waist_ratio = 1.4;  // w_{W'} / w_W
  /// Finite reading-beam waist (m); unset means a uniform plane wave.
  std::optional<double> reading_waist;

  void validate() const;
};

/// e^{-gamma t_s}.
double storage_decay(const RetrievalConfig& cfg);

/// Retrieved pulse envelope g_R(t) = 1 - e^{-t/tau}, t from reading turn-on.
double retrieved_pulse(const RetrievalConfig& cfg, double t);

/// w0 w1 / sqrt(w0^2 + w1^2) with w1 = ratio * w0: the waist of the product
/// LG(w0) x Gaussian(w1) at zero tilt.
double effective_waist(double w0, double waist_ratio);

/// Largest 1/e half-width of the synthesized field on the retrieval plane
/// (the y' direction, which the tilt stretches).
double retrieved_field_width(double w0, const TiltGeometry& geom, const RetrievalConfig& cfg);

GridSpec default_retrieval_grid(double w0, const TiltGeometry& geom, const RetrievalConfig& cfg);

/// Envelope of the retrieved beam C on the plane z' = 0:
///   E_C(x', y') = e^{-gamma t_s} E_W(x', y' cos theta) conj(E_W'(x', y')) [E_R]
/// with E_W = LG(ell_in, p = 0) of waist beam.w0 and E_W' a unit-peak Gaussian of
/// waist waist_ratio * w0. Plane-wave phases cancel by phase matching.
ComplexField synthesize_retrieved_field(int ell_in, const BeamParams& beam,
                                        const TiltGeometry& geom,
                                        const RetrievalConfig& cfg, const GridSpec& grid);

}  // namespace oamtilt
