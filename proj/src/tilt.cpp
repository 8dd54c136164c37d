#include "oamtilt/tilt.hpp"

#include <cmath>
#include <numbers>

#include "oamtilt/errors.hpp"

namespace oamtilt {

TiltGeometry::TiltGeometry(double theta_rad) : theta(theta_rad) {
  if (!(theta >= 0.0) || !(theta < 0.5 * std::numbers::pi)) {
    throw DomainError("tilt angle must lie in [0, 90) degrees");
  }
}

TiltGeometry TiltGeometry::degrees(double theta_deg) {
  return TiltGeometry(theta_deg * std::numbers::pi / 180.0);
}

LabPoint map_plane_point(const TiltGeometry& geom, double xp, double yp) {
  return {xp, yp * std::cos(geom.theta), yp * std::sin(geom.theta)};
}

void RetrievalConfig::validate() const {
  if (!(gamma >= 0.0)) throw DomainError("decay rate gamma must be >= 0");
  if (!(storage_time >= 0.0)) throw DomainError("storage time must be >= 0");
  if (!(pulse_tau > 0.0)) throw DomainError("pulse time constant must be > 0");
  if (!(waist_ratio > 0.0)) throw DomainError("waist ratio must be > 0");
  if (reading_waist && !(*reading_waist > 0.0)) {
    throw DomainError("reading-beam waist must be > 0");
  }
}

double storage_decay(const RetrievalConfig& cfg) {
  return std::exp(-cfg.gamma * cfg.storage_time);
}

double retrieved_pulse(const RetrievalConfig& cfg, double t) {
  if (t < 0.0) throw DomainError("retrieved_pulse: t must be >= 0");
  return -std::expm1(-t / cfg.pulse_tau);
}

double effective_waist(double w0, double waist_ratio) {
  const double w1 = waist_ratio * w0;
  return w0 * w1 / std::hypot(w0, w1);
}

double retrieved_field_width(double w0, const TiltGeometry& geom, const RetrievalConfig& cfg) {
  const double w1 = cfg.waist_ratio * w0;
  const double c = std::cos(geom.theta);
  // Exponent along y' is -(y'^2)(cos^2/w0^2 + 1/w1^2 [+ cos^2/wR^2]).
  double k = c * c / (w0 * w0) + 1.0 / (w1 * w1);
  if (cfg.reading_waist) k += c * c / (*cfg.reading_waist * *cfg.reading_waist);
  return 1.0 / std::sqrt(k);
}

GridSpec default_retrieval_grid(double w0, const TiltGeometry& geom, const RetrievalConfig& cfg) {
  return default_grid(retrieved_field_width(w0, geom, cfg));
}

ComplexField synthesize_retrieved_field(int ell_in, const BeamParams& beam,
                                        const TiltGeometry& geom,
                                        const RetrievalConfig& cfg, const GridSpec& grid) {
  cfg.validate();
  check_grid_extent(grid, retrieved_field_width(beam.w0, geom, cfg), "retrieved-field");

  const double decay = storage_decay(cfg);
  const double w1 = cfg.waist_ratio * beam.w0;
  const LGIndex write_mode(ell_in, 0);
  return ComplexField::from_function(grid, [&](double xp, double yp) {
    const LabPoint r = map_plane_point(geom, xp, yp);
    const cdouble write =
        lg_amplitude(write_mode, beam, std::hypot(r.x, r.y), std::atan2(r.y, r.x));
    // W' is a real Gaussian, so its conjugate is itself.
    double envelope = std::exp(-(xp * xp + yp * yp) / (w1 * w1));
    if (cfg.reading_waist) {
      const double wr = *cfg.reading_waist;
      envelope *= std::exp(-(r.x * r.x + r.y * r.y) / (wr * wr));
    }
    return decay * envelope * write;
  });
}

}  // namespace oamtilt
