#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oamtilt/errors.hpp"
#include "oamtilt/lg_basis.hpp"
#include "oamtilt/tilt.hpp"

using namespace oamtilt;

namespace {

double normalized_overlap(const ComplexField& a, const ComplexField& b) {
  return std::norm(inner_product(a, b)) / (total_power(a) * total_power(b));
}

}  // namespace

TEST_CASE("plane point mapping at 2 degrees") {
  const LabPoint p = map_plane_point(TiltGeometry::degrees(2.0), 0.0, 350e-6);
  CHECK(p.x == 0.0);
  CHECK(p.y == doctest::Approx(349.79e-6).epsilon(1e-5));
  CHECK(p.z == doctest::Approx(12.21e-6).epsilon(1e-3));
  const LabPoint q = map_plane_point(TiltGeometry::degrees(30.0), 1.0, 2.0);
  CHECK(q.x == 1.0);
  CHECK(std::hypot(q.y, q.z) == doctest::Approx(2.0));
}

TEST_CASE("tilt validation") {
  CHECK_NOTHROW(TiltGeometry::degrees(0.0));
  CHECK_THROWS_AS(TiltGeometry::degrees(90.0), DomainError);
  CHECK_THROWS_AS(TiltGeometry::degrees(-1.0), DomainError);
  CHECK_THROWS_AS(TiltGeometry(std::nan("")), DomainError);
}

TEST_CASE("storage decay and retrieved pulse") {
  RetrievalConfig cfg;
  cfg.gamma = 0.1e6;
  cfg.storage_time = 4e-6;
  CHECK(storage_decay(cfg) == doctest::Approx(0.6703).epsilon(1e-4));
  CHECK(retrieved_pulse(cfg, cfg.pulse_tau) == doctest::Approx(0.6321).epsilon(1e-4));
  CHECK(retrieved_pulse(cfg, 0.0) == 0.0);
  CHECK_THROWS_AS(retrieved_pulse(cfg, -1e-9), DomainError);
  cfg.waist_ratio = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.waist_ratio = 1.4;
  cfg.gamma = -1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("effective waist and field width") {
  const double w0 = 250e-6;
  CHECK(effective_waist(w0, 1.4) == doctest::Approx(w0 * 1.4 / std::sqrt(2.96)));
  RetrievalConfig cfg;
  const double w_eff = effective_waist(w0, cfg.waist_ratio);
  CHECK(retrieved_field_width(w0, TiltGeometry(0.0), cfg) == doctest::Approx(w_eff));
  CHECK(retrieved_field_width(w0, TiltGeometry::degrees(20.0), cfg) > w_eff);
  cfg.reading_waist = 300e-6;
  CHECK(retrieved_field_width(w0, TiltGeometry(0.0), cfg) < w_eff);
}

TEST_CASE("zero tilt gives LG of the effective waist") {
  const BeamParams beam(250e-6);
  const RetrievalConfig cfg;
  const GridSpec g = default_retrieval_grid(beam.w0, TiltGeometry(0.0), cfg);
  const BeamParams eff(effective_waist(beam.w0, cfg.waist_ratio));
  for (int ell = 0; ell <= 4; ++ell) {
    const ComplexField c = synthesize_retrieved_field(ell, beam, TiltGeometry(0.0), cfg, g);
    const ComplexField lg = sample_lg(LGIndex(ell), eff, g);
    CAPTURE(ell);
    CHECK(normalized_overlap(c, lg) > 1.0 - 1e-12);
  }
}

TEST_CASE("decay scales the field uniformly") {
  const BeamParams beam(250e-6);
  const TiltGeometry geom = TiltGeometry::degrees(10.0);
  RetrievalConfig cfg;
  const GridSpec g = default_retrieval_grid(beam.w0, geom, cfg);
  const ComplexField a = synthesize_retrieved_field(2, beam, geom, cfg, g);
  cfg.gamma = 0.1e6;
  cfg.storage_time = 4e-6;
  const ComplexField b = synthesize_retrieved_field(2, beam, geom, cfg, g);
  const double k = std::exp(-0.4);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(b.samples()[i] - k * a.samples()[i]) <= 1e-14 * std::abs(a.samples()[i]));
  }
}

TEST_CASE("tilt stretches the field along y'") {
  const BeamParams beam(250e-6);
  const RetrievalConfig cfg;
  const TiltGeometry geom = TiltGeometry::degrees(20.0);
  const GridSpec g = default_retrieval_grid(beam.w0, geom, cfg);
  const ComplexField c = synthesize_retrieved_field(0, beam, geom, cfg, g);
  double sx = 0.0, sy = 0.0, tot = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double w = std::norm(c.at(ix, iy));
      sx += w * g.x(ix) * g.x(ix), sy += w * g.y(iy) * g.y(iy), tot += w;
    }
  }
  // Gaussian second moment is w^2 / 4 per axis.
  const double w0 = beam.w0, w1 = cfg.waist_ratio * w0, ct = std::cos(geom.theta);
  const double wy = 1.0 / std::sqrt(ct * ct / (w0 * w0) + 1.0 / (w1 * w1));
  CHECK(std::sqrt(4 * sx / tot) == doctest::Approx(effective_waist(w0, 1.4)).epsilon(1e-9));
  CHECK(std::sqrt(4 * sy / tot) == doctest::Approx(wy).epsilon(1e-9));
  CHECK(retrieved_field_width(w0, geom, cfg) == doctest::Approx(wy));
}

TEST_CASE("retrieved field carries the input charge") {
  const BeamParams beam(250e-6);
  const RetrievalConfig cfg;
  for (double deg : {0.0, 2.0, 10.0, 20.0}) {
    const TiltGeometry geom = TiltGeometry::degrees(deg);
    const GridSpec g = default_retrieval_grid(beam.w0, geom, cfg);
    for (int ell = -4; ell <= 4; ++ell) {
      const ComplexField c = synthesize_retrieved_field(ell, beam, geom, cfg, g);
      CAPTURE(deg);
      CAPTURE(ell);
      CHECK(winding_number(c, effective_waist(beam.w0, 1.4)) == ell);
    }
  }
}
