#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oamtilt/errors.hpp"
#include "oamtilt/lg_basis.hpp"
#include "oamtilt/spectrum.hpp"
#include "oamtilt/tilt.hpp"

using namespace oamtilt;

namespace {

constexpr double kW0 = 250e-6;

ComplexField retrieved(int ell, double deg) {
  const BeamParams beam(kW0);
  const TiltGeometry geom = TiltGeometry::degrees(deg);
  const RetrievalConfig cfg;
  return synthesize_retrieved_field(ell, beam, geom, cfg,
                                    default_retrieval_grid(kW0, geom, cfg));
}

double basis() { return effective_waist(kW0, 1.4); }

}  // namespace

TEST_CASE("known superposition is recovered by both routes") {
  const BeamParams beam(kW0);
  const GridSpec g = default_grid(kW0);
  std::mt19937 rng(42);
  std::normal_distribution<double> n01;
  std::vector<cdouble> a;
  ComplexField f(g);
  for (int l = -3; l <= 5; ++l) {
    a.emplace_back(n01(rng), n01(rng));
    f = f + a.back() * sample_lg(LGIndex(l), beam, g);
  }
  const LRange range(-6, 8);
  const ModeSpectrum d = decompose(f, kW0, range);
  const ModeSpectrum q = decompose_fourier(f, kW0, range);
  for (int l = range.lo; l <= range.hi; ++l) {
    const cdouble want = (l >= -3 && l <= 5) ? a[l + 3] : cdouble(0.0);
    CAPTURE(l);
    CHECK(std::abs(d.at(l) - want) < 1e-9);
    CHECK(std::abs(q.at(l) - want) < 1e-9);
  }
  CHECK(spectra_agree(d, q, 1e-6));
}

TEST_CASE("higher radial orders project to zero-p coefficients consistently") {
  // c_{l'} of LG(l, p) on the same waist is delta_{l l'} delta_{p 0}.
  const BeamParams beam(kW0);
  const ComplexField f = sample_lg(LGIndex(2, 1), beam, default_grid(kW0));
  const ModeSpectrum d = decompose(f, kW0, LRange(-2, 6));
  for (int l = -2; l <= 6; ++l) CHECK(std::abs(d.at(l)) < 1e-9);
}

TEST_CASE("parity: odd l' - l vanish") {
  for (double deg : {2.0, 10.0, 20.0}) {
    for (int ell = 0; ell <= 3; ++ell) {
      const ModeSpectrum s = decompose(retrieved(ell, deg), basis(), LRange(ell - 4, ell + 10));
      const double mx = s.max_abs();
      for (int l = ell - 3; l <= ell + 10; l += 2) {
        CAPTURE(deg);
        CAPTURE(l);
        CHECK(std::abs(s.at(l)) < 1e-12 * mx);
      }
    }
  }
}

TEST_CASE("identity limit at zero tilt") {
  for (int ell = 0; ell <= 4; ++ell) {
    const ModeSpectrum s = decompose(retrieved(ell, 0.0), basis(), LRange(ell - 4, ell + 10));
    CHECK(crosstalk(s, ell) < 1e-9);
    CHECK(s.dominant() == ell);
  }
}

TEST_CASE("purity degrades monotonically with tilt") {
  for (int ell = 0; ell <= 3; ++ell) {
    double prev = 1.0;
    for (double deg : {0.0, 5.0, 10.0, 15.0, 20.0}) {
      const ModeSpectrum s = decompose(retrieved(ell, deg), basis(), LRange(ell - 4, ell + 10));
      const double purity = 1.0 - crosstalk(s, ell);
      CAPTURE(ell);
      CAPTURE(deg);
      if (deg > 0.0) CHECK(purity < prev);
      prev = purity;
    }
  }
}

TEST_CASE("captured power never exceeds field power") {
  for (double deg : {0.0, 10.0, 20.0}) {
    const ComplexField f = retrieved(2, deg);
    const ModeSpectrum s = decompose(f, basis(), LRange(-12, 16));
    CHECK(s.power() <= total_power(f) * (1.0 + 1e-9));
  }
}

TEST_CASE("global phase and rotation") {
  const ComplexField f = retrieved(1, 10.0);
  const LRange range(-3, 11);
  const ModeSpectrum s = decompose(f, basis(), range);
  const cdouble phase = std::polar(1.0, 0.9);
  const ModeSpectrum r = decompose(phase * f, basis(), range);
  for (int l = range.lo; l <= range.hi; ++l) {
    CHECK(std::abs(r.at(l) - phase * s.at(l)) < 1e-12 * s.max_abs());
  }

  // Rotating a superposition by beta multiplies c_l by e^{-i l beta}.
  const BeamParams beam(kW0);
  const GridSpec g = default_grid(kW0);
  const double beta = 0.37;
  const auto field = [&](double rot) {
    return ComplexField::from_function(g, [&](double x, double y) {
      const double rho = std::hypot(x, y), phi = std::atan2(y, x) - rot;
      return lg_amplitude(LGIndex(1), beam, rho, phi) +
             0.5 * lg_amplitude(LGIndex(-2), beam, rho, phi);
    });
  };
  const ModeSpectrum a = decompose(field(0.0), kW0, LRange(-3, 3));
  const ModeSpectrum b = decompose(field(beta), kW0, LRange(-3, 3));
  for (int l = -3; l <= 3; ++l) {
    CHECK(std::abs(b.at(l) - a.at(l) * std::polar(1.0, -l * beta)) < 1e-9);
  }
}

TEST_CASE("normalization") {
  const ModeSpectrum s = decompose(retrieved(2, 15.0), basis(), LRange(-2, 12));
  const ModeSpectrum m = normalize(s, Normalization::max_amplitude);
  CHECK(m.max_abs() == 1.0);
  CHECK(m.normalization() == Normalization::max_amplitude);
  const ModeSpectrum u = normalize(s, Normalization::unit_power);
  CHECK(u.power() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(normalize(s, Normalization::raw).at(2) == s.at(2));

  const ModeSpectrum zero(LRange(0, 2), std::vector<cdouble>(3), 1.0);
  CHECK_THROWS_WITH_AS(normalize(zero, Normalization::max_amplitude),
                       doctest::Contains("degenerate spectrum"), NumericalError);
  CHECK_THROWS_AS(crosstalk(zero, 1), NumericalError);
}

TEST_CASE("the two routes agree on tilted fields") {
  for (double deg : {2.0, 5.0, 10.0, 15.0, 20.0}) {
    for (int ell = 0; ell <= 4; ++ell) {
      const ComplexField f = retrieved(ell, deg);
      const LRange range(ell - 4, ell + 10);
      const ModeSpectrum d = decompose(f, basis(), range);
      const ModeSpectrum q = decompose_fourier(f, basis(), range);
      CAPTURE(deg);
      CAPTURE(ell);
      CHECK(spectra_agree(d, q, 1e-6));
      CHECK(max_relative_discrepancy(d, q) < 1e-6);
    }
  }
}

TEST_CASE("range and sampling guards") {
  CHECK_THROWS_AS(LRange(3, 2), DomainError);
  CHECK_THROWS_AS(LRange(-kMaxAzimuthalOrder - 1, 0), DomainError);
  CHECK(LRange(-5, 3).max_abs() == 5);
  const ComplexField f = retrieved(1, 2.0);
  CHECK_THROWS_WITH_AS(decompose(f, basis(), LRange(-20, 20), {128, 64}),
                       doctest::Contains("aliasing risk"), DomainError);
  CHECK_THROWS_WITH_AS(decompose(f, 10 * basis(), LRange(0, 2)),
                       doctest::Contains("grid truncates mode"), DomainError);
  CHECK_THROWS_AS(decompose(f, 0.0, LRange(0, 2)), DomainError);
  CHECK_THROWS_AS(ModeSpectrum(LRange(0, 2), std::vector<cdouble>(2), 1.0), StructuralError);
  const ModeSpectrum s = decompose(f, basis(), LRange(0, 2));
  CHECK_THROWS_AS(s.at(3), DomainError);
}

TEST_CASE("discrepancy metrics") {
  const ModeSpectrum a(LRange(0, 1), {cdouble(1.0), cdouble(0.0)}, 1.0);
  const ModeSpectrum b(LRange(0, 1), {cdouble(1.0 + 1e-7), cdouble(1e-16)}, 1.0);
  CHECK(spectra_agree(a, b, 1e-6));
  CHECK_FALSE(spectra_agree(a, b, 1e-8));
  CHECK(max_relative_discrepancy(a, b) == doctest::Approx(1e-7).epsilon(1e-3));
  const ModeSpectrum c(LRange(0, 2), std::vector<cdouble>(3, 1.0), 1.0);
  CHECK_FALSE(spectra_agree(a, c, 1e-6));
  CHECK_THROWS_AS(max_relative_discrepancy(a, c), StructuralError);
}
