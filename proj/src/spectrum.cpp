#include "oamtilt/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oamtilt/errors.hpp"
#include "oamtilt/lg_basis.hpp"

namespace oamtilt {

LRange::LRange(int lo_, int hi_) : lo(lo_), hi(hi_) {
  if (lo > hi) throw DomainError("l' range is empty");
  if (max_abs() > kMaxAzimuthalOrder) {
    throw DomainError("l' range exceeds the |l'| <= " + std::to_string(kMaxAzimuthalOrder) +
                      " cap");
  }
}

int LRange::max_abs() const { return std::max(std::abs(lo), std::abs(hi)); }

const char* to_string(Normalization n) {
  switch (n) {
    case Normalization::raw: return "raw";
    case Normalization::max_amplitude: return "max_amplitude";
    case Normalization::unit_power: return "unit_power";
  }
  return "?";
}

ModeSpectrum::ModeSpectrum(LRange range, std::vector<cdouble> coefficients,
                           double basis_waist, Normalization normalization)
    : range_(range),
      coefficients_(std::move(coefficients)),
      basis_waist_(basis_waist),
      normalization_(normalization) {
  if (static_cast<int>(coefficients_.size()) != range_.size()) {
    throw StructuralError("spectrum coefficient count does not match its l' range");
  }
}

cdouble ModeSpectrum::at(int ell) const {
  if (!range_.contains(ell)) {
    throw DomainError("l' = " + std::to_string(ell) + " outside spectrum range");
  }
  return coefficients_[static_cast<std::size_t>(ell - range_.lo)];
}

double ModeSpectrum::power() const {
  double s = 0.0;
  for (const auto& c : coefficients_) s += std::norm(c);
  return s;
}

double ModeSpectrum::max_abs() const {
  double m = 0.0;
  for (const auto& c : coefficients_) m = std::max(m, std::abs(c));
  return m;
}

int ModeSpectrum::dominant() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < coefficients_.size(); ++i) {
    if (std::abs(coefficients_[i]) > std::abs(coefficients_[best])) best = i;
  }
  return range_.lo + static_cast<int>(best);
}

namespace {

PolarQuadrature quadrature_for(const ComplexField& field, double basis_waist, LRange range,
                               const DecomposeOptions& opts) {
  if (!(basis_waist > 0.0)) throw DomainError("basis waist must be > 0");
  const int lmax = range.max_abs();
  if (opts.n_phi < 4 * static_cast<std::size_t>(lmax + 1)) {
    throw DomainError("aliasing risk: n_phi = " + std::to_string(opts.n_phi) +
                      " cannot resolve azimuthal order " + std::to_string(lmax));
  }
  const GridSpec& g = field.grid();
  if (lmax > 0) {
    const double rho = ring_radius(lmax, basis_waist);
    const double per_fringe =
        2.0 * std::numbers::pi * rho / (lmax * std::max(g.dx, g.dy));
    if (per_fringe < 8.0) {
      std::ostringstream os;
      os << "aliasing risk: only " << per_fringe << " samples per fringe at l' = " << lmax
         << " (need >= 8)";
      throw DomainError(os.str());
    }
  }
  const double r_max = interpolation_safe_radius(g);
  if (r_max < 3.0 * basis_waist) {
    throw DomainError("grid truncates mode: polar quadrature radius " + std::to_string(r_max) +
                      " m is below 3x the basis waist");
  }
  return PolarQuadrature(opts.n_radial, r_max, opts.n_phi);
}

}  // namespace

PolarSamples resample_polar(const ComplexField& field, const PolarQuadrature& quad) {
  PolarSamples out{quad, std::vector<cdouble>(quad.n_radial() * quad.n_phi())};
  for (std::size_t i = 0; i < quad.n_radial(); ++i) {
    const double r = quad.radius(i);
    for (std::size_t k = 0; k < quad.n_phi(); ++k) {
      const double phi = quad.phi(k);
      out.values[i * quad.n_phi() + k] = interpolate(field, r * std::cos(phi), r * std::sin(phi));
    }
  }
  return out;
}

ModeSpectrum decompose(const ComplexField& field, double basis_waist, LRange range,
                       const DecomposeOptions& opts) {
  const PolarSamples s = resample_polar(field, quadrature_for(field, basis_waist, range, opts));
  const PolarQuadrature& q = s.quad;
  const BeamParams basis(basis_waist);

  std::vector<cdouble> coeffs;
  coeffs.reserve(static_cast<std::size_t>(range.size()));
  for (int ell = range.lo; ell <= range.hi; ++ell) {
    const LGIndex idx(ell, 0);
    cdouble acc{};
    for (std::size_t i = 0; i < q.n_radial(); ++i) {
      cdouble ring{};
      for (std::size_t k = 0; k < q.n_phi(); ++k) {
        ring += std::conj(lg_amplitude(idx, basis, q.radius(i), q.phi(k))) * s.at(i, k);
      }
      acc += ring * q.area_weight(i);
    }
    coeffs.push_back(acc);
  }
  return ModeSpectrum(range, std::move(coeffs), basis_waist);
}

ModeSpectrum decompose_fourier(const ComplexField& field, double basis_waist, LRange range,
                               const DecomposeOptions& opts) {
  const PolarSamples s = resample_polar(field, quadrature_for(field, basis_waist, range, opts));
  const PolarQuadrature& q = s.quad;
  const std::size_t n = q.n_phi();

  // Twiddles e^{-2 pi i j / n}; order m at node k uses index (m k) mod n.
  std::vector<cdouble> twiddle(n);
  for (std::size_t j = 0; j < n; ++j) {
    twiddle[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) /
                                      static_cast<double>(n));
  }

  std::vector<cdouble> coeffs(static_cast<std::size_t>(range.size()));
  for (std::size_t i = 0; i < q.n_radial(); ++i) {
    for (int ell = range.lo; ell <= range.hi; ++ell) {
      const auto m = static_cast<std::size_t>(((ell % static_cast<int>(n)) + static_cast<int>(n)) %
                                              static_cast<int>(n));
      cdouble harmonic{};
      for (std::size_t k = 0; k < n; ++k) harmonic += s.at(i, k) * twiddle[(m * k) % n];
      harmonic *= q.phi_weight();
      const double radial = lg_radial(LGIndex(ell, 0), basis_waist, q.radius(i));
      coeffs[static_cast<std::size_t>(ell - range.lo)] +=
          radial * harmonic * q.radius(i) * q.radial_weight(i);
    }
  }
  return ModeSpectrum(range, std::move(coeffs), basis_waist);
}

ModeSpectrum normalize(const ModeSpectrum& spec, Normalization mode) {
  if (mode == Normalization::raw) {
    return ModeSpectrum(spec.range(), spec.coefficients(), spec.basis_waist(), mode);
  }
  const double scale = mode == Normalization::max_amplitude ? spec.max_abs()
                                                             : std::sqrt(spec.power());
  if (!(scale > 0.0)) throw NumericalError("degenerate spectrum: all coefficients are zero");
  std::vector<cdouble> c = spec.coefficients();
  for (auto& v : c) v /= scale;
  if (mode == Normalization::max_amplitude) {
    // Pin the maximum to exactly 1 in magnitude.
    const auto it = std::max_element(c.begin(), c.end(), [](cdouble a, cdouble b) {
      return std::abs(a) < std::abs(b);
    });
    *it /= std::abs(*it);
  }
  return ModeSpectrum(spec.range(), std::move(c), spec.basis_waist(), mode);
}

double crosstalk(const ModeSpectrum& spec, int ell) {
  const double total = spec.power();
  if (!(total > 0.0)) throw NumericalError("degenerate spectrum: all coefficients are zero");
  const double own = std::norm(spec.at(ell));
  return std::clamp((total - own) / total, 0.0, 1.0);
}

double max_relative_discrepancy(const ModeSpectrum& a, const ModeSpectrum& b, double floor) {
  if (a.range().lo != b.range().lo || a.range().hi != b.range().hi) {
    throw StructuralError("spectra cover different l' ranges");
  }
  const double scale = std::max(a.max_abs(), b.max_abs());
  double worst = 0.0;
  for (int ell = a.range().lo; ell <= a.range().hi; ++ell) {
    const double d = std::abs(a.at(ell) - b.at(ell));
    const double ref = std::abs(a.at(ell)) + floor * scale;
    if (ref > 0.0) worst = std::max(worst, d / ref);
  }
  return worst;
}

bool spectra_agree(const ModeSpectrum& a, const ModeSpectrum& b, double rel, double abs_floor) {
  if (a.range().lo != b.range().lo || a.range().hi != b.range().hi) return false;
  const double scale = std::max(a.max_abs(), b.max_abs());
  for (int ell = a.range().lo; ell <= a.range().hi; ++ell) {
    const double d = std::abs(a.at(ell) - b.at(ell));
    if (d > rel * std::abs(a.at(ell)) + abs_floor * scale) return false;
  }
  return true;
}

}  // namespace oamtilt
