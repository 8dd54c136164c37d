#pragma once

#include <vector>

#include "oamtilt/field.hpp"
#include "oamtilt/quadrature.hpp"

namespace oamtilt {

inline constexpr int kMaxAzimuthalOrder = 24;

/// Inclusive range of azimuthal indices l'.
struct LRange {
  int lo = 0;
  int hi = 0;

  LRange() = default;
  LRange(int lo_, int hi_);
  int size() const { return hi - lo + 1; }
  int max_abs() const;
  bool contains(int ell) const { return ell >= lo && ell <= hi; }
};

enum class Normalization { raw, max_amplitude, unit_power };

const char* to_string(Normalization n);

/// Coefficients c_{l'} over a contiguous l' range, projected on
/// LG_{p'=0}^{l'} of a fixed basis waist.
class ModeSpectrum {
 public:
  ModeSpectrum(LRange range, std::vector<cdouble> coefficients, double basis_waist,
               Normalization normalization = Normalization::raw);

  LRange range() const { return range_; }
  double basis_waist() const { return basis_waist_; }
  Normalization normalization() const { return normalization_; }
  const std::vector<cdouble>& coefficients() const { return coefficients_; }
  cdouble at(int ell) const;
  double power() const;  // sum |c|^2
  double max_abs() const;
  int dominant() const;  // argmax |c|; lowest l' on ties

 private:
  LRange range_;
  std::vector<cdouble> coefficients_;
  double basis_waist_;
  Normalization normalization_;
};

struct DecomposeOptions {
  std::size_t n_radial = 128;
  std::size_t n_phi = 256;
};

/// Field resampled (8-point Lagrange) onto polar nodes, row per radius.
struct PolarSamples {
  PolarQuadrature quad;
  std::vector<cdouble> values;  // n_radial x n_phi
  cdouble at(std::size_t i, std::size_t k) const { return values[i * quad.n_phi() + k]; }
};

PolarSamples resample_polar(const ComplexField& field, const PolarQuadrature& quad);

/// c_{l'} = <LG_0^{l'}(basis_waist), field> by direct 2-D polar quadrature.
ModeSpectrum decompose(const ComplexField& field, double basis_waist, LRange range,
                       const DecomposeOptions& opts = {});

/// Same coefficients evaluated as an azimuthal DFT on each radius followed by
/// the radial overlap integral.
ModeSpectrum decompose_fourier(const ComplexField& field, double basis_waist, LRange range,
                               const DecomposeOptions& opts = {});

ModeSpectrum normalize(const ModeSpectrum& spec, Normalization mode);

/// Power fraction outside l' = ell.
double crosstalk(const ModeSpectrum& spec, int ell);

/// Largest |a - b| / (|a| + floor * max|a|) over the shared range.
double max_relative_discrepancy(const ModeSpectrum& a, const ModeSpectrum& b,
                                double floor = 1e-8);

/// True when every coefficient agrees within rel |c| + abs_floor max|c|.
bool spectra_agree(const ModeSpectrum& a, const ModeSpectrum& b, double rel,
                   double abs_floor = 1e-14);

}  // namespace oamtilt
