#include "oamtilt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "oamtilt/errors.hpp"
#include "oamtilt/fft.hpp"

namespace oamtilt {

namespace {

constexpr double kPi = std::numbers::pi;

struct AxisBeam {
  double width;
  double gouy;  // accumulated from the lens plane
};

// Collimated Gaussian of the given waist at the lens, focal length f, observed
// a distance d behind the lens (one transverse axis).
AxisBeam propagate_axis(double waist, double wavelength, double f, double d) {
  const double z_r = kPi * waist * waist / wavelength;
  const cdouble q0(0.0, z_r);
  const cdouble q1 = 1.0 / (1.0 / q0 - 1.0 / f);
  const cdouble q = q1 + d;
  const double width = std::sqrt(-wavelength / (kPi * (1.0 / q).imag()));
  return {width, std::arg(q1) - std::arg(q)};
}

double contrast_at(double waist, double wavelength, double fx, double fy, double d) {
  const AxisBeam bx = propagate_axis(waist, wavelength, fx, d);
  const AxisBeam by = propagate_axis(waist, wavelength, fy, d);
  return std::abs(std::sin(bx.gouy - by.gouy)) * std::min(bx.width, by.width) /
         std::max(bx.width, by.width);
}

}  // namespace

void AstigmaticLens::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw DomainError("lens focal lengths must be > 0");
  if (!(distance > 0.0)) throw DomainError("propagation distance must be > 0");
}

double lens_contrast(const AstigmaticLens& lens, double waist, double wavelength) {
  return contrast_at(waist, wavelength, lens.fx, lens.fy, lens.distance);
}

AstigmaticLens calibrate_lens(double waist, double wavelength) {
  if (!(waist > 0.0) || !(wavelength > 0.0)) {
    throw DomainError("lens calibration needs positive waist and wavelength");
  }
  AstigmaticLens lens;
  lens.fx = kPi * waist * waist / wavelength;
  lens.fy = kLensAstigmatism * lens.fx;

  // Coarse scan then golden-section refinement around the best sample.
  constexpr int kSteps = 2000;
  const double d_max = 2.0 * lens.fx;
  const double step = d_max / kSteps;
  int best = 1;
  double best_score = -1.0;
  for (int i = 1; i <= kSteps; ++i) {
    const double s = contrast_at(waist, wavelength, lens.fx, lens.fy, i * step);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  double a = (best - 1) * step;
  double b = (best + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80; ++it) {
    const double c = b - inv_phi * (b - a);
    const double d = a + inv_phi * (b - a);
    if (contrast_at(waist, wavelength, lens.fx, lens.fy, c) >
        contrast_at(waist, wavelength, lens.fx, lens.fy, d)) {
      b = d;
    } else {
      a = c;
    }
  }
  lens.distance = 0.5 * (a + b);
  return lens;
}

ComplexField astigmatic_transform(const ComplexField& field, const AstigmaticLens& lens,
                                  double wavelength) {
  lens.validate();
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be > 0");
  const GridSpec& g = field.grid();

  // The lens chirp must stay below Nyquist at the grid edge: n >= L^2 / (lambda f).
  const auto required = [&](std::size_t n, double pitch, double f) {
    const double extent = static_cast<double>(n) * pitch;
    return static_cast<std::size_t>(std::ceil(extent * extent / (wavelength * f)));
  };
  const std::size_t need_x = required(g.nx, g.dx, lens.fx);
  const std::size_t need_y = required(g.ny, g.dy, lens.fy);
  if (need_x > g.nx || need_y > g.ny) {
    std::ostringstream os;
    os << "Fresnel aliasing: lens phase undersampled; required minimum grid size "
       << std::max(need_x, g.nx) << "x" << std::max(need_y, g.ny) << " at the same extent";
    throw DomainError(os.str());
  }

  const double k = 2.0 * kPi / wavelength;
  std::vector<cdouble> data(field.samples().begin(), field.samples().end());
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    const double y = g.y(iy);
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double x = g.x(ix);
      const double lens_phase = -0.5 * k * (x * x / lens.fx + y * y / lens.fy);
      data[iy * g.nx + ix] *= std::polar(1.0, lens_phase);
    }
  }

  Fft2D fft(g.nx, g.ny);
  fft.forward(data);
  const auto wavenumber = [](std::size_t j, std::size_t n, double pitch) {
    const auto sj = static_cast<double>(j < (n + 1) / 2 ? static_cast<std::ptrdiff_t>(j)
                                                        : static_cast<std::ptrdiff_t>(j) -
                                                              static_cast<std::ptrdiff_t>(n));
    return 2.0 * kPi * sj / (static_cast<double>(n) * pitch);
  };
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    const double ky = wavenumber(iy, g.ny, g.dy);
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double kx = wavenumber(ix, g.nx, g.dx);
      const double kt2 = kx * kx + ky * ky;
      cdouble h;
      if (kt2 < k * k) {
        // exp(i d (kz - k)); the common exp(i k d) is dropped.
        const double kz = std::sqrt(k * k - kt2);
        h = std::polar(1.0, -lens.distance * kt2 / (k + kz));
      } else {
        h = std::exp(-lens.distance * std::sqrt(kt2 - k * k)) *
            std::polar(1.0, -lens.distance * k);
      }
      data[iy * g.nx + ix] *= h;
    }
  }
  fft.inverse(data);

  ComplexField out(g, std::move(data));

  // Light reaching the border band has wrapped (or is about to).
  const std::size_t band = std::max<std::size_t>(4, std::min(g.nx, g.ny) / 64);
  double border = 0.0;
  double total = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double p = std::norm(out.at(ix, iy));
      total += p;
      if (ix < band || iy < band || ix >= g.nx - band || iy >= g.ny - band) border += p;
    }
  }
  if (total > 0.0 && border > 1e-6 * total) {
    std::ostringstream os;
    os << "Fresnel aliasing: " << border / total
       << " of the power reaches the grid border; required minimum grid size " << 2 * g.nx
       << "x" << 2 * g.ny << " at the same pitch";
    throw DomainError(os.str());
  }
  return out;
}

ComplexField to_beam_frame(const ComplexField& field) {
  const GridSpec& g = field.grid();
  GridSpec mirrored = g;
  mirrored.origin_x = -g.origin_x;
  ComplexField out(mirrored);
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      out.at(ix, iy) = field.at(g.nx - 1 - ix, iy);
    }
  }
  return out;
}

FringeCount count_fringe_minima(const RealField& intensity) {
  const GridSpec& g = intensity.grid();
  const auto s = intensity.samples();
  const auto [mn, mx] = std::minmax_element(s.begin(), s.end());
  if (!(*mx > 0.0) || (*mx - *mn) <= 1e-12 * *mx) {
    throw NumericalError("no pattern: intensity is flat");
  }

  double m0 = 0.0, mx1 = 0.0, my1 = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double v = std::max(0.0, intensity.at(ix, iy));
      m0 += v;
      mx1 += v * g.x(ix);
      my1 += v * g.y(iy);
    }
  }
  const double cx = mx1 / m0;
  const double cy = my1 / m0;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double v = std::max(0.0, intensity.at(ix, iy));
      const double ddx = g.x(ix) - cx;
      const double ddy = g.y(iy) - cy;
      sxx += v * ddx * ddx;
      syy += v * ddy * ddy;
      sxy += v * ddx * ddy;
    }
  }
  sxx /= m0;
  syy /= m0;
  sxy /= m0;
  const double spread = std::hypot(sxx - syy, 2.0 * sxy);
  if (spread < 1e-3 * (sxx + syy)) {
    throw NumericalError("no pattern: isotropic intensity, principal axis undefined");
  }
  const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  const double major = 0.5 * (sxx + syy + spread);

  const double ux = std::cos(angle);
  const double uy = std::sin(angle);
  // Keep the 8-point stencil inside the grid along the whole profile.
  const double lim_x = (0.5 * static_cast<double>(g.nx - 1) - 4.5) * g.dx;
  const double lim_y = (0.5 * static_cast<double>(g.ny - 1) - 4.5) * g.dy;
  double t_max = 4.0 * std::sqrt(major);
  const auto inside = [&](double t) {
    return std::abs(cx + t * ux - g.origin_x) <= lim_x &&
           std::abs(cy + t * uy - g.origin_y) <= lim_y;
  };
  while (t_max > 0.0 && !(inside(t_max) && inside(-t_max))) t_max *= 0.95;

  constexpr int kSamples = 1201;
  std::vector<double> profile(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const double t = -t_max + 2.0 * t_max * i / (kSamples - 1);
    profile[static_cast<std::size_t>(i)] = interpolate(intensity, cx + t * ux, cy + t * uy);
  }

  // Alternating extrema with a fixed prominence (peak detection with
  // hysteresis): a minimum counts only between two registered maxima.
  const double peak = *std::max_element(profile.begin(), profile.end());
  const double delta = 0.1 * peak;
  std::vector<int> kinds;  // +1 max, -1 min
  bool seeking_max = true;
  double cur_max = -std::numeric_limits<double>::infinity();
  double cur_min = std::numeric_limits<double>::infinity();
  for (double v : profile) {
    cur_max = std::max(cur_max, v);
    cur_min = std::min(cur_min, v);
    if (seeking_max) {
      if (v < cur_max - delta) {
        kinds.push_back(+1);
        seeking_max = false;
        cur_min = v;
      }
    } else if (v > cur_min + delta) {
      kinds.push_back(-1);
      seeking_max = true;
      cur_max = v;
    }
  }
  int minima = 0;
  int maxima_seen = 0;
  int pending = 0;
  for (int kind : kinds) {
    if (kind > 0) {
      if (maxima_seen > 0) minima += pending;
      pending = 0;
      ++maxima_seen;
    } else if (maxima_seen > 0) {
      pending = 1;
    }
  }
  return {minima, angle > 0.0 ? +1 : -1, angle};
}

RealField spiral_interferogram(int ell, const BeamParams& beam, const SpiralReference& ref,
                               const GridSpec& grid) {
  const double radius = ref.curvature_radius;
  if (radius == 0.0 || std::isnan(radius)) {
    throw DomainError("reference curvature radius must be nonzero");
  }
  if (std::isinf(radius) && ell != 0) {
    throw DomainError("degenerate fringes: concentric rings require l = 0");
  }
  const double ref_waist = ref.waist > 0.0 ? ref.waist : 2.0 * beam.w0;
  check_grid_extent(grid, std::max(beam.w0, ref_waist), "interferogram");
  const BeamParams ref_beam(ref_waist, ref.amplitude, beam.wavelength);
  const double curvature = std::isinf(radius) ? 0.0 : kPi / (beam.wavelength * radius);

  RealField out(grid);
  for (std::size_t iy = 0; iy < grid.ny; ++iy) {
    const double y = grid.y(iy);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const double x = grid.x(ix);
      const double rho = std::hypot(x, y);
      const double phi = std::atan2(y, x);
      const cdouble lg = lg_amplitude(LGIndex(ell, 0), beam, rho, phi);
      const cdouble g = lg_amplitude(LGIndex(0, 0), ref_beam, rho, 0.0) *
                        std::polar(1.0, curvature * rho * rho);
      out.at(ix, iy) = std::norm(lg + g);
    }
  }
  return out;
}

namespace {

constexpr std::size_t kRingSamples = 256;
constexpr int kMaxArms = 32;

std::vector<cdouble> ring_harmonics(const RealField& f, double r) {
  std::vector<double> ring(kRingSamples);
  for (std::size_t k = 0; k < kRingSamples; ++k) {
    const double phi = 2.0 * kPi * static_cast<double>(k) / kRingSamples;
    ring[k] = interpolate(f, r * std::cos(phi), r * std::sin(phi));
  }
  std::vector<cdouble> c(kMaxArms + 1);
  for (int m = 0; m <= kMaxArms; ++m) {
    cdouble acc{};
    for (std::size_t k = 0; k < kRingSamples; ++k) {
      const double phi = 2.0 * kPi * static_cast<double>(k) / kRingSamples;
      acc += ring[k] * std::polar(1.0, -m * phi);
    }
    c[static_cast<std::size_t>(m)] = acc / static_cast<double>(kRingSamples);
  }
  return c;
}

struct RingAnalysis {
  int arms = 0;
  double radius = 0.0;
  double step = 0.0;
};

RingAnalysis analyze_rings(const RealField& f) {
  const GridSpec& g = f.grid();
  const double h = std::max(g.dx, g.dy);
  const double r_max = interpolation_safe_radius(g);
  RingAnalysis best;
  best.step = h;
  double best_mod = 0.0;
  int best_m = 0;
  double max_mean = 0.0;
  for (double r = 3.0 * h; r <= r_max; r += h) {
    const auto c = ring_harmonics(f, r);
    max_mean = std::max(max_mean, std::abs(c[0]));
    for (int m = 1; m <= kMaxArms; ++m) {
      const double a = std::abs(c[static_cast<std::size_t>(m)]);
      if (a > best_mod) {
        best_mod = a;
        best_m = m;
        best.radius = r;
      }
    }
  }
  if (best_mod > 1e-3 * max_mean) best.arms = best_m;
  return best;
}

}  // namespace

int count_spiral_arms(const RealField& intensity) { return analyze_rings(intensity).arms; }

int spiral_handedness(const RealField& intensity) {
  const RingAnalysis a = analyze_rings(intensity);
  if (a.arms == 0) throw NumericalError("no spiral arms: handedness undefined");
  const double r_max = interpolation_safe_radius(intensity.grid());
  const double inner = std::max(3.0 * a.step, a.radius - 2.0 * a.step);
  const double outer = std::min(r_max, a.radius + 2.0 * a.step);
  const auto m = static_cast<std::size_t>(a.arms);
  const double turn = std::arg(ring_harmonics(intensity, outer)[m]) -
                      std::arg(ring_harmonics(intensity, inner)[m]);
  // Arms sit where the harmonic phase vanishes; a phase decreasing outward
  // means the arms advance counter-clockwise with radius.
  return std::remainder(turn, 2.0 * kPi) < 0.0 ? +1 : -1;
}

void LarmorConfig::validate() const {
  if (!(field_gauss >= 0.0)) throw DomainError("magnetic field must be >= 0");
  if (delta_m != 1 && delta_m != 2) throw DomainError("delta_m must be 1 or 2");
  if (!(gamma >= 0.0)) throw DomainError("Larmor decay rate must be >= 0");
  if (!std::isfinite(g_factor)) throw DomainError("g factor must be finite");
}

double larmor_angular_frequency(const LarmorConfig& cfg) {
  return 2.0 * kPi * kBohrMagnetonHzPerGauss * cfg.g_factor * cfg.field_gauss;
}

double larmor_amplitude(const LarmorConfig& cfg, double t) {
  return std::exp(-cfg.gamma * t) *
         std::cos(0.5 * cfg.delta_m * larmor_angular_frequency(cfg) * t);
}

std::vector<double> larmor_signal(const LarmorConfig& cfg, std::span<const double> t_grid) {
  cfg.validate();
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (t < 0.0) throw DomainError("Larmor time grid must be nonnegative");
    if (i > 0 && !(t > t_grid[i - 1])) throw DomainError("Larmor time grid must increase");
    const double c = std::cos(0.5 * cfg.delta_m * larmor_angular_frequency(cfg) * t);
    out.push_back(cfg.i0 * std::exp(-2.0 * cfg.gamma * t) * c * c);
  }
  return out;
}

double larmor_period(const LarmorConfig& cfg) {
  cfg.validate();
  if (!(cfg.field_gauss > 0.0)) throw DomainError("no precession: magnetic field is zero");
  return 2.0 * kPi / (cfg.delta_m * std::abs(larmor_angular_frequency(cfg)));
}

PeriodEstimate estimate_period(std::span<const double> t, std::span<const double> signal) {
  if (t.size() != signal.size()) throw StructuralError("time and signal lengths differ");
  PeriodEstimate est;
  const double top = signal.empty() ? 0.0 : *std::max_element(signal.begin(), signal.end());
  const double bottom = signal.empty() ? 0.0 : *std::min_element(signal.begin(), signal.end());
  if (signal.size() < 3 || top - bottom <= 1e-12 * std::abs(top)) return est;
  for (std::size_t i = 1; i + 1 < signal.size(); ++i) {
    if (signal[i] > signal[i - 1] && signal[i] >= signal[i + 1]) {
      // Parabolic refinement through the three samples.
      const double a = signal[i - 1], b = signal[i], c = signal[i + 1];
      const double denom = a - 2.0 * b + c;
      const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
      const double dt = 0.5 * (t[i + 1] - t[i - 1]);
      est.peak_times.push_back(t[i] + shift * dt);
      est.peak_values.push_back(b);
    }
  }
  if (est.peak_times.size() >= 2) {
    est.period = (est.peak_times.back() - est.peak_times.front()) /
                 static_cast<double>(est.peak_times.size() - 1);
  }
  return est;
}

}  // namespace oamtilt
