#include "oamtilt/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "oamtilt/errors.hpp"
#include "oamtilt/io.hpp"
#include "oamtilt/lg_basis.hpp"

namespace oamtilt {

namespace {

constexpr double kUm = 1e-6;
constexpr double kMm = 1e-3;

std::optional<double> parse_auto(const std::string& value, const std::string& key) {
  if (value == "auto") return std::nullopt;
  return parse_double(value, key);
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + value + "'");
}

std::size_t parse_count(const std::string& value, const std::string& key) {
  const long v = parse_int(value, key);
  if (v <= 0) throw ConfigError(key + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "theta",   "ell",        "w0",        "waist_ratio", "basis_waist", "grid",
      "extent",  "gamma",      "ts",        "tau",         "reading_waist", "wavelength",
      "lmin",    "lmax",       "n_radial",  "n_phi",       "fig4",        "what",
      "beam",    "lens_fx",    "lens_fy",   "lens_distance", "curvature", "ref_waist",
      "B",       "g_factor",   "delta_m",   "tmax",        "dt",          "out"};
  return k;
}

void RunConfig::set(const std::string& raw_key, const std::string& value) {
  std::string key = raw_key;
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "ell_in") key = "ell";
  else if (key == "t_s") key = "ts";
  else if (key == "basis_waist_mode") key = "basis_waist";
  if (key == "theta") theta_deg = parse_double(value, key);
  else if (key == "ell") ell = static_cast<int>(parse_int(value, key));
  else if (key == "w0") w0_um = parse_double(value, key);
  else if (key == "waist_ratio") waist_ratio = parse_double(value, key);
  else if (key == "basis_waist") basis_waist_um = parse_auto(value, key);
  else if (key == "grid") grid = parse_count(value, key);
  else if (key == "extent") extent_um = parse_auto(value, key);
  else if (key == "gamma") gamma_per_us = parse_double(value, key);
  else if (key == "ts") ts_us = parse_double(value, key);
  else if (key == "tau") tau_us = parse_double(value, key);
  else if (key == "reading_waist") {
    reading_waist_um = value == "none" ? std::nullopt : parse_auto(value, key);
  } else if (key == "wavelength") wavelength_nm = parse_double(value, key);
  else if (key == "lmin") lmin = static_cast<int>(parse_int(value, key));
  else if (key == "lmax") lmax = static_cast<int>(parse_int(value, key));
  else if (key == "n_radial") n_radial = parse_count(value, key);
  else if (key == "n_phi") n_phi = parse_count(value, key);
  else if (key == "fig4") fig4 = parse_bool(value, key);
  else if (key == "what") what = value;
  else if (key == "beam") beam = value;
  else if (key == "lens_fx") lens_fx_mm = parse_auto(value, key);
  else if (key == "lens_fy") lens_fy_mm = parse_auto(value, key);
  else if (key == "lens_distance") lens_distance_mm = parse_auto(value, key);
  else if (key == "curvature") curvature_m = parse_double(value, key);
  else if (key == "ref_waist") ref_waist_um = parse_auto(value, key);
  else if (key == "B") b_gauss = parse_double(value, key);
  else if (key == "g_factor") g_factor = parse_double(value, key);
  else if (key == "delta_m") delta_m = static_cast<int>(parse_int(value, key));
  else if (key == "tmax") tmax_us = parse_double(value, key);
  else if (key == "dt") dt_us = parse_double(value, key);
  else if (key == "out") out = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

void RunConfig::apply(const std::map<std::string, std::string>& settings) {
  for (const auto& [k, v] : settings) set(k, v);
}

BeamParams RunConfig::beam_params() const {
  return BeamParams(w0_um * kUm, {1.0, 0.0}, wavelength_nm * 1e-9);
}

TiltGeometry RunConfig::tilt() const { return TiltGeometry::degrees(theta_deg); }

RetrievalConfig RunConfig::retrieval() const {
  RetrievalConfig r;
  r.gamma = gamma_per_us / kUm;
  r.storage_time = ts_us * kUm;
  r.pulse_tau = tau_us * kUm;
  r.waist_ratio = waist_ratio;
  if (reading_waist_um) r.reading_waist = *reading_waist_um * kUm;
  return r;
}

LarmorConfig RunConfig::larmor() const {
  LarmorConfig l;
  l.field_gauss = b_gauss;
  l.g_factor = g_factor;
  l.delta_m = delta_m;
  l.gamma = gamma_per_us / kUm;
  return l;
}

LRange RunConfig::lrange(int ell_in) const {
  return LRange(lmin.value_or(ell_in - 4), lmax.value_or(ell_in + 10));
}

DecomposeOptions RunConfig::decompose_options() const { return {n_radial, n_phi}; }

void RunConfig::validate() const {
  const auto positive = [](std::optional<double> v, const char* name) {
    if (v && !(*v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
  };
  (void)beam_params();
  (void)tilt();
  retrieval().validate();
  larmor().validate();
  if (fig4) {
    for (int l = 0; l <= 3; ++l) (void)lrange(l);
  } else {
    (void)lrange(ell);
  }
  positive(basis_waist_um, "basis_waist");
  positive(extent_um, "extent");
  positive(lens_fx_mm, "lens_fx");
  positive(lens_fy_mm, "lens_fy");
  positive(lens_distance_mm, "lens_distance");
  positive(ref_waist_um, "ref_waist");
  if (grid < 16) throw ConfigError("grid must have at least 16 samples per side");
  if (n_radial < 8) throw ConfigError("n_radial must be >= 8");
  if (curvature_m == 0.0 || std::isnan(curvature_m)) {
    throw ConfigError("curvature must be nonzero (use inf for a flat reference)");
  }
  if (!(tmax_us > 0.0) || !(dt_us > 0.0) || dt_us > tmax_us) {
    throw ConfigError("Larmor time grid needs 0 < dt <= tmax");
  }
  static const char* whats[] = {"intensity", "phase", "tilted_lens", "spiral"};
  if (std::find(std::begin(whats), std::end(whats), what) == std::end(whats)) {
    throw ConfigError("what must be one of intensity, phase, tilted_lens, spiral");
  }
  if (beam != "input" && beam != "retrieved") {
    throw ConfigError("beam must be input or retrieved");
  }
  if (out.empty()) throw ConfigError("output path is empty");
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OAMTILT_THREADS")) {
    const long v = parse_int(env, "OAMTILT_THREADS");
    if (v < 0) throw ConfigError("OAMTILT_THREADS must be >= 0");
    if (v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

namespace {

GridSpec retrieval_grid(const RunConfig& cfg, const TiltGeometry& geom,
                        const RetrievalConfig& rcfg) {
  if (cfg.extent_um) return GridSpec::square(cfg.grid, *cfg.extent_um * kUm);
  const double width = retrieved_field_width(cfg.w0_um * kUm, geom, rcfg);
  return GridSpec::square(cfg.grid, 12.0 * width);
}

GridSpec input_grid(const RunConfig& cfg, double largest_waist) {
  if (cfg.extent_um) return GridSpec::square(cfg.grid, *cfg.extent_um * kUm);
  return GridSpec::square(cfg.grid, 12.0 * largest_waist);
}

}  // namespace

SpectrumPoint compute_spectrum_point(const RunConfig& cfg, int ell_in, double theta_deg) {
  RunConfig local = cfg;
  local.theta_deg = theta_deg;
  const BeamParams beam = local.beam_params();
  const TiltGeometry geom = local.tilt();
  const RetrievalConfig rcfg = local.retrieval();
  const GridSpec grid = retrieval_grid(local, geom, rcfg);
  const double basis = local.basis_waist_um ? *local.basis_waist_um * kUm
                                            : effective_waist(beam.w0, rcfg.waist_ratio);
  const LRange range = local.lrange(ell_in);

  const ComplexField field = synthesize_retrieved_field(ell_in, beam, geom, rcfg, grid);
  ModeSpectrum direct = decompose(field, basis, range, local.decompose_options());
  ModeSpectrum fourier = decompose_fourier(field, basis, range, local.decompose_options());

  if (!spectra_agree(direct, fourier, kQuadratureTolerance)) {
    int worst = range.lo;
    double worst_d = -1.0;
    for (int l = range.lo; l <= range.hi; ++l) {
      const double d = std::abs(direct.at(l) - fourier.at(l));
      if (d > worst_d) worst_d = d, worst = l;
    }
    std::ostringstream os;
    os.precision(17);
    os << "quadrature inconsistency at theta=" << theta_deg << " ell=" << ell_in
       << " l'=" << worst << ": direct=" << direct.at(worst) << " fourier=" << fourier.at(worst);
    throw NumericalError(os.str());
  }
  const double disc = max_relative_discrepancy(direct, fourier);
  return {theta_deg, ell_in, std::move(direct), std::move(fourier), disc};
}

std::vector<SpectrumPoint> compute_fig4(const RunConfig& cfg) {
  struct Job {
    double theta;
    int ell;
  };
  std::vector<Job> jobs;
  for (double theta : {5.0, 10.0, 15.0, 20.0}) {
    for (int ell = 0; ell <= 3; ++ell) jobs.push_back({theta, ell});
  }
  std::vector<std::optional<SpectrumPoint>> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = compute_spectrum_point(cfg, jobs[i].ell, jobs[i].theta);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<unsigned>(worker_count(), static_cast<unsigned>(jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
    work();
  }
  std::vector<SpectrumPoint> out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

std::string spectrum_csv(const std::vector<SpectrumPoint>& points) {
  std::string csv = "theta_deg,ell_in,ell_prime,re,im,abs,abs_maxnorm,power_frac\n";
  for (const auto& p : points) {
    const ModeSpectrum& s = p.direct;
    const double mx = s.max_abs();
    const double total = s.power();
    for (int l = s.range().lo; l <= s.range().hi; ++l) {
      const cdouble c = s.at(l);
      csv += format_double(p.theta_deg) + ',' + std::to_string(p.ell_in) + ',' +
             std::to_string(l) + ',' + format_double(c.real()) + ',' + format_double(c.imag()) +
             ',' + format_double(std::abs(c)) + ',' +
             format_double(mx > 0.0 ? std::abs(c) / mx : 0.0) + ',' +
             format_double(total > 0.0 ? std::norm(c) / total : 0.0) + '\n';
    }
  }
  return csv;
}

std::string cmd_spectrum(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.fig4) return spectrum_csv(compute_fig4(cfg));
  return spectrum_csv({compute_spectrum_point(cfg, cfg.ell, cfg.theta_deg)});
}

std::string cmd_render(const RunConfig& cfg) {
  cfg.validate();
  const BeamParams beam = cfg.beam_params();
  const bool retrieved = cfg.beam == "retrieved";

  if (cfg.what == "spiral") {
    if (retrieved) throw ConfigError("spiral interferogram is defined for the input beam only");
    SpiralReference ref;
    ref.curvature_radius = cfg.curvature_m;
    ref.waist = cfg.ref_waist_um ? *cfg.ref_waist_um * kUm : 2.0 * beam.w0;
    const GridSpec grid = input_grid(cfg, std::max(beam.w0, ref.waist));
    return encode_pgm(spiral_interferogram(cfg.ell, beam, ref, grid), PgmScale::linear_max);
  }

  ComplexField field;
  double waist = beam.w0;
  if (retrieved) {
    const TiltGeometry geom = cfg.tilt();
    const RetrievalConfig rcfg = cfg.retrieval();
    field = synthesize_retrieved_field(cfg.ell, beam, geom, rcfg,
                                       retrieval_grid(cfg, geom, rcfg));
    waist = effective_waist(beam.w0, rcfg.waist_ratio);
  } else {
    field = sample_lg(LGIndex(cfg.ell, 0), beam, input_grid(cfg, beam.w0));
  }

  if (cfg.what == "phase") return encode_pgm(phase(field), PgmScale::phase);
  if (cfg.what == "intensity") return encode_pgm(intensity(field), PgmScale::linear_max);

  AstigmaticLens lens = calibrate_lens(waist, beam.wavelength);
  if (cfg.lens_fx_mm) lens.fx = *cfg.lens_fx_mm * kMm;
  if (cfg.lens_fy_mm) lens.fy = *cfg.lens_fy_mm * kMm;
  if (cfg.lens_distance_mm) lens.distance = *cfg.lens_distance_mm * kMm;
  if (retrieved) field = to_beam_frame(field);
  return encode_pgm(intensity(astigmatic_transform(field, lens, beam.wavelength)),
                    PgmScale::linear_max);
}

LarmorRun cmd_larmor(const RunConfig& cfg) {
  cfg.validate();
  const LarmorConfig lc = cfg.larmor();
  const auto n = static_cast<std::size_t>(std::floor(cfg.tmax_us / cfg.dt_us + 0.5)) + 1;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * cfg.dt_us * kUm;
  const std::vector<double> signal = larmor_signal(lc, t);

  LarmorRun run;
  run.csv = "# B_gauss=" + format_double(lc.field_gauss) + " g_factor=" +
            format_double(lc.g_factor) + " delta_m=" + std::to_string(lc.delta_m) +
            " gamma_per_us=" + format_double(cfg.gamma_per_us) + "\n";
  run.csv += "t_us,intensity\n";
  for (std::size_t i = 0; i < n; ++i) {
    run.csv += format_double(static_cast<double>(i) * cfg.dt_us) + ',' +
               format_double(signal[i]) + '\n';
  }

  if (lc.field_gauss == 0.0) {
    run.summary = "oscillation=none";
    return run;
  }
  const PeriodEstimate est = estimate_period(t, signal);
  const double model = larmor_period(lc) / kUm;
  if (est.period) {
    run.summary = "period_us=" + format_double(*est.period / kUm) +
                  " model_period_us=" + format_double(model);
  } else {
    run.summary = "period_us=undetermined model_period_us=" + format_double(model);
  }
  return run;
}

bool run_selftest(std::ostream& log) {
  bool all = true;
  const auto report = [&](bool ok, const std::string& what) {
    log << (ok ? "[PASS] " : "[FAIL] ") << what << '\n';
    all = all && ok;
  };

  // Orthonormality of LG(l, p), l, p in 0..5, on the default grid.
  {
    const BeamParams beam(250e-6);
    const GridSpec grid = default_grid(beam.w0);
    std::vector<ComplexField> modes;
    for (int l = 0; l <= 5; ++l) {
      for (int p = 0; p <= 5; ++p) modes.push_back(sample_lg(LGIndex(l, p), beam, grid));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      for (std::size_t j = i; j < modes.size(); ++j) {
        const cdouble v = inner_product(modes[i], modes[j]);
        worst = std::max(worst, std::abs(v - cdouble(i == j ? 1.0 : 0.0)));
      }
    }
    std::ostringstream os;
    os << "LG orthonormality l,p<=5: max |G - I| = " << worst;
    report(worst < 1e-6, os.str());
  }

  RunConfig cfg;
  // Oracle equivalence on representative tilted fields plus the identity limit.
  for (const auto& [theta, ell] : std::vector<std::pair<double, int>>{
           {0.0, 0}, {0.0, 4}, {2.0, 1}, {2.0, 4}, {10.0, 2}, {20.0, 3}}) {
    try {
      const SpectrumPoint p = compute_spectrum_point(cfg, ell, theta);
      const bool agree = spectra_agree(p.direct, p.fourier, 1e-6);
      std::ostringstream os;
      os << "oracle equivalence theta=" << theta << " ell=" << ell
         << ": max rel diff = " << p.discrepancy;
      report(agree, os.str());
      if (theta == 0.0) {
        const double purity = 1.0 - crosstalk(p.direct, ell);
        std::ostringstream ps;
        ps.precision(12);
        ps << "identity limit ell=" << ell << ": purity = " << purity;
        report(purity > 1.0 - 1e-9, ps.str());
      }
    } catch (const std::exception& e) {
      report(false, std::string("oracle equivalence: ") + e.what());
    }
  }
  return all;
}

}  // namespace oamtilt
