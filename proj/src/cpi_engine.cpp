#include "cpi/cpi_engine.hpp"

#include <algorithm>
#include <cmath>

#include "cpi/analysis.hpp"
#include "cpi/errors.hpp"
#include "cpi/parallel.hpp"
#include "cpi/units.hpp"

namespace cpi {

using units::kTwoPi;

namespace {

double arm_spectral_fwhm(const OpticalSetup& s, const ArmSpec& arm) {
  if (arm.bandwidth_fwhm_nm)
    return units::omega_width_from_wavelength_width(*arm.bandwidth_fwhm_nm,
                                                    s.laser.centre_wavelength_nm);
  return units::tl_spectral_fwhm(s.laser.fwhm_duration_fs);
}

double stretched_duration_estimate(const OpticalSetup& s, const ArmSpec& arm) {
  return 2.0 * std::abs(arm.chirp.quadratic_phase_fs2) * arm_spectral_fwhm(s, arm);
}

// Gaussian spectral reshaping of a seed spectrum to a target intensity FWHM;
// the arm keeps the seed pulse energy.
void reshape_arm_spectrum(SpectralField& spec, double seed_fwhm_radfs,
                          double target_fwhm_radfs) {
  if (!(target_fwhm_radfs < seed_fwhm_radfs))
    throw ConfigError("arm bandwidth reshape target must be narrower than the seed spectrum");
  const double e0 = spec.energy();
  const double inv = 1.0 / (target_fwhm_radfs * target_fwhm_radfs) -
                     1.0 / (seed_fwhm_radfs * seed_fwhm_radfs);
  const double filt_fwhm = std::sqrt(1.0 / inv);
  for (int k = 0; k < spec.grid.n_points; ++k) {
    const double W = spec.grid.detuning(k);
    spec.samples[k] *= std::exp(-0.5 * units::kFourLn2 * W * W / (filt_fwhm * filt_fwhm));
  }
  const double scale = std::sqrt(e0 / spec.energy());
  for (auto& v : spec.samples) v *= scale;
}

void apply_acceptance(SpectralField& arm, double acceptance_fwhm_nm,
                      double acceptance_centre_nm) {
  const double fw = units::omega_width_from_wavelength_width(acceptance_fwhm_nm,
                                                             acceptance_centre_nm);
  const double wc = units::omega_from_wavelength_nm(acceptance_centre_nm) / 2.0;
  for (int k = 0; k < arm.grid.n_points; ++k) {
    const double d = arm.grid.omega(k) - wc;
    arm.samples[k] *= std::exp(-0.5 * units::kFourLn2 * d * d / (fw * fw));
  }
}

void validate_setup(const OpticalSetup& s) {
  if (!(s.sample_transmission >= 0.0 && s.sample_transmission <= 1.0))
    throw ConfigError("sample transmission must lie in [0, 1]");
  if (s.detector.background < 0.0)
    throw ConfigError("detector background must be >= 0");
  if (!(s.chirped.chirp.quadratic_phase_fs2 > 0.0) ||
      !(s.antichirped.chirp.quadratic_phase_fs2 < 0.0))
    throw ConfigError("chirped arm needs positive A, anti-chirped negative A");
}

} // namespace

std::pair<TimeGrid, FrequencyGrid> setup_grids(const OpticalSetup& s) {
  validate_setup(s);
  double span = s.grid.span_fs_override.value_or(
      s.grid.span_factor * std::max(stretched_duration_estimate(s, s.chirped),
                                    stretched_duration_estimate(s, s.antichirped)));
  const double carrier =
      units::omega_from_wavelength_nm(s.laser.centre_wavelength_nm);
  auto grids = make_grids(span, s.grid.n_points, carrier);
  if (!(s.laser.fwhm_duration_fs > 4.0 * grids.first.dt_fs))
    throw ConfigError("seed pulse unresolvable on the grid; raise n_points");
  return grids;
}

SpectralField arm_spectrum(const OpticalSetup& s, const ArmSpec& arm,
                           const TimeGrid& tg, const FrequencyGrid& fg) {
  const TemporalField seed =
      gaussian_pulse(tg, fg.omega_offset, s.laser.fwhm_duration_fs, s.laser.pulse_energy);
  SpectralField spec = to_spectrum(seed);
  if (arm.bandwidth_fwhm_nm)
    reshape_arm_spectrum(spec, units::tl_spectral_fwhm(s.laser.fwhm_duration_fs),
                         arm_spectral_fwhm(s, arm));
  const double A = arm.chirp.quadratic_phase_fs2;
  const double off = arm.chirp.overlap_offset_fs;
  for (int k = 0; k < fg.n_points; ++k) {
    const double W = spec.grid.detuning(k);
    spec.samples[k] *= std::polar(1.0, A * W * W + W * off);
  }
  if (off != 0.0) {
    const Complex rot = std::polar(1.0, fg.omega_offset * off);
    for (auto& v : spec.samples) v *= rot;
  }
  return spec;
}

PreparedArms prepare_arms(const OpticalSetup& s) {
  auto [tg, fg] = setup_grids(s);
  SpectralField chirped = arm_spectrum(s, s.chirped, tg, fg);
  SpectralField anti = arm_spectrum(s, s.antichirped, tg, fg);
  auto [delay_arm, sample_arm] = beamsplitter_combine(chirped, anti);

  if (!s.sample.empty()) {
    const auto phi = material_phase(s.sample, fg);
    sample_arm = apply_spectral_phase(sample_arm, phi);
  }
  sample_arm = attenuate(sample_arm, s.sample_transmission);

  PreparedArms arms{std::move(delay_arm), std::move(sample_arm), tg, 0.0};
  arms.ref_delay_fs = s.sample.empty() ? 0.0 : group_delay(s.sample, fg.omega_offset);
  return arms;
}

TemporalField sfg_field(const TemporalField& delay_arm,
                        const TemporalField& sample_arm, double tau_fs,
                        std::optional<double> acceptance_fwhm_nm,
                        double acceptance_centre_nm) {
  if (!(delay_arm.grid == sample_arm.grid))
    throw std::invalid_argument("sfg inputs on mismatched grids");
  TemporalField a = delay_field(delay_arm, tau_fs);
  TemporalField b = sample_arm;
  if (acceptance_fwhm_nm) {
    auto filt = [&](TemporalField& f) {
      SpectralField spec = to_spectrum(f);
      apply_acceptance(spec, *acceptance_fwhm_nm, acceptance_centre_nm);
      auto fft = Fft::get(f.grid.n_points);
      samples_from_spectrum(f.grid, *fft, spec.samples.data(), f.samples.data());
    };
    filt(a);
    filt(b);
  }
  TemporalField out{a.grid, a.carrier + b.carrier, Cvec(a.grid.n_points)};
  for (int j = 0; j < a.grid.n_points; ++j)
    out.samples[j] = a.samples[j] * b.samples[j];
  return out;
}

double detect(const TemporalField& sfg, const FilterSpec& filter,
              double background) {
  if (background < 0.0) throw ConfigError("detector background must be >= 0");
  SpectralField spec = to_spectrum(sfg);
  const auto T = filter_transmission(spec.grid, filter.centre_wavelength_nm,
                                     filter.fwhm_nm, filter.shape);
  double e = 0.0;
  for (int k = 0; k < spec.grid.n_points; ++k)
    e += T[k] * std::norm(spec.samples[k]);
  return e * spec.grid.dw / kTwoPi + background;
}

namespace {

// Shared per-scan state: arm spectra with acceptance and the reference frame
// shift folded in, the filter transmission on the SFG-band grid, and cached
// time-domain sample-arm samples.
struct ScanEngine {
  TimeGrid tg;
  FrequencyGrid fg_ir;   // arm band, carrier omega0
  FrequencyGrid fg_sfg;  // product band, carrier 2*omega0
  Cvec delay_spec;       // delay-arm spectrum (frame-shifted)
  Cvec sample_time;      // sample-arm time samples (frame-shifted)
  std::vector<double> T; // filter intensity transmission on fg_sfg
  double ref_delay = 0.0;
  double background = 0.0;
  std::shared_ptr<const Fft> fft;

  ScanEngine(const OpticalSetup& s) {
    PreparedArms arms = prepare_arms(s);
    tg = arms.time_grid;
    fg_ir = arms.delay_arm.grid;
    ref_delay = arms.ref_delay_fs;
    fft = Fft::get(tg.n_points);

    if (s.sfg_acceptance_fwhm_nm) {
      apply_acceptance(arms.delay_arm, *s.sfg_acceptance_fwhm_nm,
                       s.filter.centre_wavelength_nm);
      apply_acceptance(arms.sample_arm, *s.sfg_acceptance_fwhm_nm,
                       s.filter.centre_wavelength_nm);
    }
    // common time-frame shift by the stack group delay
    for (int k = 0; k < fg_ir.n_points; ++k)
      arms.sample_arm.samples[k] *=
          std::polar(1.0, -fg_ir.detuning(k) * ref_delay);
    delay_spec = std::move(arms.delay_arm.samples);
    sample_time.resize(tg.n_points);
    samples_from_spectrum(tg, *fft, arms.sample_arm.samples.data(),
                          sample_time.data());

    fg_sfg = paired_frequency_grid(tg, 2.0 * fg_ir.omega_offset);
    T = filter_transmission(fg_sfg, s.filter.centre_wavelength_nm,
                            s.filter.fwhm_nm, s.filter.shape);
    background = s.detector.background;
  }

  void check_delay(double tau_rel) const {
    if (std::abs(tau_rel) > tg.span_fs() / 4.0)
      throw NumericalError("scan outside the grid guard band (wrap-around)");
  }

  // SFG power spectrum |P(W)|^2 * dw/2pi at one stage position, written into
  // `spec_power` (caller-owned, resized to n).  The constant carrier rotation
  // of the delayed arm is dropped: it cannot survive |P|^2.
  void sfg_spectrum_at(double x_um, Cvec& work1, Cvec& work2,
                       std::vector<double>& spec_power) const {
    const double tau_rel = units::stage_um_to_delay_fs(x_um) - ref_delay;
    check_delay(tau_rel);
    const int n = tg.n_points;
    work1.resize(n);
    work2.resize(n);
    spec_power.resize(n);
    for (int k = 0; k < n; ++k)
      work1[k] = delay_spec[k] * std::polar(1.0, fg_ir.detuning(k) * tau_rel);
    samples_from_spectrum(tg, *fft, work1.data(), work2.data());
    for (int j = 0; j < n; ++j) work2[j] *= sample_time[j];
    spectrum_from_samples(tg, *fft, work2.data(), work1.data());
    const double scale = fg_sfg.dw / kTwoPi;
    for (int k = 0; k < n; ++k) spec_power[k] = std::norm(work1[k]) * scale;
  }

  double detect_at(double x_um, Cvec& work1, Cvec& work2,
                   std::vector<double>& spec_power) const {
    sfg_spectrum_at(x_um, work1, work2, spec_power);
    double e = 0.0;
    for (int k = 0; k < tg.n_points; ++k) e += T[k] * spec_power[k];
    return e + background;
  }
};

} // namespace

Interferogram cpi_interferogram(const OpticalSetup& setup, const ScanSpec& scan,
                                int n_threads) {
  const ScanEngine eng(setup);
  const auto xs = scan.positions();
  Interferogram tr = make_trace(xs, TraceKind::CpiDip);
  parallel_for_indexed(static_cast<int>(xs.size()), n_threads, [&](int i) {
    thread_local Cvec w1, w2;
    thread_local std::vector<double> pw;
    tr.signal[i] = eng.detect_at(xs[i], w1, w2, pw);
  });
  return tr;
}

SpectrumMap sfg_spectrum_map(const OpticalSetup& setup, const ScanSpec& scan,
                             const MapSpec& map, int n_threads) {
  if (!(map.bin_nm > 0.0) || !(map.span_nm > map.bin_nm))
    throw ConfigError("spectrum map needs bin_nm > 0 and span_nm > bin_nm");
  const ScanEngine eng(setup);
  const auto xs = scan.positions();
  const double lam_c = setup.filter.centre_wavelength_nm;
  const int n_bins = static_cast<int>(std::floor(map.span_nm / map.bin_nm + 0.5));
  const double lam_min = lam_c - 0.5 * n_bins * map.bin_nm;

  SpectrumMap out;
  out.stage_um = xs;
  out.wavelength_nm.resize(n_bins);
  for (int b = 0; b < n_bins; ++b)
    out.wavelength_nm[b] = lam_min + (b + 0.5) * map.bin_nm;
  out.power.assign(xs.size(), std::vector<double>(n_bins, 0.0));

  parallel_for_indexed(static_cast<int>(xs.size()), n_threads, [&](int i) {
    thread_local Cvec w1, w2;
    thread_local std::vector<double> pw;
    eng.sfg_spectrum_at(xs[i], w1, w2, pw);
    auto& row = out.power[i];
    for (int k = 0; k < eng.tg.n_points; ++k) {
      const double lam = units::wavelength_nm_from_omega(eng.fg_sfg.omega(k));
      const int b = static_cast<int>(std::floor((lam - lam_min) / map.bin_nm));
      if (b >= 0 && b < n_bins) row[b] += pw[k];
    }
  });
  return out;
}

std::vector<std::pair<double, double>>
loss_sweep(const OpticalSetup& setup, const ScanSpec& scan,
           const std::vector<double>& transmissions, int n_threads) {
  std::vector<std::pair<double, double>> out;
  out.reserve(transmissions.size());
  for (double eta : transmissions) {
    OpticalSetup s = setup;
    s.sample_transmission = eta;
    const Interferogram tr = cpi_interferogram(s, scan, n_threads);
    out.emplace_back(eta, fit_gaussian_dip(tr).visibility);
  }
  return out;
}

} // namespace cpi
