#include "cpi/grids.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "cpi/errors.hpp"
#include "cpi/units.hpp"

namespace cpi {

namespace {

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

double TemporalField::energy() const {
  double e = 0.0;
  for (const auto& s : samples) e += std::norm(s);
  return e * grid.dt_fs;
}

double SpectralField::energy() const {
  double e = 0.0;
  for (const auto& s : samples) e += std::norm(s);
  return e * grid.dw / units::kTwoPi;
}

std::pair<TimeGrid, FrequencyGrid> make_grids(double span_fs, int n_points,
                                              double carrier) {
  if (!is_power_of_two(n_points))
    throw ConfigError("grid n_points must be a power of two >= 2");
  if (!(span_fs > 0.0)) throw ConfigError("grid span must be positive");
  if (!(carrier > 0.0)) throw ConfigError("carrier frequency must be positive");
  TimeGrid t{n_points, span_fs / n_points, -span_fs / 2.0};
  return {t, paired_frequency_grid(t, carrier)};
}

FrequencyGrid paired_frequency_grid(const TimeGrid& g, double carrier) {
  return FrequencyGrid{g.n_points, units::kTwoPi / g.span_fs(), carrier};
}

TemporalField gaussian_pulse(const TimeGrid& grid, double carrier,
                             double fwhm_duration_fs, double energy) {
  if (!(fwhm_duration_fs > 4.0 * grid.dt_fs))
    throw NumericalError("pulse duration unresolvable on grid (need fwhm > 4 dt)");
  if (energy < 0.0) throw std::invalid_argument("pulse energy must be >= 0");
  TemporalField f{grid, carrier, Cvec(grid.n_points)};
  if (energy == 0.0) return f;
  const double k = 2.0 * std::log(2.0) / (fwhm_duration_fs * fwhm_duration_fs);
  double e = 0.0;
  for (int j = 0; j < grid.n_points; ++j) {
    const double t = grid.t(j);
    const double a = std::exp(-k * t * t);
    f.samples[j] = a;
    e += a * a;
  }
  e *= grid.dt_fs;
  const double scale = std::sqrt(energy / e);
  for (auto& s : f.samples) s *= scale;
  return f;
}

Fft::Fft(int n) : n_(n) {
  std::lock_guard<std::mutex> lock(fftw_mutex());
  Cvec scratch_in(n), scratch_out(n);
  auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
  auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
  plan_fwd_ = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("fftw plan creation failed");
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(fftw_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

std::shared_ptr<const Fft> Fft::get(int n) {
  static std::mutex reg_mutex;
  static std::map<int, std::weak_ptr<const Fft>> registry;
  std::lock_guard<std::mutex> lock(reg_mutex);
  if (auto p = registry[n].lock()) return p;
  std::shared_ptr<const Fft> p(new Fft(n));
  registry[n] = p;
  return p;
}

void Fft::backward(const Complex* in, Complex* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void Fft::forward(const Complex* in, Complex* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

namespace {

// Sign flips map the centred DFT (t and omega grids both centred on their
// middle sample) onto the plain FFT kernel; the constant is i^n, real for
// even n.
inline double centre_constant(int n) { return ((n / 2) % 2 == 0) ? 1.0 : -1.0; }

} // namespace

void spectrum_from_samples(const TimeGrid& g, const Fft& fft,
                           const Complex* time_in, Complex* spec_out) {
  const int n = g.n_points;
  Cvec tmp(n);
  for (int j = 0; j < n; ++j) tmp[j] = (j & 1) ? -time_in[j] : time_in[j];
  fft.backward(tmp.data(), spec_out);
  const double c = g.dt_fs * centre_constant(n);
  for (int k = 0; k < n; ++k) spec_out[k] *= (k & 1) ? -c : c;
}

void samples_from_spectrum(const TimeGrid& g, const Fft& fft,
                           const Complex* spec_in, Complex* time_out) {
  const int n = g.n_points;
  Cvec tmp(n);
  for (int k = 0; k < n; ++k) tmp[k] = (k & 1) ? -spec_in[k] : spec_in[k];
  fft.forward(tmp.data(), time_out);
  const double c = centre_constant(n) / (g.dt_fs * n);
  for (int j = 0; j < n; ++j) time_out[j] *= (j & 1) ? -c : c;
}

SpectralField to_spectrum(const TemporalField& f) {
  if (static_cast<int>(f.samples.size()) != f.grid.n_points)
    throw std::invalid_argument("field sample count does not match its grid");
  SpectralField out{paired_frequency_grid(f.grid, f.carrier), Cvec(f.grid.n_points)};
  auto fft = Fft::get(f.grid.n_points);
  spectrum_from_samples(f.grid, *fft, f.samples.data(), out.samples.data());
  return out;
}

TemporalField from_spectrum(const SpectralField& f) {
  if (static_cast<int>(f.samples.size()) != f.grid.n_points)
    throw std::invalid_argument("field sample count does not match its grid");
  const int n = f.grid.n_points;
  TimeGrid tg{n, units::kTwoPi / (n * f.grid.dw), -units::kPi / f.grid.dw};
  TemporalField out{tg, f.grid.omega_offset, Cvec(n)};
  auto fft = Fft::get(n);
  samples_from_spectrum(tg, *fft, f.samples.data(), out.samples.data());
  return out;
}

} // namespace cpi
