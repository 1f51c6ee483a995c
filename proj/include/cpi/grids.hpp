#pragma once

#include <complex>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace cpi {

using Complex = std::complex<double>;
using Cvec = std::vector<Complex>;

// Uniform time grid, t_j = t0 + j*dt, centred so that t = 0 lies on sample n/2.
struct TimeGrid {
  int n_points = 0;
  double dt_fs = 0.0;
  double t0_fs = 0.0;

  double span_fs() const { return n_points * dt_fs; }
  double t(int j) const { return t0_fs + j * dt_fs; }
  bool operator==(const TimeGrid&) const = default;
};

// Paired frequency grid: omega_k = omega_offset + (k - n/2)*dw with
// dw = 2*pi / (n*dt).  omega_offset is the tracked carrier.
struct FrequencyGrid {
  int n_points = 0;
  double dw = 0.0;
  double omega_offset = 0.0;

  double omega(int k) const { return omega_offset + detuning(k); }
  double detuning(int k) const { return (k - n_points / 2) * dw; }
  double band_halfwidth() const { return (n_points / 2) * dw; }
  bool operator==(const FrequencyGrid&) const = default;
};

// Complex analytic envelope a(t) at a tracked carrier; the physical field is
// E(t) = a(t) * exp(-i * carrier * t).
struct TemporalField {
  TimeGrid grid;
  double carrier = 0.0;
  Cvec samples;

  double energy() const;
};

// Spectral amplitude A(Omega) = integral a(t) exp(+i Omega t) dt, sampled on
// the paired grid in natural (monotonic frequency) order.
struct SpectralField {
  FrequencyGrid grid;
  Cvec samples;

  double energy() const;
};

std::pair<TimeGrid, FrequencyGrid> make_grids(double span_fs, int n_points,
                                              double carrier);

FrequencyGrid paired_frequency_grid(const TimeGrid& g, double carrier);

// Transform-limited Gaussian pulse, intensity FWHM = fwhm_duration_fs, peak at
// t = 0, total energy (sum |a|^2 dt) equal to the requested energy exactly.
TemporalField gaussian_pulse(const TimeGrid& grid, double carrier,
                             double fwhm_duration_fs, double energy = 1.0);

SpectralField to_spectrum(const TemporalField& f);
TemporalField from_spectrum(const SpectralField& f);

// Plan cache around FFTW; execution is thread-safe, plan creation serialized.
class Fft {
public:
  static std::shared_ptr<const Fft> get(int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  // out_k = sum_j in_j exp(+2 pi i jk/n)
  void backward(const Complex* in, Complex* out) const;
  // out_j = sum_k in_k exp(-2 pi i jk/n)
  void forward(const Complex* in, Complex* out) const;
  int size() const { return n_; }

private:
  explicit Fft(int n);
  int n_;
  void* plan_fwd_;
  void* plan_bwd_;
};

// In-place transform kernels used by the engines to avoid reallocation.
// Same conventions as to_spectrum/from_spectrum.
void spectrum_from_samples(const TimeGrid& g, const Fft& fft,
                           const Complex* time_in, Complex* spec_out);
void samples_from_spectrum(const TimeGrid& g, const Fft& fft,
                           const Complex* spec_in, Complex* time_out);

} // namespace cpi
