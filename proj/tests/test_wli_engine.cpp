#include <doctest.h>

#include <cmath>

#include "cpi/analysis.hpp"
#include "cpi/units.hpp"
#include "cpi/wli_engine.hpp"
#include "test_helpers.hpp"

using namespace cpi;
using namespace cpi::units;
using namespace cpi::test;

namespace {

constexpr double kStretcherChirp = 848190.837269658;

OpticalSetup wli_setup(double duration_fs = 86.6, double chirp = kStretcherChirp) {
  OpticalSetup s;
  s.laser = {790.0, duration_fs, 1.0};
  s.chirped = {{chirp, 0.0}, std::nullopt};
  s.antichirped = {{-chirp, 0.0}, std::nullopt};
  s.filter = {395.9, 0.4, FilterShape::Gaussian};
  return s;
}

// dominant fringe period via the peak of the spectrum of the detrended trace
double fringe_period_um(const Interferogram& tr) {
  const std::size_t n = tr.size();
  std::size_t nfft = 16;
  while (nfft < n) nfft *= 2;
  double mean = 0.0;
  for (double v : tr.signal) mean += v;
  mean /= n;
  Cvec buf(nfft, Complex(0, 0)), spec(nfft);
  for (std::size_t i = 0; i < n; ++i) buf[i] = tr.signal[i] - mean;
  auto fft = Fft::get(static_cast<int>(nfft));
  fft->forward(buf.data(), spec.data());
  std::size_t kmax = 1;
  for (std::size_t k = 1; k < nfft / 2; ++k)
    if (std::norm(spec[k]) > std::norm(spec[kmax])) kmax = k;
  // quadratic interpolation around the magnitude peak
  const double ym = std::abs(spec[kmax - 1]), y0 = std::abs(spec[kmax]),
               yp = std::abs(spec[kmax + 1]);
  const double frac = 0.5 * (ym - yp) / (ym - 2.0 * y0 + yp);
  const double step = tr.stage_um[1] - tr.stage_um[0];
  return nfft * step / (kmax + frac);
}

} // namespace

TEST_CASE("fringe period is half the centre wavelength in stage position") {
  OpticalSetup s = wli_setup();
  const Interferogram tr = wli_interferogram(s, {-6.0, 6.0, 0.0395}, 2);
  CHECK(tr.kind == TraceKind::WliFringes);
  const double period = fringe_period_um(tr);
  CHECK(std::abs(period - 0.395) / 0.395 < 0.005);
  // equivalently 2 pi / w0 in delay
  CHECK(stage_um_to_delay_fs(period) ==
        doctest::Approx(kTwoPi / omega_from_wavelength_nm(790.0)).epsilon(0.005));
}

TEST_CASE("envelope width is the coherence width, independent of chirp") {
  const ScanSpec scan{-40.0, 40.0, 0.0395};
  OpticalSetup s1 = wli_setup(86.6, kStretcherChirp);
  OpticalSetup s2 = wli_setup(86.6, 2.1 * kStretcherChirp);
  s2.grid.n_points = 65536; // the longer stretch needs the same dt

  const Interferogram t1 = wli_interferogram(s1, scan, 2);
  const Interferogram t2 = wli_interferogram(s2, scan, 2);
  const auto e1 = hilbert_envelope(t1);
  const auto e2 = hilbert_envelope(t2);
  const auto [f1, c1] = envelope_fwhm_centre(e1, t1.stage_um);
  const auto [f2, c2] = envelope_fwhm_centre(e2, t2.stage_um);

  // coherence envelope of a transform-limited gaussian: twice the duration
  CHECK(stage_um_to_delay_fs(f1) == doctest::Approx(2.0 * 86.6).epsilon(0.02));
  CHECK(std::abs(f2 - f1) / f1 < 0.01);
  CHECK(std::abs(c1) < 0.1);
}

TEST_CASE("visibility versus loss follows two-beam interference") {
  const ScanSpec scan{-6.0, 6.0, 0.0395};
  for (double eta : {1.0, 0.25, 0.04}) {
    OpticalSetup s = wli_setup();
    s.sample_transmission = eta;
    const Interferogram tr = wli_interferogram(s, scan, 2);
    const double v = fringe_visibility(tr);
    const double theory = 2.0 * std::sqrt(eta) / (1.0 + eta);
    CHECK(std::abs(v - theory) / theory < 0.01);
  }
}

TEST_CASE("a dispersive sample broadens the envelope") {
  const MaterialDb db = MaterialDb::load(repo_path("data/materials.json"));
  OpticalSetup plain = wli_setup();
  OpticalSetup disp = wli_setup();
  disp.sample.layers.push_back({db.get("bk7"), 28.93});

  const Interferogram t0 = wli_interferogram(plain, {-40.0, 40.0, 0.0395}, 2);
  const double gd = group_delay(disp.sample, omega_from_wavelength_nm(790.0));
  const double xc = delay_fs_to_stage_um(gd);
  const Interferogram t1 = wli_interferogram(disp, {xc - 40.0, xc + 40.0, 0.0395}, 2);

  const auto [f0, c0] = envelope_fwhm_centre(hilbert_envelope(t0), t0.stage_um);
  const auto [f1, c1] = envelope_fwhm_centre(hilbert_envelope(t1), t1.stage_um);
  // gaussian spectrum: width grows by sqrt(1 + (2 sigma^2 B)^2), B = gvd
  const double sigma = tl_spectral_fwhm(86.6) / kFwhmPerSigma;
  const double b = gvd(disp.sample, omega_from_wavelength_nm(790.0));
  const double expect = std::sqrt(1.0 + std::pow(2.0 * sigma * sigma * b, 2));
  CHECK(f1 / f0 == doctest::Approx(expect).epsilon(0.015));
  CHECK(f1 > f0);
  // fringes burst around the group-delay-matched stage position
  CHECK(std::abs(c1 - xc) < 1.0);
}

TEST_CASE("undersampled fringe scan is rejected by the envelope analysis") {
  OpticalSetup s = wli_setup();
  const Interferogram tr = wli_interferogram(s, {-6.0, 6.0, 0.12}, 2);
  CHECK_THROWS_AS(hilbert_envelope(tr), NumericalError);
}
