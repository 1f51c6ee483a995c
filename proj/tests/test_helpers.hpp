#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cpi/grids.hpp"

namespace cpi::test {

inline std::string repo_path(const std::string& rel) {
  return std::string(CPI_REPO_DIR) + "/" + rel;
}

// Deterministic complex field for property tests.
inline Cvec random_field(int n, unsigned seed) {
  std::mt19937 rng(seed);
  auto u = [&] { return (rng() + 0.5) / 4294967296.0; };
  Cvec out(n);
  for (auto& v : out) {
    // Box-Muller on the raw generator keeps the sequence compiler-independent
    const double r = std::sqrt(-2.0 * std::log(u()));
    const double a = 2.0 * M_PI * u();
    v = Complex(r * std::cos(a), r * std::sin(a));
  }
  return out;
}

// FWHM of a sampled curve by linear interpolation at half maximum.
inline double measured_fwhm(const std::vector<double>& x,
                            const std::vector<double>& y) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[imax]) imax = i;
  const double half = y[imax] / 2.0;
  std::size_t i1 = imax, i2 = imax;
  while (i1 > 0 && y[i1] >= half) --i1;
  while (i2 + 1 < y.size() && y[i2] >= half) ++i2;
  const double x1 = x[i1] + (x[i1 + 1] - x[i1]) * (half - y[i1]) / (y[i1 + 1] - y[i1]);
  const double x2 = x[i2 - 1] + (x[i2] - x[i2 - 1]) * (half - y[i2 - 1]) / (y[i2] - y[i2 - 1]);
  return x2 - x1;
}

inline double intensity_fwhm(const TemporalField& f) {
  std::vector<double> x(f.grid.n_points), y(f.grid.n_points);
  for (int j = 0; j < f.grid.n_points; ++j) {
    x[j] = f.grid.t(j);
    y[j] = std::norm(f.samples[j]);
  }
  return measured_fwhm(x, y);
}

inline double spectral_intensity_fwhm(const SpectralField& f) {
  std::vector<double> x(f.grid.n_points), y(f.grid.n_points);
  for (int k = 0; k < f.grid.n_points; ++k) {
    x[k] = f.grid.detuning(k);
    y[k] = std::norm(f.samples[k]);
  }
  return measured_fwhm(x, y);
}

inline double intensity_centroid(const TemporalField& f) {
  double s = 0.0, sx = 0.0;
  for (int j = 0; j < f.grid.n_points; ++j) {
    const double w = std::norm(f.samples[j]);
    s += w;
    sx += w * f.grid.t(j);
  }
  return sx / s;
}

inline double max_abs_diff(const Cvec& a, const Cvec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const Cvec& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

} // namespace cpi::test
