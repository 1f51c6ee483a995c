#include "cpi/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "cpi/grids.hpp"
#include "cpi/units.hpp"

namespace cpi {

double outer_baseline(const Interferogram& trace) {
  const std::size_t n = trace.size();
  if (n < 10) throw std::invalid_argument("trace too short (< 10 points)");
  const std::size_t k = std::max<std::size_t>(1, n / 10);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += trace.signal[i] + trace.signal[n - 1 - i];
  return s / (2.0 * k);
}

Interferogram subtract_bias(const Interferogram& trace, double bias) {
  Interferogram out = trace;
  int clamped = 0;
  for (auto& v : out.signal) {
    v -= bias;
    if (v < 0.0) {
      v = 0.0;
      ++clamped;
    }
  }
  if (clamped > 0)
    out.notes.push_back("bias subtraction clamped " + std::to_string(clamped) +
                        " negative samples to zero");
  return out;
}

namespace {

// Solve the 4x4 normal equations with partial pivoting.
bool solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4>& b) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-300) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int col = 3; col >= 0; --col) {
    for (int r = 0; r < col; ++r) {
      b[r] -= a[r][col] / a[col][col] * b[col];
      a[r][col] = 0.0;
    }
    b[col] /= a[col][col];
  }
  return true;
}

struct DipInit {
  double B, V, x0, w;
};

DipInit initial_guess(const Interferogram& trace) {
  const auto& x = trace.stage_um;
  const auto& y = trace.signal;
  const std::size_t n = y.size();
  DipInit g{};
  g.B = outer_baseline(trace);
  std::size_t imin = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (y[i] < y[imin]) imin = i;
  g.x0 = x[imin];
  const double depth = g.B - y[imin];
  if (!(depth > 1e-12 * std::abs(g.B)) || !(g.B > 0.0))
    throw NumericalError("no dip present in trace");
  g.V = std::clamp(depth / g.B, 1e-6, 1.0);
  const double half = g.B - 0.5 * depth;
  std::size_t i1 = imin, i2 = imin;
  while (i1 > 0 && y[i1] <= half) --i1;
  while (i2 + 1 < n && y[i2] <= half) ++i2;
  const double step = n > 1 ? x[1] - x[0] : 1.0;
  g.w = std::max((x[i2] - x[i1]) / units::kFwhmPerSigma, std::abs(step));
  return g;
}

} // namespace

FitResult fit_gaussian_dip(const Interferogram& trace) {
  const auto& x = trace.stage_um;
  const auto& y = trace.signal;
  const std::size_t n = y.size();
  if (n < 10) throw std::invalid_argument("need >= 10 points to fit");

  const DipInit init = initial_guess(trace);
  std::array<double, 4> p{init.B, init.V, init.x0, init.w};

  auto cost_of = [&](const std::array<double, 4>& q) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (x[i] - q[2]) / q[3];
      const double m = q[0] * (1.0 - q[1] * std::exp(-0.5 * u * u));
      const double r = y[i] - m;
      c += r * r;
    }
    return c;
  };

  double lambda = 1e-3;
  double cost = cost_of(p);
  int it = 0;
  bool converged = false;
  for (; it < 200 && !converged; ++it) {
    std::array<std::array<double, 4>, 4> jtj{};
    std::array<double, 4> jtr{};
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (x[i] - p[2]) / p[3];
      const double g = std::exp(-0.5 * u * u);
      const double m = p[0] * (1.0 - p[1] * g);
      const double r = y[i] - m;
      const std::array<double, 4> J = {
          1.0 - p[1] * g,
          -p[0] * g,
          -p[0] * p[1] * g * u / p[3],
          -p[0] * p[1] * g * u * u / p[3],
      };
      for (int a = 0; a < 4; ++a) {
        jtr[a] += J[a] * r;
        for (int b = 0; b < 4; ++b) jtj[a][b] += J[a] * J[b];
      }
    }
    bool stepped = false;
    for (int tries = 0; tries < 60 && !converged; ++tries) {
      auto damped = jtj;
      for (int a = 0; a < 4; ++a) damped[a][a] += lambda * jtj[a][a];
      std::array<double, 4> dp = jtr;
      if (!solve4(damped, dp)) {
        lambda *= 10.0;
        continue;
      }
      double rel = 0.0;
      for (int a = 0; a < 4; ++a)
        rel = std::max(rel, std::abs(dp[a]) / (std::abs(p[a]) + 1e-30));
      if (rel < 1e-10) {
        // the proposed move is below tolerance: at the optimum
        converged = true;
        break;
      }
      std::array<double, 4> q = {p[0] + dp[0], p[1] + dp[1], p[2] + dp[2],
                                 p[3] + dp[3]};
      if (q[3] == 0.0) {
        lambda *= 10.0;
        continue;
      }
      const double c2 = cost_of(q);
      if (c2 < cost) {
        p = q;
        cost = c2;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 2.0;
    }
    if (!stepped) break;
  }

  FitResult res;
  res.baseline = p[0];
  res.visibility = p[1];
  res.centre_um = p[2];
  res.fwhm_um = units::kFwhmPerSigma * std::abs(p[3]);
  res.fwhm_fs = units::stage_um_to_delay_fs(res.fwhm_um);
  res.residual_rms = std::sqrt(cost / n);
  res.converged = converged;
  res.iterations = it;
  return res;
}

std::vector<double> hilbert_envelope(const Interferogram& trace) {
  const std::size_t n = trace.size();
  if (n < 16) throw std::invalid_argument("trace too short for envelope extraction");
  const double mean =
      std::accumulate(trace.signal.begin(), trace.signal.end(), 0.0) / n;

  // pad to a power of two for the transform; reflect into the pad region to
  // avoid a hard step at the end of the record
  std::size_t nfft = 16;
  while (nfft < n) nfft *= 2;
  Cvec buf(nfft, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) buf[i] = trace.signal[i] - mean;
  for (std::size_t i = n; i < nfft; ++i)
    buf[i] = trace.signal[2 * n - 2 - i] - mean;

  auto fft = Fft::get(static_cast<int>(nfft));
  Cvec spec(nfft);
  fft->forward(buf.data(), spec.data());

  // undersampling check: dominant component must have >= 8 samples per fringe
  std::size_t kmax = 1;
  for (std::size_t k = 1; k < nfft / 2; ++k)
    if (std::norm(spec[k]) + std::norm(spec[nfft - k]) >
        std::norm(spec[kmax]) + std::norm(spec[nfft - kmax]))
      kmax = k;
  const double samples_per_fringe = static_cast<double>(nfft) / kmax;
  if (samples_per_fringe < 8.0)
    throw NumericalError("fringes undersampled for envelope extraction (need >= 8 samples per fringe)");

  // analytic signal: zero the negative half, double the positive half
  for (std::size_t k = 1; k < nfft / 2; ++k) spec[k] *= 2.0;
  for (std::size_t k = nfft / 2 + 1; k < nfft; ++k) spec[k] = 0.0;
  Cvec analytic(nfft);
  fft->backward(spec.data(), analytic.data());

  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i)
    env[i] = std::abs(analytic[i]) / static_cast<double>(nfft);
  return env;
}

std::pair<double, double> envelope_fwhm_centre(std::span<const double> envelope,
                                               std::span<const double> axis) {
  if (envelope.size() != axis.size() || envelope.size() < 10)
    throw std::invalid_argument("envelope and axis must match and have >= 10 points");
  const std::size_t n = envelope.size();
  const std::size_t trim = n / 20; // discard analytic-signal end transients
  const std::size_t lo = trim, hi = n - trim;

  double peak = 0.0;
  for (std::size_t i = lo; i < hi; ++i) peak = std::max(peak, envelope[i]);
  if (!(peak > 0.0)) throw NumericalError("flat envelope");
  const double half = peak / 2.0;

  // count connected regions above half max
  int lobes = 0;
  bool above = false;
  for (std::size_t i = lo; i < hi; ++i) {
    const bool a = envelope[i] >= half;
    if (a && !above) ++lobes;
    above = a;
  }
  if (lobes != 1)
    throw NumericalError("ambiguous envelope: " + std::to_string(lobes) +
                         " lobes above half maximum");

  std::size_t first = lo, last = hi - 1;
  while (first < hi && envelope[first] < half) ++first;
  while (last > lo && envelope[last] < half) --last;

  auto interp = [&](std::size_t a, std::size_t b) {
    const double f = (half - envelope[a]) / (envelope[b] - envelope[a]);
    return axis[a] + f * (axis[b] - axis[a]);
  };
  const double x_left = first > lo ? interp(first - 1, first) : axis[first];
  const double x_right = last + 1 < hi ? interp(last + 1, last) : axis[last];

  double wsum = 0.0, xsum = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    wsum += envelope[i];
    xsum += envelope[i] * axis[i];
  }
  return {std::abs(x_right - x_left), xsum / wsum};
}

double dip_visibility(const Interferogram& trace) {
  const double base = outer_baseline(trace);
  if (!(std::abs(base) > 0.0)) throw NumericalError("zero baseline");
  const double min = *std::min_element(trace.signal.begin(), trace.signal.end());
  return (base - min) / base;
}

double fringe_visibility(const Interferogram& trace) {
  const auto env = hilbert_envelope(trace);
  const std::size_t n = env.size();
  const std::size_t trim = std::max<std::size_t>(1, n / 20);
  double peak = 0.0;
  for (std::size_t i = trim; i < n - trim; ++i) peak = std::max(peak, env[i]);
  const double mean =
      std::accumulate(trace.signal.begin(), trace.signal.end(), 0.0) / n;
  if (!(mean > 0.0)) throw NumericalError("zero mean signal");
  return peak / mean;
}

} // namespace cpi
