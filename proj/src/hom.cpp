#include "cpi/hom.hpp"

#include <cmath>
#include <stdexcept>

#include "cpi/units.hpp"

namespace cpi {

BiphotonSpectrum BiphotonSpectrum::gaussian(double intensity_fwhm_radfs,
                                            int n_points, double n_sigma) {
  if (!(intensity_fwhm_radfs > 0.0))
    throw std::invalid_argument("spectrum width must be positive");
  if (n_points < 3) throw std::invalid_argument("need at least 3 grid points");
  const double sigma = intensity_fwhm_radfs / units::kFwhmPerSigma;
  const double half = n_sigma * sigma;
  BiphotonSpectrum s;
  s.detunings.resize(n_points);
  s.weights.resize(n_points);
  const double dw = 2.0 * half / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double w = -half + i * dw;
    s.detunings[i] = w;
    s.weights[i] = std::exp(-w * w / (2.0 * sigma * sigma));
  }
  return s;
}

BiphotonSpectrum product_biphoton_weights(const SpectralField& chirped,
                                          const SpectralField& antichirped,
                                          double omega_centre) {
  if (!(chirped.grid == antichirped.grid))
    throw std::invalid_argument("spectra on mismatched grids");
  const auto& g = chirped.grid;
  const int n = g.n_points;
  const int m = n / 2;
  // index of the pair centre on the grid
  const int jc = m + static_cast<int>(std::lround((omega_centre - g.omega_offset) / g.dw));
  const int reach = std::min(jc - 0, n - 1 - jc);
  if (reach < 2) throw std::invalid_argument("pair centre too close to the band edge");
  BiphotonSpectrum s;
  s.detunings.resize(2 * reach + 1);
  s.weights.resize(2 * reach + 1);
  for (int j = -reach; j <= reach; ++j) {
    s.detunings[j + reach] = j * g.dw;
    s.weights[j + reach] =
        std::norm(chirped.samples[jc + j]) * std::norm(antichirped.samples[jc - j]);
  }
  return s;
}

namespace {

// Stack phase at omega0 + W with the value at omega0 removed (the constant is
// an irrelevant global phase).  Taylor layers are already expansions about
// their reference, index layers use the exact phase.
double stack_phase_rel(const SampleStack& sample, double omega0, double W) {
  if (sample.empty()) return 0.0;
  return material_phase_at(sample, omega0 + W) - material_phase_at(sample, omega0);
}

} // namespace

std::pair<double, double> phases(double detuning, const SampleStack& sample,
                                 double tau_fs, double omega0) {
  const double phi_plus = stack_phase_rel(sample, omega0, detuning);
  const double phi_minus = stack_phase_rel(sample, omega0, -detuning);
  return {phi_plus - detuning * tau_fs, phi_minus + detuning * tau_fs};
}

double coincidence_rate(const BiphotonSpectrum& spectrum,
                        const SampleStack& sample, double tau_fs,
                        double omega0) {
  const auto& W = spectrum.detunings;
  const auto& wt = spectrum.weights;
  if (W.size() != wt.size() || W.size() < 2)
    throw std::invalid_argument("invalid biphoton spectrum");
  double num = 0.0, den = 0.0;
  double prev_i = 0.0, prev_w = 0.0;
  for (std::size_t i = 0; i < W.size(); ++i) {
    const auto [phi_rr, phi_tt] = phases(W[i], sample, tau_fs, omega0);
    const double integrand = wt[i] * (1.0 - std::cos(phi_rr - phi_tt));
    if (i > 0) {
      const double h = W[i] - W[i - 1];
      num += 0.5 * h * (integrand + prev_i);
      den += 0.5 * h * (wt[i] + prev_w);
    }
    prev_i = integrand;
    prev_w = wt[i];
  }
  if (!(den > 0.0)) throw std::invalid_argument("biphoton weights not normalizable");
  return num / den;
}

Interferogram hom_dip(const BiphotonSpectrum& spectrum,
                      const SampleStack& sample, const ScanSpec& scan,
                      double omega0) {
  const auto xs = scan.positions();
  Interferogram tr = make_trace(xs, TraceKind::HomDip);
  for (std::size_t i = 0; i < xs.size(); ++i)
    tr.signal[i] = coincidence_rate(spectrum, sample, tr.delay_fs[i], omega0);
  return tr;
}

} // namespace cpi
