#pragma once

#include <utility>
#include <vector>

#include "cpi/elements.hpp"
#include "cpi/interferogram.hpp"

namespace cpi {

// Two-photon amplitude weights |f(W)|^2 on a symmetric detuning grid about
// the pair centre frequency.
struct BiphotonSpectrum {
  std::vector<double> detunings; // rad/fs, symmetric about 0
  std::vector<double> weights;   // >= 0

  // Gaussian |f|^2 with the given intensity FWHM; 4097 points over +-4 sigma.
  static BiphotonSpectrum gaussian(double intensity_fwhm_radfs,
                                   int n_points = 4097, double n_sigma = 4.0);
};

// Weights for the classical bridge: |f(W)|^2 = S_c(w_centre + W) * S_a(w_centre - W)
// from the two optical intensity spectra (pairs about w_centre).
BiphotonSpectrum product_biphoton_weights(const SpectralField& chirped,
                                          const SpectralField& antichirped,
                                          double omega_centre);

// Phases of the doubly-reflected / doubly-transmitted alternatives at pair
// detuning W, sample phase evaluated about omega0:
//   phi_rr = phi_m(+W) - W*tau,  phi_tt = phi_m(-W) + W*tau
// with phi_m(W) the stack phase relative to its own value at omega0 (Taylor
// layers use their expansion directly; index layers the exact phase).
std::pair<double, double> phases(double detuning, const SampleStack& sample,
                                 double tau_fs, double omega0);

// Coincidence integral by trapezoidal quadrature, normalized so that the
// large-delay baseline equals 1.
double coincidence_rate(const BiphotonSpectrum& spectrum,
                        const SampleStack& sample, double tau_fs,
                        double omega0);

Interferogram hom_dip(const BiphotonSpectrum& spectrum,
                      const SampleStack& sample, const ScanSpec& scan,
                      double omega0);

} // namespace cpi
