#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cpi/interferogram.hpp"

namespace cpi {

struct FitResult {
  double visibility = 0.0;
  double centre_um = 0.0;
  double fwhm_um = 0.0;
  double fwhm_fs = 0.0;
  double baseline = 0.0;
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Mean of the outermost 10% of points on each side; the baseline rule shared
// by dip fitting and dip_visibility.
double outer_baseline(const Interferogram& trace);

// Raw detector offset removal (signal - bias); negative results are clamped
// to zero and noted on the trace.
Interferogram subtract_bias(const Interferogram& trace, double bias);

// Damped least-squares fit of S(x) = B * (1 - V exp(-(x-x0)^2 / 2 w^2)) with
// analytic Jacobian.  Initialized from the edge-mean baseline, argmin and the
// half-depth width; converged when the relative step < 1e-10 (200 iter cap).
FitResult fit_gaussian_dip(const Interferogram& trace);

// Magnitude of the analytic signal of (signal - mean).  Requires >= 8 samples
// per fringe (checked against the dominant spectral component).
std::vector<double> hilbert_envelope(const Interferogram& trace);

// FWHM by linear interpolation at half maximum and the centroid of the
// half-max region.  5% of samples at each end are discarded first; more than
// one lobe above half max is an error.
std::pair<double, double> envelope_fwhm_centre(std::span<const double> envelope,
                                               std::span<const double> axis);

// (baseline - min) / baseline with the outer-10% baseline rule.
double dip_visibility(const Interferogram& trace);

// Fringe visibility of a WLI trace: peak of the interior Hilbert envelope
// over the mean signal (equals (max-min)/(max+min) for an ideal two-beam
// pattern).
double fringe_visibility(const Interferogram& trace);

} // namespace cpi
