#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cpi/elements.hpp"
#include "cpi/interferogram.hpp"

namespace cpi {

struct LaserSpec {
  double centre_wavelength_nm = 790.0;
  double fwhm_duration_fs = 110.0;
  double pulse_energy = 1.0; // arbitrary units, per pulse
};

struct FilterSpec {
  double centre_wavelength_nm = 395.9;
  double fwhm_nm = 0.4;
  FilterShape shape = FilterShape::Gaussian;
};

struct DetectorSpec {
  double background = 0.0; // added to every detected power, >= 0
  double bias = 0.0;       // raw-readout offset, handled by the analysis side
};

// One interferometer arm before the beamsplitter: chirp phase plus an
// optional Gaussian reshaping of the seed spectrum to a target intensity
// FWHM (models bandwidth loss in the stretcher / compressor; the arm energy
// is renormalized to the seed energy).
struct ArmSpec {
  ChirpSpec chirp;
  std::optional<double> bandwidth_fwhm_nm;
};

struct GridSpec {
  int n_points = 32768;
  double span_factor = 8.0; // span = factor x longest stretched duration
  std::optional<double> span_fs_override;
};

struct OpticalSetup {
  LaserSpec laser;
  ArmSpec chirped;     // quadratic_phase_fs2 > 0
  ArmSpec antichirped; // quadratic_phase_fs2 < 0
  SampleStack sample;
  double sample_transmission = 1.0; // eta in [0, 1]
  FilterSpec filter;
  // Phase-matching acceptance of the up-conversion, modeled as a Gaussian
  // spectral filter on both input arms about half the detection frequency;
  // the width is quoted as an intensity FWHM in nm at the SFG wavelength.
  // nullopt = ideal (no acceptance limit).
  std::optional<double> sfg_acceptance_fwhm_nm;
  DetectorSpec detector;
  GridSpec grid;
};

struct SpectrumMap {
  std::vector<double> stage_um;
  std::vector<double> wavelength_nm;       // bin centres
  std::vector<std::vector<double>> power;  // [stage][wavelength], >= 0
};

struct MapSpec {
  double span_nm = 6.0;  // full window width about the filter centre
  double bin_nm = 0.02;
};

// Both cross-correlator inputs after the combining beamsplitter, sample
// dispersion and loss applied to the sample arm.  ref_delay_fs is the common
// time-frame shift (the stack group delay) that keeps long-sample runs inside
// the grid; detected powers are invariant under it.
struct PreparedArms {
  SpectralField delay_arm;
  SpectralField sample_arm;
  TimeGrid time_grid;
  double ref_delay_fs = 0.0;
};

std::pair<TimeGrid, FrequencyGrid> setup_grids(const OpticalSetup& setup);

// One input pulse spectrum: the seed, optionally reshaped to the arm
// bandwidth, with the chirp phase and arrival offset applied.
SpectralField arm_spectrum(const OpticalSetup& setup, const ArmSpec& arm,
                           const TimeGrid& tg, const FrequencyGrid& fg);

PreparedArms prepare_arms(const OpticalSetup& setup);

// Pointwise product of the delayed arm with the sample arm; output carrier is
// the sum of the input carriers.  The acceptance filter, when given, applies
// to both inputs in the spectral domain.
TemporalField sfg_field(const TemporalField& delay_arm,
                        const TemporalField& sample_arm, double tau_fs,
                        std::optional<double> acceptance_fwhm_nm = std::nullopt,
                        double acceptance_centre_nm = 0.0);

// Per-pulse energy transmitted by the bandpass, plus the detector background.
double detect(const TemporalField& sfg, const FilterSpec& filter,
              double background = 0.0);

Interferogram cpi_interferogram(const OpticalSetup& setup, const ScanSpec& scan,
                                int n_threads = 1);

SpectrumMap sfg_spectrum_map(const OpticalSetup& setup, const ScanSpec& scan,
                             const MapSpec& map = {}, int n_threads = 1);

std::vector<std::pair<double, double>>
loss_sweep(const OpticalSetup& setup, const ScanSpec& scan,
           const std::vector<double>& transmissions, int n_threads = 1);

} // namespace cpi
