#pragma once

#include <cmath>

// Unit conventions used throughout:
//   time fs, angular frequency rad/fs, wavelength nm, thickness mm,
//   stage position um.  A retro-reflected delay arm doubles the path,
//   so stage position x maps to delay tau = 2x/c.
namespace cpi::units {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double kC_um_fs = 0.299792458;   // speed of light, um/fs
inline constexpr double kC_nm_fs = 299.792458;    // nm/fs
inline constexpr double kC_mm_fs = 2.99792458e-4; // mm/fs

// Gaussian intensity FWHM <-> standard deviation
inline constexpr double kFwhmPerSigma = 2.3548200450309493; // 2*sqrt(2 ln 2)
inline constexpr double kFourLn2 = 2.772588722239781;

inline double omega_from_wavelength_nm(double lambda_nm) {
  return kTwoPi * kC_nm_fs / lambda_nm;
}

inline double wavelength_nm_from_omega(double omega) {
  return kTwoPi * kC_nm_fs / omega;
}

// Width of a spectral interval, rad/fs, for a wavelength interval at lambda.
inline double omega_width_from_wavelength_width(double dlambda_nm, double lambda_nm) {
  return kTwoPi * kC_nm_fs * dlambda_nm / (lambda_nm * lambda_nm);
}

// Transform-limited Gaussian: intensity FWHM in time <-> in angular frequency.
inline double tl_spectral_fwhm(double duration_fwhm_fs) {
  return kFourLn2 / duration_fwhm_fs;
}

inline double stage_um_to_delay_fs(double x_um) { return 2.0 * x_um / kC_um_fs; }
inline double delay_fs_to_stage_um(double tau_fs) { return tau_fs * kC_um_fs / 2.0; }

} // namespace cpi::units
