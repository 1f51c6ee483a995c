#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cpi/grids.hpp"

namespace cpi {

// Refractive-index dispersion as a sum of analytic terms in lambda (um):
//   Constant:   n^2 += b
//   Sellmeier:  n^2 += b * l2 / (l2 - c)
//   Pole:       n^2 += b / (l2 - c)
//   LambdaSq:   n^2 += b * l2
// The plain three-term Sellmeier form is Constant{1} plus Sellmeier terms;
// the extra term kinds admit the Handbook-style calcite formula.
struct DispersionTerm {
  enum class Kind { Constant, Sellmeier, Pole, LambdaSq };
  Kind kind = Kind::Constant;
  double b = 0.0;
  double c = 0.0; // um^2, resonance position (Sellmeier/Pole only)
};

struct IndexModel {
  std::vector<DispersionTerm> terms;
  double n_squared(double lambda_um) const;
  double index(double lambda_um) const;
};

// Wavevector expansion about omega_ref: phase per mm is
//   alpha*W + beta*W^2 + sum_k higher[k-3]*W^k  (W = omega - omega_ref)
struct TaylorModel {
  double alpha_fs_per_mm = 0.0;
  double beta_fs2_per_mm = 0.0;
  std::vector<double> higher; // fs^3/mm, fs^4/mm, ...
  double omega_ref = 0.0;
};

struct MaterialSpec {
  std::string name;
  std::variant<IndexModel, TaylorModel> model;
  std::string source; // provenance of the coefficients
};

struct Layer {
  MaterialSpec material;
  double thickness_mm = 0.0;
};

// Ordered list of layers; propagation is linear so the order only matters
// for bookkeeping.  Empty stack = vacuum.
struct SampleStack {
  std::vector<Layer> layers;
  bool empty() const { return layers.empty(); }
};

// Quadratic spectral phase A*W^2 (fs^2).  Positive A delays the blue side
// (chirped / normal); negative A is the anti-chirped pulse.  overlap_offset
// is this pulse's arrival delay at the combining beamsplitter.
struct ChirpSpec {
  double quadratic_phase_fs2 = 0.0;
  double overlap_offset_fs = 0.0;
};

// Spectral phase of the stack relative to vacuum, per grid frequency:
// sum over layers of [k(omega) - omega/c] * L.  Empty stack -> zeros.
std::vector<double> material_phase(const SampleStack& stack,
                                   const FrequencyGrid& grid);

// Scalar version of the same phase.
double material_phase_at(const SampleStack& stack, double omega);

// d(phase)/d(omega) at omega_eval, fs.  Analytic for Taylor layers, centred
// finite differences (step fd_step) for index layers.
double group_delay(const SampleStack& stack, double omega_eval,
                   double fd_step = 1e-4);

// (1/2) d^2(phase)/d(omega)^2, fs^2 (equals beta*L for a Taylor layer).
double gvd(const SampleStack& stack, double omega_eval, double fd_step = 1e-4);

SpectralField apply_spectral_phase(const SpectralField& f,
                                   std::span<const double> phase);

// A for which the stretched intensity FWHM is target_duration:
// |A| = target / (2 * spectral_fwhm); sign +1 chirped, -1 anti-chirped.
ChirpSpec chirp_for_duration(double target_duration_fs,
                             double spectral_fwhm_radfs, int sign);

std::pair<TemporalField, TemporalField>
beamsplitter_combine(const TemporalField& chirped,
                     const TemporalField& antichirped);
std::pair<SpectralField, SpectralField>
beamsplitter_combine(const SpectralField& chirped,
                     const SpectralField& antichirped);

TemporalField attenuate(const TemporalField& f, double transmission);
SpectralField attenuate(const SpectralField& f, double transmission);

// Exact time translate: envelope shifted by tau and carrier phase rotated so
// that the physical field a(t) e^{-i w t} is translated as a whole.
TemporalField delay_field(const TemporalField& f, double tau_fs);

enum class FilterShape { Gaussian, Rectangular };

// Amplitude bandpass with intensity FWHM fwhm_nm converted to rad/fs at the
// centre wavelength.  fwhm_nm = +inf is the identity.
SpectralField bandpass_filter(const SpectralField& f, double centre_nm,
                              double fwhm_nm,
                              FilterShape shape = FilterShape::Gaussian);

// Intensity transmission of that filter on a grid (used by the engines).
std::vector<double> filter_transmission(const FrequencyGrid& grid,
                                        double centre_nm, double fwhm_nm,
                                        FilterShape shape);

// Materials file: JSON mapping material names to dispersion models.
class MaterialDb {
public:
  static MaterialDb load(const std::string& path);
  const MaterialSpec& get(const std::string& name) const;
  bool has(const std::string& name) const { return materials_.count(name) > 0; }

private:
  std::map<std::string, MaterialSpec> materials_;
};

} // namespace cpi
