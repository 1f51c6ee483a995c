#include "cpi/wli_engine.hpp"

#include <cmath>

#include "cpi/parallel.hpp"
#include "cpi/units.hpp"

namespace cpi {

Interferogram wli_interferogram(const OpticalSetup& setup, const ScanSpec& scan,
                                int n_threads) {
  // Only the chirped pulse is used; build it the same way the cross-correlator
  // does (reshape + chirp), then split 50/50.
  const OpticalSetup& s = setup;
  auto [tg, fg] = setup_grids(s);
  SpectralField arm = arm_spectrum(s, s.chirped, tg, fg);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  SpectralField arm1 = arm; // delay arm
  SpectralField arm2 = arm; // sample arm
  for (auto& v : arm1.samples) v *= inv_sqrt2;
  for (auto& v : arm2.samples) v *= inv_sqrt2;
  if (!s.sample.empty())
    arm2 = apply_spectral_phase(arm2, material_phase(s.sample, fg));
  arm2 = attenuate(arm2, s.sample_transmission);

  // common frame shift by the stack group delay keeps long samples on-grid
  const double t_ref = s.sample.empty() ? 0.0 : group_delay(s.sample, fg.omega_offset);
  for (int k = 0; k < fg.n_points; ++k)
    arm2.samples[k] *= std::polar(1.0, -fg.detuning(k) * t_ref);

  const auto xs = scan.positions();
  Interferogram tr = make_trace(xs, TraceKind::WliFringes);
  const double dw_over_2pi = fg.dw / units::kTwoPi;
  const double guard = tg.span_fs() / 4.0;
  parallel_for_indexed(static_cast<int>(xs.size()), n_threads, [&](int i) {
    const double tau_rel = tr.delay_fs[i] - t_ref;
    if (std::abs(tau_rel) > guard)
      throw NumericalError("scan outside the grid guard band (wrap-around)");
    // Parseval: per-pulse energy of the superposition, summed in the
    // spectral domain; the carrier phase sets the fringes.
    const Complex carrier_rot = std::polar(1.0, fg.omega_offset * tau_rel);
    double e = 0.0;
    for (int k = 0; k < fg.n_points; ++k) {
      const Complex delayed =
          arm1.samples[k] * std::polar(1.0, fg.detuning(k) * tau_rel) * carrier_rot;
      e += std::norm(delayed + arm2.samples[k]);
    }
    tr.signal[i] = e * dw_over_2pi + s.detector.background;
  });
  return tr;
}

} // namespace cpi
