#pragma once

#include "cpi/cpi_engine.hpp"
#include "cpi/interferogram.hpp"

namespace cpi {

// Classical reference interferometer: the chirped pulse split into both arms,
// one arm delayed, the other through the sample with transmission eta, and
// the recombined infrared intensity detected per delay.  Fringes at a period
// of half the centre wavelength in stage position, under the first-order
// coherence envelope.
Interferogram wli_interferogram(const OpticalSetup& setup, const ScanSpec& scan,
                                int n_threads = 1);

} // namespace cpi
