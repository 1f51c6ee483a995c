#include <doctest.h>

#include <cmath>

#include "cpi/hom.hpp"
#include "cpi/units.hpp"
#include "test_helpers.hpp"

using namespace cpi;
using namespace cpi::units;
using namespace cpi::test;

namespace {

const double kW0 = omega_from_wavelength_nm(790.0);

MaterialSpec taylor(double alpha, double beta, std::vector<double> higher = {}) {
  return MaterialSpec{"taylor", TaylorModel{alpha, beta, std::move(higher), kW0}, ""};
}

} // namespace

TEST_CASE("phases: trivial and structural cases") {
  SampleStack beta_only{{Layer{taylor(0.0, 25.0), 4.0}}};
  SampleStack alpha_only{{Layer{taylor(100.0, 0.0), 1.0}}};

  SUBCASE("zero detuning gives zero phases") {
    auto [rr, tt] = phases(0.0, beta_only, 123.0, kW0);
    CHECK(rr == 0.0);
    CHECK(tt == 0.0);
  }

  SUBCASE("beta drops out of the phase difference") {
    for (double W : {0.001, 0.01, 0.02}) {
      auto [rr, tt] = phases(W, beta_only, 55.0, kW0);
      CHECK(rr - tt == doctest::Approx(-2.0 * W * 55.0).epsilon(1e-14));
    }
  }

  SUBCASE("alpha-only difference vanishes at tau = alpha L for every detuning") {
    for (double W : {0.001, 0.005, 0.02}) {
      auto [rr, tt] = phases(W, alpha_only, 100.0, kW0);
      CHECK(std::abs(rr - tt) < 1e-12);
    }
  }
}

TEST_CASE("coincidence rate: exact zero at the group-delay match") {
  const auto spec = BiphotonSpectrum::gaussian(0.0252);
  SampleStack alpha_only{{Layer{taylor(100.0, 0.0), 1.0}}};
  CHECK(coincidence_rate(spec, alpha_only, 100.0, kW0) < 1e-12);
  // symmetric about the centre
  for (double u : {10.0, 40.0, 90.0}) {
    const double cp = coincidence_rate(spec, alpha_only, 100.0 + u, kW0);
    const double cm = coincidence_rate(spec, alpha_only, 100.0 - u, kW0);
    CHECK(std::abs(cp - cm) < 1e-12);
  }
}

TEST_CASE("even dispersion orders leave the rate untouched") {
  const auto spec = BiphotonSpectrum::gaussian(0.0252);
  SampleStack base{{Layer{taylor(100.0, 0.0), 1.0}}};
  for (double beta : {25.0, 2500.0}) {
    for (double quartic : {0.0, 5.0, 500.0}) {
      SampleStack pert{{Layer{taylor(100.0, beta, {0.0, quartic}), 1.0}}};
      for (double tau : {0.0, 50.0, 100.0, 173.0}) {
        const double c0 = coincidence_rate(spec, base, tau, kW0);
        const double c1 = coincidence_rate(spec, pert, tau, kW0);
        CHECK(std::abs(c1 - c0) < 1e-12);
      }
    }
  }
}

TEST_CASE("gaussian weights give the closed-form dip width") {
  // oracle: dense quadrature + numerical FWHM of (1 - C); closed form checks it
  const double dOmega = 0.0252; // intensity FWHM of |f|^2
  const auto spec = BiphotonSpectrum::gaussian(dOmega, 8193);
  SampleStack vacuum;
  std::vector<double> taus, dip;
  for (double t = -400.0; t <= 400.0; t += 0.5) {
    taus.push_back(t);
    dip.push_back(1.0 - coincidence_rate(spec, vacuum, t, kW0));
  }
  const double fwhm = measured_fwhm(taus, dip);
  CHECK(fwhm == doctest::Approx(4.0 * std::log(2.0) / dOmega).epsilon(1e-3));
  // same number written via the sigma form: 2 sqrt(2 ln 2) * (1 / (2 sigma))
  const double sigma = dOmega / kFwhmPerSigma;
  CHECK(fwhm == doctest::Approx(kFwhmPerSigma / (2.0 * sigma)).epsilon(1e-3));
}

TEST_CASE("quadrature converges: doubling the grid changes nothing") {
  SampleStack stack{{Layer{taylor(100.0, 30.0), 1.0}}};
  const auto s1 = BiphotonSpectrum::gaussian(0.0252, 4097);
  const auto s2 = BiphotonSpectrum::gaussian(0.0252, 8193);
  for (double tau : {0.0, 60.0, 100.0, 140.0}) {
    const double c1 = coincidence_rate(s1, stack, tau, kW0);
    const double c2 = coincidence_rate(s2, stack, tau, kW0);
    CHECK(std::abs(c2 - c1) < 1e-9);
  }
}

TEST_CASE("hom_dip trace: baseline one, centre at the group delay") {
  const auto spec = BiphotonSpectrum::gaussian(0.0252);
  SampleStack alpha_only{{Layer{taylor(100.0, 0.0), 1.0}}};
  // centre at tau = 100 fs -> stage 14.99 um
  const double x0 = delay_fs_to_stage_um(100.0);
  ScanSpec scan{x0 - 40.0, x0 + 40.0, 0.5};
  const Interferogram tr = hom_dip(spec, alpha_only, scan, kW0);
  CHECK(tr.kind == TraceKind::HomDip);

  std::size_t imin = 0;
  for (std::size_t i = 1; i < tr.size(); ++i)
    if (tr.signal[i] < tr.signal[imin]) imin = i;
  CHECK(std::abs(tr.stage_um[imin] - x0) <= scan.step_um);
  CHECK(tr.signal[imin] < 1e-10);

  // full visibility, baseline normalized to 1
  double edge = 0.5 * (tr.signal.front() + tr.signal.back());
  CHECK(edge == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("index-material stacks use the exact odd-part phase") {
  const MaterialDb db = MaterialDb::load(repo_path("data/materials.json"));
  SampleStack stack{{Layer{db.get("bk7"), 28.93}}};
  const double gd = group_delay(stack, kW0);
  const auto spec = BiphotonSpectrum::gaussian(0.0252);
  // rate is minimal where tau equals the stack group delay
  const double c_at = coincidence_rate(spec, stack, gd, kW0);
  const double c_off = coincidence_rate(spec, stack, gd + 30.0, kW0);
  CHECK(c_at < 1e-5);
  CHECK(c_off > 0.05);
  // third order makes the dip slightly asymmetric but must not move the zero
  for (double u : {5.0, 20.0}) {
    CHECK(coincidence_rate(spec, stack, gd + u, kW0) > c_at);
    CHECK(coincidence_rate(spec, stack, gd - u, kW0) > c_at);
  }
}
