#include <cmath>

#include "doctest.h"
#include "ringsqueeze/error.hpp"
#include "ringsqueeze/noise.hpp"

using namespace ringsqueeze;

namespace {

const double kOmega = 2.0 * M_PI * 193e12;

ResonatorSpec ring() {
  ResonatorSpec r;
  r.round_trip_length = 2.0 * M_PI * 100e-6;
  r.group_index = 1.7;
  r.gamma_nl = 1.0;
  r.effective_index = 1.6;
  r.ring_radius = 100e-6;
  return r;
}

}  // namespace

TEST_CASE("spurious detuning formula") {
  const ResonatorSpec r = ring();
  const double v_g = 2.99792458e8 / 1.7;
  const double expected = -(3.0 * 2.99792458e8 / (kOmega * 1.6)) * 1.0 * (v_g * 1e6 / (2.0 * M_PI * 100e-6)) * 0.2;
  CHECK(spurious_detuning(r, kOmega, 1e6, 0.2) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(spurious_detuning(r, kOmega, 1e6, 0.0) == 0.0);
  CHECK(spurious_detuning(r, kOmega, 1e6, 0.4) == doctest::Approx(2.0 * expected).epsilon(1e-12));
  CHECK(spurious_detuning(r, kOmega, 2e6, 0.2) == doctest::Approx(2.0 * expected).epsilon(1e-12));

  ResonatorSpec missing = r;
  missing.effective_index.reset();
  CHECK_THROWS_AS(spurious_detuning(missing, kOmega, 1e6, 0.2), Error);
  missing = r;
  missing.ring_radius.reset();
  CHECK_THROWS_AS(spurious_detuning(missing, kOmega, 1e6, 0.2), Error);
}

TEST_CASE("detuning ratio matches the structural form") {
  const ResonatorSpec r = ring();
  const double q = 1e6;
  const double delta = spurious_detuning(r, kOmega, q, 0.2);
  const double linewidth = kOmega / q;
  const double xi = xi_parameter(r, kOmega);
  CHECK(std::abs(delta) / linewidth == doctest::Approx(xi * q * q * 0.2 / 100e-6).epsilon(1e-12));
}

TEST_CASE("suppression factor") {
  CHECK(suppression_factor(0.0, 1e9) == 1.0);
  CHECK(suppression_factor(1e9, 1e9) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(suppression_factor(3e9, 1e9) == doctest::Approx(0.1).epsilon(1e-15));
  for (double d : {-5e9, 1e7, 2.2e10}) {
    CHECK(suppression_factor(d, 1.3e9) * (1.0 + d * d / (1.3e9 * 1.3e9)) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("SNR worked example") {
  const double s = snr_structural(1e-3, 0.2, 1e-14, 1e6, 1e-4);
  CHECK(s == doctest::Approx(2.005).epsilon(0.01));
  CHECK(s == doctest::Approx((1e-3 / 0.2) * (1.0 + 400.0)).epsilon(1e-12));
  const NoiseReport r = noise_budget_from_xi(1e-14, kOmega, 1e6, 1e-4, 0.2, 1e-3);
  CHECK(r.snr == doctest::Approx(2.005).epsilon(0.01));
  CHECK(r.snr == doctest::Approx(r.snr_structural).epsilon(1e-9));
  CHECK_FALSE(r.bragg_scattering_modeled);
  CHECK(r.suppression > 0.0);
  CHECK(r.suppression <= 1.0);
}

TEST_CASE("SNR limits") {
  CHECK(snr(1e-3, 0.2, 0.0, 1e9) == doctest::Approx(1e-3 / 0.2).epsilon(1e-15));
  const double a = snr_structural(1e-3, 0.2, 1e-13, 1e6, 1e-4);
  const double b = snr_structural(1e-3, 0.4, 1e-13, 1e6, 1e-4);
  CHECK(b / a == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("both SNR forms agree for one device") {
  const ResonatorSpec r = ring();
  for (double q : {2e5, 1e6}) {
    for (double p_d : {0.05, 0.2}) {
      const NoiseReport rep = noise_budget(r, kOmega, q, p_d, 1e-3);
      CHECK(rep.snr == doctest::Approx(rep.snr_structural).epsilon(1e-9));
      CHECK(rep.linewidth == doctest::Approx(kOmega / q).epsilon(1e-15));
      CHECK(rep.suppression * (1.0 + rep.delta * rep.delta / (rep.linewidth * rep.linewidth)) ==
            doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}
