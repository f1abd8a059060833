#include "doctest.h"

#include "fastosc/beams.hpp"

#include <cmath>

using namespace fastosc;

namespace {

BeamSetup reference_setup(bool cancel = true) { return {200, M_PI / 6, 2, 3464.1, cancel}; }

}  // namespace

TEST_SUITE("beams") {
  TEST_CASE("intensity and background") {
    const auto s = reference_setup();
    CHECK(intensity_on_axis(s, 0) == doctest::Approx(2 * s.amplitude));
    CHECK(background(s, 0) == doctest::Approx(s.amplitude));
    const double node = M_PI / (2 * s.kappa * std::cos(s.alpha));
    CHECK(std::abs(intensity_on_axis(s, node)) < 1e-9 * s.amplitude);
    CHECK(intensity_on_axis(s, 60) < 1e-12);
    for (double x : {-1.3, 0.01, 2.2}) {
      const double env = s.amplitude * std::exp(-x * x * 0.25 / 4);
      CHECK(intensity_on_axis(s, x) - background(s, x) ==
            doctest::Approx(env * std::cos(2 * s.kappa * x * std::cos(s.alpha))));
    }
  }

  TEST_CASE("wavenumber and envelope width") {
    const auto s = reference_setup();
    CHECK(beam_wavenumber(s) == doctest::Approx(346.41).epsilon(1e-4));
    CHECK(s.b / std::sin(s.alpha) == doctest::Approx(4));
    BeamSetup wide = s;
    wide.alpha = M_PI / 2 - 1e-9;
    // Envelope e-folding width tends to b.
    CHECK(background(wide, wide.b) / background(wide, 0) == doctest::Approx(std::exp(-1.0)));
  }

  TEST_CASE("round trip through the modulated form") {
    for (bool cancel : {true, false}) {
      const auto s = reference_setup(cancel);
      const auto m = to_modulated_form(s);
      CHECK(m.potential.k() == doctest::Approx(beam_wavenumber(s)));
      CHECK(m.scale_separation == doctest::Approx(beam_wavenumber(s) * 4));
      for (double x = -8; x <= 8; x += 0.0137) {
        const double expected = intensity_on_axis(s, x) - (cancel ? background(s, x) : 0.0);
        CHECK(std::abs(evaluate_full(m.potential, x) - expected) <= 1e-12 * s.amplitude);
      }
    }
  }

  TEST_CASE("effective well depth") {
    const auto s = reference_setup();
    const auto m = to_modulated_form(s);
    const auto eff = effective_potential(m.potential);
    const double k = m.potential.k();
    for (double x : {0.0, 1.0, 3.0})
      CHECK(eff.smooth(x) == doctest::Approx(-s.amplitude * s.amplitude / (2 * k * k) *
                                            std::exp(-2 * x * x * 0.25 / 4)));
    BeamSetup red = s;
    red.amplitude = -s.amplitude;
    CHECK(effective_potential(to_modulated_form(red).potential).smooth(0.5) ==
          doctest::Approx(eff.smooth(0.5)));
  }

  TEST_CASE("invalid setups") {
    auto s = reference_setup();
    s.alpha = M_PI / 2;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = reference_setup();
    s.b = 0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = reference_setup();
    s.amplitude = 0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = reference_setup();
    s.kappa = 0.1;
    CHECK_THROWS_AS(to_modulated_form(s), std::invalid_argument);
    CHECK_NOTHROW(to_modulated_form(reference_setup(), 1000));
    CHECK_THROWS_AS(to_modulated_form(reference_setup(), 2000), std::invalid_argument);
  }
}
