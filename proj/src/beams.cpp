#include "fastosc/beams.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fastosc {
namespace {

double envelope_factor(const BeamSetup& s, double x) {
  const double sa = std::sin(s.alpha);
  return std::exp(-x * x * sa * sa / (s.b * s.b));
}

}  // namespace

void validate(const BeamSetup& s) {
  if (!(s.alpha > 0 && s.alpha < kTwoPi / 4))
    throw std::invalid_argument("BeamSetup: alpha must lie in (0, pi/2)");
  if (!(s.kappa > 0) || !(s.b > 0))
    throw std::invalid_argument("BeamSetup: kappa and b must be positive");
  if (!std::isfinite(s.amplitude) || s.amplitude == 0)
    throw std::invalid_argument("BeamSetup: amplitude must be finite and nonzero");
}

double beam_wavenumber(const BeamSetup& s) { return 2 * s.kappa * std::cos(s.alpha); }

double intensity_on_axis(const BeamSetup& s, double x) {
  return s.amplitude * (1 + std::cos(beam_wavenumber(s) * x)) * envelope_factor(s, x);
}

double background(const BeamSetup& s, double x) { return s.amplitude * envelope_factor(s, x); }

BeamMapping to_modulated_form(const BeamSetup& s, double min_separation) {
  validate(s);
  const double k = beam_wavenumber(s);
  const double separation = k * s.b / std::sin(s.alpha);
  if (separation < min_separation) {
    std::ostringstream msg;
    msg << "to_modulated_form: scale separation k*b/sin(alpha) = " << separation
        << " is below " << min_separation;
    throw std::invalid_argument(msg.str());
  }
  const double sigma = s.b / (std::sqrt(2.0) * std::sin(s.alpha));
  RealFunction rho;
  if (!s.cancel_background) rho = [s](double x) { return background(s, x); };
  ModulatedPotential mp(k, cosine_profile(), gaussian_envelope(s.amplitude / k, sigma),
                        std::move(rho));
  return {std::move(mp), separation};
}

}  // namespace fastosc
