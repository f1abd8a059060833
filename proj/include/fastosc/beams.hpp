#pragma once

#include "fastosc/potentials.hpp"

namespace fastosc {

/// Two Gaussian beams of optical wavenumber κ crossing at 2α, seen along the x axis.
/// `amplitude` absorbs E0² and the polarizability; its sign selects the detuning.
struct BeamSetup {
  double kappa = 0.0;
  double alpha = 0.0;
  double b = 0.0;
  double amplitude = 0.0;
  bool cancel_background = true;
};

void validate(const BeamSetup& setup);

/// amplitude·(1 + cos(2κx cos α))·exp(-x² sin²α / b²).
double intensity_on_axis(const BeamSetup& setup, double x);

/// amplitude·exp(-x² sin²α / b²), the part removed by the cancelling beam.
double background(const BeamSetup& setup, double x);

/// Oscillation wavenumber 2κ cos α.
double beam_wavenumber(const BeamSetup& setup);

struct BeamMapping {
  ModulatedPotential potential;
  /// k·b/sin α: oscillation wavenumber over the inverse envelope width.
  double scale_separation;
};

/// k = 2κ cos α, v = cos, Φ = (amplitude/k)·exp(-x² sin²α/b²), ρ = 0 or the background.
/// Throws std::invalid_argument when the scale separation is below `min_separation`.
BeamMapping to_modulated_form(const BeamSetup& setup, double min_separation = 10.0);

}  // namespace fastosc
