#pragma once

#include "fastosc/potentials.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <stdexcept>

namespace fastosc {

/// Settings for the fixed-step RK4 Riccati integrators.
struct RiccatiOptions {
  /// |W'| above this value is treated as a pole of the Riccati solution.
  double cap = 1e6;
  /// Step size; 0 selects min(2π/(64k), 1e-3) for the oscillating equation and 1e-3 for the
  /// averaged one.
  double step = 0.0;
};

/// A superpotential trajectory sampled on the integration grid. Values after a blowup are not
/// recorded; `x` and `value` end at the last finite step.
struct Trajectory {
  Eigen::VectorXd x;
  Eigen::VectorXd value;
  std::optional<double> blowup_at;

  bool blew_up() const { return blowup_at.has_value(); }
};

class BlowupError : public std::runtime_error {
 public:
  BlowupError(const std::string& what, double where)
      : std::runtime_error(what), where_(where) {}
  double where() const { return where_; }

 private:
  double where_;
};

/// Default step for a given oscillation wavenumber.
double riccati_step(double k);

/// Integrates the transformed superpotential W' = W + g(kx)Φ(x):
///   dW'/dx = [W' - g(kx)Φ]² - ρ + g(kx)Φ'(x),
/// from W'(x0) = w0 to x1 > x0. At envelope discontinuities W stays continuous, so W' jumps
/// by g(kx_n)ΔΦ(x_n).
Trajectory integrate_exact(const ModulatedPotential& mp, double x0, double w0, double x1,
                           const RiccatiOptions& options = {});

/// Integrates the period-averaged equation dW̄'/dx = W̄'² + <g²>Φ² - ρ. A delta term s·δ(x-x_n)
/// of the effective potential makes W̄' jump by -s = g(φ_n)ΔΦ(x_n).
Trajectory integrate_averaged(double g_mean_square, const Envelope& envelope,
                              const RealFunction& background, double x0, double w0, double x1,
                              const RiccatiOptions& options = {},
                              std::span<const DeltaTerm> deltas = {});

/// W = W' - g(kx)Φ(x) along an exact trajectory.
Eigen::VectorXd recover_superpotential(const ModulatedPotential& mp, const Trajectory& exact);

/// Step g(φ0)·ΔΦ that W' takes across an envelope discontinuity.
double jump_condition(double delta_phi, double phase, const PeriodicProfile& profile);

/// max |W' - W̄'| over the shared grid. Throws BlowupError if either trajectory blows up.
double averaging_error(const ModulatedPotential& mp, double x0, double w0, double x1,
                       const RiccatiOptions& options = {});

}  // namespace fastosc
