#pragma once

#include "fastosc/profiles.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fastosc {

/// A step of the envelope: jump = Φ(x+0) - Φ(x-0).
struct Discontinuity {
  double position = 0.0;
  double jump = 0.0;
};

/// Slowly varying envelope Φ(x) that vanishes at ±∞, smooth or piecewise continuous.
///
/// At a declared discontinuity the envelope evaluates to the mean of its one-sided limits;
/// this is what a grid node sitting exactly on the step should see.
class Envelope {
 public:
  /// `value` is evaluated only away from declared discontinuities. `derivative` may be
  /// empty, in which case a central difference of `value` is used.
  Envelope(RealFunction value, RealFunction derivative, std::vector<Discontinuity> jumps,
           std::string name);

  double operator()(double x) const;

  /// side < 0: left limit, side > 0: right limit, 0: operator().
  double one_sided(double x, int side) const;

  /// Φ'(x). Without an analytic derivative, side < 0 / > 0 selects a backward / forward
  /// difference so that a neighbouring step is not straddled.
  double derivative(double x, int side = 0) const;

  /// (Φ(x-0), Φ(x+0)); equal away from discontinuities.
  std::pair<double, double> limits(double x) const;

  const std::vector<Discontinuity>& discontinuities() const { return jumps_; }
  const std::string& name() const { return name_; }

  Envelope negated() const;

 private:
  const Discontinuity* jump_at(double x) const;

  RealFunction value_;
  RealFunction derivative_;
  std::vector<Discontinuity> jumps_;
  std::string name_;
};

Envelope zero_envelope();

/// a·sech(x).
Envelope sech_envelope(double amplitude);

/// a on |x| < half_width, 0 outside, with jumps +a at -half_width and -a at +half_width.
Envelope square_envelope(double amplitude, double half_width = 1.0);

/// a·exp(-x²/(2σ²)).
Envelope gaussian_envelope(double amplitude, double sigma);

/// Piecewise-linear interpolation of (x, value) pairs, zero outside the table. A repeated
/// abscissa encodes a step; every step must also be declared in `jumps` with a matching size.
Envelope tabulated_envelope(std::vector<double> xs, std::vector<double> values,
                            std::vector<Discontinuity> jumps);

/// Throws std::invalid_argument unless |Φ(x_min)| and |Φ(x_max)| are below `tolerance`.
void require_decay(const Envelope& envelope, double x_min, double x_max, double tolerance = 1e-6);

/// V(x) = k v(kx) Φ(x) + ρ(x).
class ModulatedPotential {
 public:
  /// Empty `background` means ρ ≡ 0. Prints a warning to std::clog when k < 10.
  ModulatedPotential(double k, PeriodicProfile profile, Envelope envelope,
                     RealFunction background = {});

  double operator()(double x) const;

  double k() const { return k_; }
  const PeriodicProfile& profile() const { return profile_; }
  const Envelope& envelope() const { return envelope_; }
  double background(double x) const { return background_ ? background_(x) : 0.0; }
  const RealFunction& background_function() const { return background_; }

 private:
  double k_;
  PeriodicProfile profile_;
  Envelope envelope_;
  RealFunction background_;
};

/// evaluate_full.
inline double evaluate_full(const ModulatedPotential& mp, double x) { return mp(x); }

/// s·δ(x - position).
struct DeltaTerm {
  double position = 0.0;
  double strength = 0.0;
};

/// V_eff(x) = -<g²>Φ²(x) + ρ(x) + Σ s_n δ(x - x_n).
struct EffectivePotential {
  RealFunction smooth;
  std::vector<DeltaTerm> deltas;
};

EffectivePotential effective_potential(const ModulatedPotential& mp);

/// k·x0 reduced to [0, 2π).
double phase_at(double k, double x0);

struct PhaseConstraint {
  double position = 0.0;
  double phase = 0.0;
};

class PhaseLockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The positive k closest to `target_k` with k·x_n ≡ φ_n (mod 2π) for every constraint.
/// Throws PhaseLockError when no such k exists within the search window.
double find_phase_locked_k(double target_k, const std::vector<PhaseConstraint>& constraints);

}  // namespace fastosc
