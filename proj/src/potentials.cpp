#include "fastosc/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace fastosc {
namespace {

double step_offset(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }

double wrapped_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

}  // namespace

Envelope::Envelope(RealFunction value, RealFunction derivative, std::vector<Discontinuity> jumps,
                   std::string name)
    : value_(std::move(value)),
      derivative_(std::move(derivative)),
      jumps_(std::move(jumps)),
      name_(std::move(name)) {
  std::sort(jumps_.begin(), jumps_.end(),
            [](const Discontinuity& a, const Discontinuity& b) { return a.position < b.position; });
}

const Discontinuity* Envelope::jump_at(double x) const {
  for (const auto& j : jumps_)
    if (std::abs(x - j.position) <= 1e-12 * std::max(1.0, std::abs(j.position))) return &j;
  return nullptr;
}

std::pair<double, double> Envelope::limits(double x) const {
  if (const Discontinuity* j = jump_at(x)) {
    const double right = value_(j->position + step_offset(j->position));
    return {right - j->jump, right};
  }
  const double v = value_(x);
  return {v, v};
}

double Envelope::operator()(double x) const {
  if (jump_at(x) == nullptr) return value_(x);
  const auto [left, right] = limits(x);
  return 0.5 * (left + right);
}

double Envelope::one_sided(double x, int side) const {
  if (side == 0) return (*this)(x);
  const auto [left, right] = limits(x);
  return side < 0 ? left : right;
}

double Envelope::derivative(double x, int side) const {
  if (derivative_) return derivative_(x);
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  if (side < 0) return (value_(x - step_offset(x)) - value_(x - h)) / (h - step_offset(x));
  if (side > 0) return (value_(x + h) - value_(x + step_offset(x))) / (h - step_offset(x));
  return (value_(x + h) - value_(x - h)) / (2 * h);
}

Envelope Envelope::negated() const {
  std::vector<Discontinuity> flipped = jumps_;
  for (auto& j : flipped) j.jump = -j.jump;
  RealFunction d;
  if (derivative_) d = [f = derivative_](double x) { return -f(x); };
  return Envelope([f = value_](double x) { return -f(x); }, std::move(d), std::move(flipped),
                  "-" + name_);
}

Envelope zero_envelope() {
  return Envelope([](double) { return 0.0; }, [](double) { return 0.0; }, {}, "zero");
}

Envelope sech_envelope(double amplitude) {
  return Envelope([amplitude](double x) { return amplitude / std::cosh(x); },
                  [amplitude](double x) { return -amplitude * std::tanh(x) / std::cosh(x); }, {},
                  "sech");
}

Envelope square_envelope(double amplitude, double half_width) {
  if (!(half_width > 0)) throw std::invalid_argument("square_envelope: half_width must be > 0");
  return Envelope(
      [amplitude, half_width](double x) { return std::abs(x) < half_width ? amplitude : 0.0; },
      [](double) { return 0.0; },
      {{-half_width, amplitude}, {half_width, -amplitude}}, "square");
}

Envelope gaussian_envelope(double amplitude, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("gaussian_envelope: sigma must be > 0");
  const double inv = 1.0 / (2 * sigma * sigma);
  return Envelope([amplitude, inv](double x) { return amplitude * std::exp(-x * x * inv); },
                  [amplitude, inv](double x) {
                    return -2 * x * inv * amplitude * std::exp(-x * x * inv);
                  },
                  {}, "gaussian");
}

Envelope tabulated_envelope(std::vector<double> xs, std::vector<double> values,
                            std::vector<Discontinuity> jumps) {
  if (xs.size() != values.size() || xs.size() < 2)
    throw std::invalid_argument("tabulated_envelope: need >= 2 (x, value) pairs");
  if (!std::is_sorted(xs.begin(), xs.end()))
    throw std::invalid_argument("tabulated_envelope: abscissae must be nondecreasing");

  auto interp = [xs, values](double x) {
    if (x < xs.front() || x > xs.back()) return 0.0;
    // Right-continuous: at a repeated abscissa pick the last entry.
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return values.back();
    const auto hi = static_cast<std::size_t>(it - xs.begin());
    const auto lo = hi - 1;
    const double span = xs[hi] - xs[lo];
    if (span <= 0) return values[hi];
    const double t = (x - xs[lo]) / span;
    return (1 - t) * values[lo] + t * values[hi];
  };

  auto declared = [&](double x) {
    return std::any_of(jumps.begin(), jumps.end(), [&](const Discontinuity& j) {
      return std::abs(j.position - x) <= 1e-12 * std::max(1.0, std::abs(x));
    });
  };
  const double scale =
      std::max(1.0, std::abs(*std::max_element(values.begin(), values.end(),
                                                [](double a, double b) {
                                                  return std::abs(a) < std::abs(b);
                                                })));
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (xs[i] == xs[i + 1] && values[i] != values[i + 1] && !declared(xs[i])) {
      std::ostringstream msg;
      msg << "tabulated_envelope: undeclared step at x = " << xs[i];
      throw std::invalid_argument(msg.str());
    }
  for (const auto& j : jumps) {
    const double h = step_offset(j.position);
    const double actual = interp(j.position + h) - interp(j.position - h);
    if (std::abs(actual - j.jump) > 1e-6 * scale) {
      std::ostringstream msg;
      msg << "tabulated_envelope: declared jump " << j.jump << " at x = " << j.position
          << " does not match the table (" << actual << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  return Envelope(std::move(interp), {}, std::move(jumps), "tabulated");
}

void require_decay(const Envelope& envelope, double x_min, double x_max, double tolerance) {
  for (double x : {x_min, x_max}) {
    if (std::abs(envelope(x)) >= tolerance) {
      std::ostringstream msg;
      msg << "envelope '" << envelope.name() << "' does not decay on the grid: |Phi(" << x
          << ")| = " << std::abs(envelope(x)) << " >= " << tolerance;
      throw std::invalid_argument(msg.str());
    }
  }
}

ModulatedPotential::ModulatedPotential(double k, PeriodicProfile profile, Envelope envelope,
                                       RealFunction background)
    : k_(k),
      profile_(std::move(profile)),
      envelope_(std::move(envelope)),
      background_(std::move(background)) {
  if (!(k > 0)) throw std::invalid_argument("ModulatedPotential: k must be positive");
  if (k < 10)
    std::clog << "warning: k = " << k
              << " is below 10; the averaged description degrades as O(1/k)\n";
}

double ModulatedPotential::operator()(double x) const {
  return k_ * profile_.v(k_ * x) * envelope_(x) + background(x);
}

EffectivePotential effective_potential(const ModulatedPotential& mp) {
  const double msq = mp.profile().g_mean_square();
  EffectivePotential eff;
  eff.smooth = [msq, envelope = mp.envelope(), rho = mp.background_function()](double x) {
    const auto [left, right] = envelope.limits(x);
    const double bg = rho ? rho(x) : 0.0;
    return -msq * 0.5 * (left * left + right * right) + bg;
  };
  for (const auto& j : mp.envelope().discontinuities()) {
    const double phase = phase_at(mp.k(), j.position);
    eff.deltas.push_back({j.position, -j.jump * mp.profile().g(phase)});
  }
  return eff;
}

double phase_at(double k, double x0) {
  double phase = std::fmod(k * x0, kTwoPi);
  if (phase < 0) phase += kTwoPi;
  // fmod can leave a value one rounding short of a full turn.
  if (kTwoPi - phase < 1e-12) phase = 0.0;
  return phase;
}

double find_phase_locked_k(double target_k, const std::vector<PhaseConstraint>& constraints) {
  if (!(target_k > 0)) throw PhaseLockError("find_phase_locked_k: target_k must be positive");
  constexpr double kTolerance = 1e-12;

  const PhaseConstraint* pivot = nullptr;
  for (const auto& c : constraints) {
    if (c.position == 0.0) {
      if (wrapped_distance(0.0, c.phase) > kTolerance)
        throw PhaseLockError("find_phase_locked_k: constraint at x = 0 requires phase 0");
      continue;
    }
    if (pivot == nullptr || std::abs(c.position) < std::abs(pivot->position)) pivot = &c;
  }
  if (pivot == nullptr) return target_k;

  auto satisfies = [&](double k) {
    return std::all_of(constraints.begin(), constraints.end(), [&](const PhaseConstraint& c) {
      return wrapped_distance(phase_at(k, c.position), c.phase) <= kTolerance;
    });
  };

  // Candidates k_m = (φ + 2πm)/x of the coarsest lattice, scanned outward from the target.
  const double x = pivot->position;
  const double centre = (target_k * x - pivot->phase) / kTwoPi;
  const long base = std::lround(centre);
  constexpr long kMaxSteps = 1000000;
  for (long step = 0; step <= kMaxSteps; ++step) {
    double best = -1.0;
    for (long m : {base - step, base + step}) {
      const double k = (pivot->phase + kTwoPi * double(m)) / x;
      if (k <= 0 || !satisfies(k)) continue;
      if (best < 0 || std::abs(k - target_k) < std::abs(best - target_k)) best = k;
    }
    if (best > 0) return best;
  }
  std::ostringstream msg;
  msg << "find_phase_locked_k: no k near " << target_k << " satisfies all "
      << constraints.size() << " phase constraints";
  throw PhaseLockError(msg.str());
}

}  // namespace fastosc
