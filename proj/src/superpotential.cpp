#include "fastosc/superpotential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace fastosc {
namespace {

/// Right-hand side evaluated with one-sided envelope values: side = +1 at a segment's left
/// end, -1 at its right end, 0 inside.
using Field = std::function<double(double x, double w, int side)>;
using JumpRule = std::function<double(double x)>;

std::vector<double> breakpoints_in(double x0, double x1, std::vector<double> points) {
  std::vector<double> out;
  for (double p : points)
    if (p > x0 && p < x1) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Trajectory integrate(const Field& field, const JumpRule& jump, double x0, double w0, double x1,
                     const std::vector<double>& breaks, double step, double cap) {
  if (!(x1 > x0)) throw std::invalid_argument("Riccati integration needs x1 > x0");
  if (!(step > 0)) throw std::invalid_argument("Riccati integration needs a positive step");

  std::vector<double> xs{x0}, ws{w0};
  Trajectory out;
  double w = w0;
  std::vector<double> edges{x0};
  edges.insert(edges.end(), breaks.begin(), breaks.end());
  edges.push_back(x1);

  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const double a = edges[seg], b = edges[seg + 1];
    if (seg > 0) {
      w += jump(a);
      xs.push_back(a);
      ws.push_back(w);
    }
    const auto n = static_cast<long>(std::ceil((b - a) / step - 1e-9));
    const double h = (b - a) / double(std::max(1L, n));
    for (long i = 0; i < std::max(1L, n); ++i) {
      const double x = a + double(i) * h;
      const double xm = x + 0.5 * h;
      const double xn = (i + 1 == std::max(1L, n)) ? b : a + double(i + 1) * h;
      const int side0 = i == 0 ? 1 : 0;
      const int side1 = (i + 1 == std::max(1L, n)) ? -1 : 0;
      const double k1 = field(x, w, side0);
      const double k2 = field(xm, w + 0.5 * h * k1, 0);
      const double k3 = field(xm, w + 0.5 * h * k2, 0);
      const double k4 = field(xn, w + h * k3, side1);
      const double next = w + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      if (!std::isfinite(next) || std::abs(next) > cap) {
        out.blowup_at = xn;
        out.x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
        out.value = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
        return out;
      }
      w = next;
      xs.push_back(xn);
      ws.push_back(w);
    }
  }
  out.x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  out.value = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  return out;
}

std::vector<double> jump_positions(const Envelope& envelope) {
  std::vector<double> out;
  for (const auto& d : envelope.discontinuities()) out.push_back(d.position);
  return out;
}

}  // namespace

double riccati_step(double k) { return std::min(kTwoPi / (64.0 * k), 1e-3); }

Trajectory integrate_exact(const ModulatedPotential& mp, double x0, double w0, double x1,
                           const RiccatiOptions& options) {
  const double k = mp.k();
  const PeriodicProfile& profile = mp.profile();
  const Envelope& envelope = mp.envelope();
  Field field = [&](double x, double w, int side) {
    const double g = profile.g(k * x);
    const double shifted = w - g * envelope.one_sided(x, side);
    return shifted * shifted - mp.background(x) + g * envelope.derivative(x, side);
  };
  JumpRule jump = [&](double x) {
    const auto [left, right] = envelope.limits(x);
    return jump_condition(right - left, phase_at(k, x), profile);
  };
  const double step = options.step > 0 ? options.step : riccati_step(k);
  return integrate(field, jump, x0, w0, x1, breakpoints_in(x0, x1, jump_positions(envelope)),
                   step, options.cap);
}

Trajectory integrate_averaged(double g_mean_square, const Envelope& envelope,
                              const RealFunction& background, double x0, double w0, double x1,
                              const RiccatiOptions& options, std::span<const DeltaTerm> deltas) {
  Field field = [&](double x, double w, int side) {
    const double phi = envelope.one_sided(x, side);
    return w * w + g_mean_square * phi * phi - (background ? background(x) : 0.0);
  };
  JumpRule jump = [&](double x) {
    double total = 0.0;
    for (const auto& d : deltas)
      if (d.position == x) total -= d.strength;
    return total;
  };
  std::vector<double> points = jump_positions(envelope);
  for (const auto& d : deltas) points.push_back(d.position);
  const double step = options.step > 0 ? options.step : 1e-3;
  return integrate(field, jump, x0, w0, x1, breakpoints_in(x0, x1, points), step, options.cap);
}

Eigen::VectorXd recover_superpotential(const ModulatedPotential& mp, const Trajectory& exact) {
  const Eigen::Index n = exact.x.size();
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = exact.x[i];
    // A breakpoint appears twice: before the jump (left limit) and after it (right limit).
    int side = 0;
    if (i + 1 < n && exact.x[i + 1] == x) side = -1;
    if (i > 0 && exact.x[i - 1] == x) side = 1;
    w[i] = exact.value[i] - mp.profile().g(mp.k() * x) * mp.envelope().one_sided(x, side);
  }
  return w;
}

double jump_condition(double delta_phi, double phase, const PeriodicProfile& profile) {
  if (delta_phi == 0.0) return 0.0;
  return profile.g(phase) * delta_phi;
}

double averaging_error(const ModulatedPotential& mp, double x0, double w0, double x1,
                       const RiccatiOptions& options) {
  RiccatiOptions shared = options;
  if (!(shared.step > 0)) shared.step = riccati_step(mp.k());
  const Trajectory exact = integrate_exact(mp, x0, w0, x1, shared);
  const EffectivePotential eff = effective_potential(mp);
  const Trajectory averaged =
      integrate_averaged(mp.profile().g_mean_square(), mp.envelope(), mp.background_function(),
                         x0, w0, x1, shared, eff.deltas);
  for (const Trajectory* t : {&exact, &averaged}) {
    if (t->blew_up()) {
      std::ostringstream msg;
      msg << "averaging_error: " << (t == &exact ? "exact" : "averaged")
          << " trajectory blows up at x = " << *t->blowup_at;
      throw BlowupError(msg.str(), *t->blowup_at);
    }
  }
  return (exact.value - averaged.value).cwiseAbs().maxCoeff();
}

}  // namespace fastosc
