#include "fastosc/analytic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fastosc {
namespace {

constexpr double kPi = 3.14159265358979323846;

int integer_lambda(double a) {
  const double lambda = pt_lambda(a);
  const double rounded = std::round(lambda);
  if (std::abs(lambda - rounded) > 1e-9 * std::max(1.0, lambda)) {
    std::ostringstream msg;
    msg << "pt_wavefunction: lambda = " << lambda << " is not an integer";
    throw std::invalid_argument(msg.str());
  }
  return static_cast<int>(rounded);
}

/// (1-y²)^{m/2} d^m P_l / dy^m, i.e. P_l^m(y) without the (-1)^m phase, by the upward
/// recurrence in degree starting from P_m^m.
double associated_legendre(int l, int m, double y) {
  const double s = std::sqrt(std::max(0.0, (1 - y) * (1 + y)));
  double pmm = 1.0;
  for (int i = 1; i <= m; ++i) pmm *= (2 * i - 1) * s;
  if (l == m) return pmm;
  double pm1 = y * (2 * m + 1) * pmm;
  if (l == m + 1) return pm1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = (y * (2 * ll - 1) * pm1 - (ll + m - 1) * pmm) / (ll - m);
    pmm = pm1;
    pm1 = pll;
  }
  return pll;
}

/// Bisection on a bracketing interval of a continuous function; converges to machine precision.
template <typename F>
double bracketed_root(F f, double lo, double hi) {
  double f_lo = f(lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi || hi - lo < 1e-15 * std::max(1.0, std::abs(mid))) return mid;
    const double f_mid = f(mid);
    if ((f_mid < 0) == (f_lo < 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double pt_lambda(double a) {
  if (!(a >= 0)) throw std::invalid_argument("pt_lambda: a must be nonnegative");
  return 0.5 * (std::sqrt(1 + 2 * a * a) - 1);
}

std::vector<double> pt_energies(double a) {
  const double lambda = pt_lambda(a);
  std::vector<double> out;
  for (int n = 0; n <= static_cast<int>(std::floor(lambda + 1e-12)); ++n)
    out.push_back(-(lambda - n) * (lambda - n));
  return out;
}

double pt_wavefunction(int n, double a, double x) {
  const int l = integer_lambda(a);
  if (n < 0 || n >= l) throw std::invalid_argument("pt_wavefunction: need 0 <= n < lambda");
  const int m = l - n;
  // ∫ [P_l^m(tanh x)]² dx = ∫ [P_l^m(y)]²/(1-y²) dy = (l+m)! / (m (l-m)!).
  const double log_norm2 =
      std::lgamma(l + m + 1.0) - std::log(double(m)) - std::lgamma(l - m + 1.0);
  const double value = associated_legendre(l, m, std::tanh(x));
  // The polynomial factor d^m P_l/dy^m has sign (-1)^n as y -> -1.
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * value * std::exp(-0.5 * log_norm2);
}

std::vector<double> finite_well_levels(double depth, double half_width) {
  if (!(depth > 0) || !(half_width > 0))
    throw std::invalid_argument("finite_well_levels: depth and half_width must be positive");
  // z = qL with q = √(V0+E); z0 = L√V0 bounds every bound state.
  const double z0 = half_width * std::sqrt(depth);
  auto kappa_l = [z0](double z) { return std::sqrt(std::max(0.0, z0 * z0 - z * z)); };
  // Pole-free forms of κ = q tan(qL) and κ = -q cot(qL).
  auto even = [&](double z) { return z * std::sin(z) - kappa_l(z) * std::cos(z); };
  auto odd = [&](double z) { return z * std::cos(z) + kappa_l(z) * std::sin(z); };

  std::vector<double> levels;
  for (int i = 0;; ++i) {
    const double lo = i * kPi / 2;
    if (lo >= z0) break;
    const double hi = std::min((i + 1) * kPi / 2, z0);
    const double z = (i % 2 == 0) ? bracketed_root(even, lo, hi) : bracketed_root(odd, lo, hi);
    if (z >= z0) break;
    levels.push_back(z * z / (half_width * half_width) - depth);
  }
  return levels;
}

double finite_well_wavefunction(double depth, double half_width, double energy, int index,
                                double x) {
  if (!(energy < 0) || !(energy > -depth))
    throw std::invalid_argument("finite_well_wavefunction: energy must lie in (-V0, 0)");
  const double q = std::sqrt(depth + energy);
  const double kappa = std::sqrt(-energy);
  const double L = half_width;
  const bool is_even = index % 2 == 0;

  double norm2, inside, edge;
  if (is_even) {
    norm2 = L + std::sin(2 * q * L) / (2 * q) + std::pow(std::cos(q * L), 2) / kappa;
    inside = std::cos(q * x);
    edge = std::cos(q * L);
  } else {
    norm2 = L - std::sin(2 * q * L) / (2 * q) + std::pow(std::sin(q * L), 2) / kappa;
    inside = std::sin(q * x);
    edge = std::sin(q * L);
  }
  double value;
  if (std::abs(x) <= L) {
    value = inside;
  } else {
    const double tail = edge * std::exp(-kappa * (std::abs(x) - L));
    value = (is_even || x > 0) ? tail : -tail;
  }
  // Left tail sign is that of ψ(-L).
  const double left_edge = is_even ? edge : -edge;
  const double sign = left_edge >= 0 ? 1.0 : -1.0;
  return sign * value / std::sqrt(norm2);
}

RealFunction finite_well_potential(double depth, double half_width) {
  return [depth, half_width](double x) {
    const double r = std::abs(x);
    if (std::abs(r - half_width) <= 1e-12 * std::max(1.0, half_width)) return -0.5 * depth;
    return r < half_width ? -depth : 0.0;
  };
}

}  // namespace fastosc
