#include "fastosc/correction.hpp"

#include <cmath>
#include <stdexcept>

namespace fastosc {

Eigen::VectorXd oscillatory_correction(const ModulatedPotential& mp, const Grid& grid,
                                       const Eigen::VectorXd& psi_bar) {
  if (psi_bar.size() != grid.size())
    throw std::invalid_argument("oscillatory_correction: state does not match the grid");
  const double k = mp.k();
  Eigen::VectorXd xi(grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    xi[j] = mp.envelope()(x) * psi_bar[j] * mp.profile().w(k * x) / k;
  }
  return xi;
}

CorrectedState correct_state(const ModulatedPotential& mp, const Grid& grid,
                             Eigen::VectorXd psi_bar, double energy) {
  CorrectedState out;
  out.correction = oscillatory_correction(mp, grid, psi_bar);
  out.base = std::move(psi_bar);
  out.energy = energy;
  return out;
}

std::pair<double, double> identity_check(const PeriodicProfile& profile, int samples) {
  const double vw = period_average([&](double s) { return profile.v(s) * profile.w(s); }, samples);
  const double w_prime_sq =
      period_average([&](double s) { return profile.g(s) * profile.g(s); }, samples);
  return {vw, -w_prime_sq};
}

double overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double dx) {
  const double na = std::sqrt(a.squaredNorm() * dx);
  const double nb = std::sqrt(b.squaredNorm() * dx);
  if (na == 0 || nb == 0) return 0.0;
  return std::abs(a.dot(b) * dx) / (na * nb);
}

double aligned_l2_distance(const Eigen::VectorXd& reference, const Eigen::VectorXd& trial,
                           double dx) {
  Eigen::VectorXd r = reference / std::sqrt(reference.squaredNorm() * dx);
  Eigen::VectorXd t = trial / std::sqrt(trial.squaredNorm() * dx);
  if (r.dot(t) < 0) t = -t;
  return std::sqrt((r - t).squaredNorm() * dx);
}

}  // namespace fastosc
