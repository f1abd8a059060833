#pragma once

#include "fastosc/eigensolver.hpp"
#include "fastosc/potentials.hpp"

#include <Eigen/Core>

#include <utility>

namespace fastosc {

/// Smoothed state ψ̄ with its first-order oscillatory correction ξ. The sum is not
/// renormalized.
struct CorrectedState {
  Eigen::VectorXd base;
  Eigen::VectorXd correction;
  double energy = 0.0;

  Eigen::VectorXd combined() const { return base + correction; }
};

/// ξ(x) = Φ(x) ψ̄(x) w(kx) / k on the grid nodes.
Eigen::VectorXd oscillatory_correction(const ModulatedPotential& mp, const Grid& grid,
                                       const Eigen::VectorXd& psi_bar);

CorrectedState correct_state(const ModulatedPotential& mp, const Grid& grid,
                             Eigen::VectorXd psi_bar, double energy);

/// (<v w>, -<(w')²>) by periodic quadrature, with w' = g.
std::pair<double, double> identity_check(const PeriodicProfile& profile, int samples = 4096);

/// Discrete L² distance after normalizing both states and aligning the sign of `trial` to
/// `reference`.
double aligned_l2_distance(const Eigen::VectorXd& reference, const Eigen::VectorXd& trial,
                           double dx);

/// |<a|b>| after normalizing both.
double overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double dx);

}  // namespace fastosc
