#pragma once

#include "fastosc/potentials.hpp"
#include "fastosc/tridiagonal.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace fastosc {

/// Uniform grid of n interior nodes x_j = x_min + (j+1)·dx with Dirichlet walls at x_min, x_max.
class Grid {
 public:
  Grid(double x_min, double x_max, Eigen::Index n);

  /// Smallest grid whose spacing does not exceed `max_dx`.
  static Grid with_max_spacing(double x_min, double x_max, double max_dx);

  /// Spacing min(2π/(nodes_per_period·k), 0.01): every oscillation period gets at least
  /// `nodes_per_period` nodes.
  static Grid resolving(double x_min, double x_max, double k, int nodes_per_period = 16);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  Eigen::Index size() const { return n_; }
  double dx() const { return (x_max_ - x_min_) / double(n_ + 1); }
  double x(Eigen::Index j) const { return x_min_ + double(j + 1) * dx(); }
  Eigen::VectorXd nodes() const;

  /// Samples f at every node.
  Eigen::VectorXd sample(const RealFunction& f) const;

 private:
  double x_min_, x_max_;
  Eigen::Index n_;
};

struct TridiagonalHamiltonian {
  Grid grid;
  SymmetricTridiagonal<double> matrix;
};

/// -d²/dx² + V(x) + Σ s δ(x - x0) by three-point differences. Each delta is shared between
/// its two neighbouring nodes with linear weights summing to s/dx.
TridiagonalHamiltonian assemble(const Grid& grid, const RealFunction& potential,
                                std::span<const DeltaTerm> deltas = {});

/// Convenience overload for an effective potential.
TridiagonalHamiltonian assemble(const Grid& grid, const EffectivePotential& potential);

/// Eigenpairs sorted by energy; states are columns sampled on `grid`, normalized so that
/// Σ|ψ_j|²dx = 1 and signed so the first component above 1e-3·max|ψ| is positive.
struct Spectrum {
  Grid grid;
  Eigen::VectorXd energies;
  Eigen::MatrixXd states;
  std::vector<int> node_counts;

  Eigen::Index size() const { return energies.size(); }
  Eigen::VectorXd state(Eigen::Index i) const { return states.col(i); }
};

/// The m lowest eigenpairs. Throws ConvergenceError on failure.
Spectrum lowest_eigenpairs(const TridiagonalHamiltonian& h, Eigen::Index m);

/// The m lowest eigenvalues only.
Eigen::VectorXd lowest_energies(const TridiagonalHamiltonian& h, Eigen::Index m);

/// Keeps states with E < 0.
Spectrum bound_states(const Spectrum& s);

/// Number of eigenvalues strictly below zero.
Eigen::Index count_bound(const TridiagonalHamiltonian& h);

/// Sign changes of ψ, ignoring samples below 1e-6·max|ψ|.
int count_nodes(const Eigen::Ref<const Eigen::VectorXd>& psi);

/// Normalizes to Σ|ψ_j|²dx = 1 and applies the sign convention of Spectrum.
void normalize_state(Eigen::Ref<Eigen::VectorXd> psi, double dx);

/// Discrete inner product Σ a_j b_j dx.
inline double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double dx) {
  return a.dot(b) * dx;
}

}  // namespace fastosc
