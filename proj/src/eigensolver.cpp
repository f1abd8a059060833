#include "fastosc/eigensolver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fastosc {

Grid::Grid(double x_min, double x_max, Eigen::Index n) : x_min_(x_min), x_max_(x_max), n_(n) {
  if (!(x_min < x_max)) throw std::invalid_argument("Grid: x_min must be below x_max");
  if (n < 3) throw std::invalid_argument("Grid: need at least 3 interior nodes");
}

Grid Grid::with_max_spacing(double x_min, double x_max, double max_dx) {
  if (!(max_dx > 0)) throw std::invalid_argument("Grid: spacing must be positive");
  // The small slack keeps exact ratios (e.g. 12 / (1/640)) from rounding up a whole cell.
  const double cells = std::ceil((x_max - x_min) / max_dx - 1e-9);
  return Grid(x_min, x_max, static_cast<Eigen::Index>(cells) - 1);
}

Grid Grid::resolving(double x_min, double x_max, double k, int nodes_per_period) {
  if (!(k > 0) || nodes_per_period < 1)
    throw std::invalid_argument("Grid::resolving: k and nodes_per_period must be positive");
  return with_max_spacing(x_min, x_max, std::min(kTwoPi / (nodes_per_period * k), 0.01));
}

Eigen::VectorXd Grid::nodes() const {
  Eigen::VectorXd xs(n_);
  for (Eigen::Index j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

Eigen::VectorXd Grid::sample(const RealFunction& f) const {
  Eigen::VectorXd out(n_);
  for (Eigen::Index j = 0; j < n_; ++j) out[j] = f(x(j));
  return out;
}

TridiagonalHamiltonian assemble(const Grid& grid, const RealFunction& potential,
                                std::span<const DeltaTerm> deltas) {
  const Eigen::Index n = grid.size();
  const double dx = grid.dx();
  const double inv_dx2 = 1.0 / (dx * dx);

  Eigen::VectorXd diag(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = potential(grid.x(j));
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "assemble: non-finite potential at x = " << grid.x(j);
      throw std::domain_error(msg.str());
    }
    diag[j] = 2 * inv_dx2 + v;
  }

  for (const DeltaTerm& d : deltas) {
    if (!(d.position > grid.x_min() && d.position < grid.x_max())) {
      std::ostringstream msg;
      msg << "assemble: delta at x = " << d.position << " lies outside (" << grid.x_min() << ", "
          << grid.x_max() << ")";
      throw std::domain_error(msg.str());
    }
    // Fractional node index; node -1 and node n are the walls.
    const double t = (d.position - grid.x_min()) / dx - 1.0;
    double left = std::floor(t);
    double frac = t - left;
    if (frac > 1 - 1e-9) {
      left += 1;
      frac = 0;
    } else if (frac < 1e-9) {
      frac = 0;
    }
    const auto j0 = static_cast<Eigen::Index>(left);
    const double weight = d.strength / dx;
    if (j0 >= 0 && j0 < n) diag[j0] += (1 - frac) * weight;
    if (frac > 0 && j0 + 1 >= 0 && j0 + 1 < n) diag[j0 + 1] += frac * weight;
  }

  Eigen::VectorXd off = Eigen::VectorXd::Constant(n - 1, -inv_dx2);
  return {grid, SymmetricTridiagonal<double>(std::move(diag), std::move(off))};
}

TridiagonalHamiltonian assemble(const Grid& grid, const EffectivePotential& potential) {
  return assemble(grid, potential.smooth, potential.deltas);
}

int count_nodes(const Eigen::Ref<const Eigen::VectorXd>& psi) {
  const double floor = 1e-6 * psi.cwiseAbs().maxCoeff();
  int nodes = 0;
  int last_sign = 0;
  for (Eigen::Index j = 0; j < psi.size(); ++j) {
    if (std::abs(psi[j]) <= floor) continue;
    const int sign = psi[j] > 0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

void normalize_state(Eigen::Ref<Eigen::VectorXd> psi, double dx) {
  const double norm = std::sqrt(psi.squaredNorm() * dx);
  if (norm > 0) psi /= norm;
  const double threshold = 1e-3 * psi.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < psi.size(); ++j) {
    if (std::abs(psi[j]) > threshold) {
      if (psi[j] < 0) psi = -psi;
      break;
    }
  }
}

Eigen::VectorXd lowest_energies(const TridiagonalHamiltonian& h, Eigen::Index m) {
  if (m < 1 || m > h.matrix.size())
    throw std::invalid_argument("lowest_energies: m must lie in [1, n]");
  const auto values = smallest_eigenvalues(h.matrix, m);
  return Eigen::Map<const Eigen::VectorXd>(values.data(), m);
}

Spectrum lowest_eigenpairs(const TridiagonalHamiltonian& h, Eigen::Index m) {
  const Eigen::VectorXd energies = lowest_energies(h, m);
  const double dx = h.grid.dx();

  std::vector<Eigen::VectorXd> found;
  found.reserve(static_cast<std::size_t>(m));
  Spectrum out{h.grid, energies, Eigen::MatrixXd(h.matrix.size(), m), {}};
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::VectorXd v = inverse_iteration(h.matrix, energies[i], found, i);
    found.push_back(v);
    normalize_state(v, dx);
    out.states.col(i) = v;
    out.node_counts.push_back(count_nodes(v));
  }
  return out;
}

Spectrum bound_states(const Spectrum& s) {
  Eigen::Index count = 0;
  while (count < s.size() && s.energies[count] < 0) ++count;
  Spectrum out{s.grid, s.energies.head(count), s.states.leftCols(count),
               std::vector<int>(s.node_counts.begin(), s.node_counts.begin() + count)};
  return out;
}

Eigen::Index count_bound(const TridiagonalHamiltonian& h) { return h.matrix.count_below(0.0); }

}  // namespace fastosc
