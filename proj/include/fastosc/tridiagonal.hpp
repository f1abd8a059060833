#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastosc {

/// Symmetric tridiagonal matrix stored as its diagonal and first off-diagonal.
template <typename Scalar>
class SymmetricTridiagonal {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Index = Eigen::Index;

  SymmetricTridiagonal() = default;
  SymmetricTridiagonal(Vector diagonal, Vector off_diagonal)
      : diagonal_(std::move(diagonal)), off_diagonal_(std::move(off_diagonal)) {
    if (diagonal_.size() < 1 || off_diagonal_.size() != diagonal_.size() - 1)
      throw std::invalid_argument("SymmetricTridiagonal: off-diagonal must have n-1 entries");
  }

  Index size() const { return diagonal_.size(); }
  const Vector& diagonal() const { return diagonal_; }
  const Vector& off_diagonal() const { return off_diagonal_; }
  Vector& diagonal() { return diagonal_; }

  Vector operator*(const Vector& x) const {
    const Index n = size();
    Vector y = diagonal_.cwiseProduct(x);
    if (n > 1) {
      y.head(n - 1) += off_diagonal_.cwiseProduct(x.tail(n - 1));
      y.tail(n - 1) += off_diagonal_.cwiseProduct(x.head(n - 1));
    }
    return y;
  }

  /// Maximum absolute row sum.
  Scalar norm_inf() const {
    Scalar best = 0;
    const Index n = size();
    for (Index i = 0; i < n; ++i) {
      Scalar row = std::abs(diagonal_[i]);
      if (i > 0) row += std::abs(off_diagonal_[i - 1]);
      if (i + 1 < n) row += std::abs(off_diagonal_[i]);
      best = std::max(best, row);
    }
    return best;
  }

  /// Gershgorin interval containing every eigenvalue.
  std::pair<Scalar, Scalar> gershgorin() const {
    const Index n = size();
    Scalar lo = std::numeric_limits<Scalar>::max();
    Scalar hi = std::numeric_limits<Scalar>::lowest();
    for (Index i = 0; i < n; ++i) {
      Scalar radius = 0;
      if (i > 0) radius += std::abs(off_diagonal_[i - 1]);
      if (i + 1 < n) radius += std::abs(off_diagonal_[i]);
      lo = std::min(lo, diagonal_[i] - radius);
      hi = std::max(hi, diagonal_[i] + radius);
    }
    return {lo, hi};
  }

  /// Number of eigenvalues strictly below `shift` (Sturm sequence / LDL^T inertia).
  Index count_below(Scalar shift) const {
    const Index n = size();
    const Scalar pivmin = pivot_floor();
    Index count = 0;
    Scalar q = diagonal_[0] - shift;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
    for (Index i = 1; i < n; ++i) {
      const Scalar e = off_diagonal_[i - 1];
      q = diagonal_[i] - shift - e * e / q;
      if (std::abs(q) < pivmin) q = -pivmin;
      if (q < 0) ++count;
    }
    return count;
  }

 private:
  Scalar pivot_floor() const {
    Scalar emax = 1;
    for (Index i = 0; i < off_diagonal_.size(); ++i)
      emax = std::max(emax, off_diagonal_[i] * off_diagonal_[i]);
    return std::numeric_limits<Scalar>::min() * emax;
  }

  Vector diagonal_;
  Vector off_diagonal_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::Index index)
      : std::runtime_error(what + " (eigenpair index " + std::to_string(index) + ")"),
        index_(index) {}
  Eigen::Index index() const { return index_; }

 private:
  Eigen::Index index_;
};

/// The `index`-th smallest eigenvalue (0-based) by Sturm-count bisection.
template <typename Scalar>
Scalar bisect_eigenvalue(const SymmetricTridiagonal<Scalar>& t, Eigen::Index index,
                         Scalar lo, Scalar hi) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar abs_tol = 2 * std::numeric_limits<Scalar>::min();
  // Invariant: count_below(lo) <= index < count_below(hi).
  for (int iter = 0; iter < 256; ++iter) {
    const Scalar mid = lo + (hi - lo) / 2;
    if (hi - lo <= 2 * eps * std::max(std::abs(lo), std::abs(hi)) + abs_tol || mid == lo ||
        mid == hi)
      return mid;
    if (t.count_below(mid) > index)
      hi = mid;
    else
      lo = mid;
  }
  return lo + (hi - lo) / 2;
}

/// The `count` algebraically smallest eigenvalues, ascending.
template <typename Scalar>
std::vector<Scalar> smallest_eigenvalues(const SymmetricTridiagonal<Scalar>& t,
                                         Eigen::Index count) {
  if (count < 1 || count > t.size())
    throw std::invalid_argument("smallest_eigenvalues: count must lie in [1, n]");
  auto [lo, hi] = t.gershgorin();
  const Scalar pad = std::numeric_limits<Scalar>::epsilon() * (std::abs(lo) + std::abs(hi)) + 1;
  lo -= pad;
  hi += pad;

  // Every Sturm count also brackets the neighbouring eigenvalues; keep those brackets so
  // later indices start from a narrow interval.
  const auto m = static_cast<std::size_t>(count);
  std::vector<Scalar> lower(m, lo), upper(m, hi), values(m);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar abs_tol = 2 * std::numeric_limits<Scalar>::min();
  for (std::size_t i = 0; i < m; ++i) {
    Scalar a = lower[i], b = upper[i];
    for (int iter = 0; iter < 256; ++iter) {
      const Scalar mid = a + (b - a) / 2;
      if (b - a <= 2 * eps * std::max(std::abs(a), std::abs(b)) + abs_tol || mid == a || mid == b)
        break;
      const auto below = static_cast<std::size_t>(t.count_below(mid));
      if (below > i) {
        b = mid;
        for (std::size_t j = i; j < std::min(below, m); ++j) upper[j] = std::min(upper[j], mid);
      } else {
        a = mid;
        for (std::size_t j = below; j < m; ++j) lower[j] = std::max(lower[j], mid);
      }
    }
    values[i] = a + (b - a) / 2;
  }
  return values;
}

namespace detail {

/// LU factorization with partial pivoting of (T - shift*I); U has two superdiagonals.
template <typename Scalar>
struct ShiftedTridiagonalLU {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector u0, u1, u2, multiplier;
  std::vector<bool> swapped;

  ShiftedTridiagonalLU(const SymmetricTridiagonal<Scalar>& t, Scalar shift, Scalar tiny) {
    const Eigen::Index n = t.size();
    u0.resize(n);
    u1.setZero(n);
    u2.setZero(n);
    multiplier.setZero(n);
    swapped.assign(static_cast<std::size_t>(n), false);
    const auto& d = t.diagonal();
    const auto& e = t.off_diagonal();

    Scalar alpha = d[0] - shift;
    Scalar beta = n > 1 ? e[0] : Scalar(0);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      const Scalar below = e[k];
      const Scalar next_diag = d[k + 1] - shift;
      const Scalar next_off = k + 2 < n ? e[k + 1] : Scalar(0);
      if (std::abs(alpha) >= std::abs(below)) {
        if (alpha == 0) alpha = tiny;
        u0[k] = alpha;
        u1[k] = beta;
        const Scalar l = below / alpha;
        multiplier[k] = l;
        alpha = next_diag - l * beta;
        beta = next_off;
      } else {
        swapped[static_cast<std::size_t>(k)] = true;
        u0[k] = below;
        u1[k] = next_diag;
        u2[k] = next_off;
        const Scalar l = alpha / below;
        multiplier[k] = l;
        alpha = beta - l * next_diag;
        beta = -l * next_off;
      }
    }
    if (std::abs(alpha) < tiny) alpha = alpha < 0 ? -tiny : tiny;
    u0[n - 1] = alpha;
  }

  void solve_in_place(Vector& b) const {
    const Eigen::Index n = b.size();
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      if (swapped[static_cast<std::size_t>(k)]) std::swap(b[k], b[k + 1]);
      b[k + 1] -= multiplier[k] * b[k];
    }
    for (Eigen::Index k = n - 1; k >= 0; --k) {
      Scalar s = b[k];
      if (k + 1 < n) s -= u1[k] * b[k + 1];
      if (k + 2 < n) s -= u2[k] * b[k + 2];
      b[k] = s / u0[k];
    }
  }
};

}  // namespace detail

/// Eigenvector for an (accurate) eigenvalue by inverse iteration, orthogonalized against
/// `previous` columns. Throws ConvergenceError when the residual stays above tolerance.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inverse_iteration(
    const SymmetricTridiagonal<Scalar>& t, Scalar eigenvalue,
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& previous, Eigen::Index index,
    std::uint32_t seed = 20240611u) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = t.size();
  const Scalar norm = std::max(t.norm_inf(), std::numeric_limits<Scalar>::min());
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const detail::ShiftedTridiagonalLU<Scalar> lu(t, eigenvalue, eps * norm);

  std::mt19937 engine(seed + static_cast<std::uint32_t>(index));
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x[i] = Scalar(engine()) / Scalar(std::mt19937::max()) - Scalar(0.5);
  x.normalize();

  const Scalar target = Scalar(1e-12) * norm;
  const Scalar accept = Scalar(1e-8) * norm;
  Scalar residual = std::numeric_limits<Scalar>::infinity();
  for (int iter = 0; iter < 8; ++iter) {
    lu.solve_in_place(x);
    for (const Vector& p : previous) x -= p.dot(x) * p;
    const Scalar len = x.norm();
    if (!std::isfinite(len) || len == 0)
      throw ConvergenceError("inverse iteration produced a degenerate iterate", index);
    x /= len;
    residual = (t * x - eigenvalue * x).norm();
    if (residual <= target && iter >= 1) break;
  }
  if (!(residual <= accept))
    throw ConvergenceError("inverse iteration did not converge", index);
  return x;
}

}  // namespace fastosc
