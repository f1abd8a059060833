#include "doctest.h"

#include "fastosc/tridiagonal.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace fastosc;

namespace {

SymmetricTridiagonal<double> random_matrix(int n, unsigned seed) {
  std::srand(seed);
  Eigen::VectorXd d = Eigen::VectorXd::Random(n) * 5;
  Eigen::VectorXd e = Eigen::VectorXd::Random(n - 1);
  return {d, e};
}

Eigen::MatrixXd dense(const SymmetricTridiagonal<double>& t) {
  const auto n = t.diagonal().size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.diagonal() = t.diagonal();
  m.diagonal(1) = t.off_diagonal();
  m.diagonal(-1) = t.off_diagonal();
  return m;
}

}  // namespace

TEST_SUITE("tridiagonal") {
  TEST_CASE("bisection agrees with a dense solver") {
    const auto t = random_matrix(60, 7);
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense(t)).eigenvalues();
    const auto values = smallest_eigenvalues(t, 10);
    for (int i = 0; i < 10; ++i) CHECK(values[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }

  TEST_CASE("Sturm count brackets the spectrum") {
    const auto t = random_matrix(40, 3);
    const auto [lo, hi] = t.gershgorin();
    CHECK(t.count_below(lo) == 0);
    CHECK(t.count_below(hi) == 40);
  }

  TEST_CASE("inverse iteration returns orthonormal eigenvectors with small residual") {
    const auto t = random_matrix(80, 11);
    const auto values = smallest_eigenvalues(t, 6);
    std::vector<Eigen::VectorXd> vecs;
    for (int i = 0; i < 6; ++i) {
      Eigen::VectorXd v = inverse_iteration(t, values[i], vecs, i);
      CHECK((t * v - values[i] * v).norm() <= 1e-8 * t.norm_inf());
      CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
      for (const auto& u : vecs) CHECK(std::abs(u.dot(v)) < 1e-8);
      vecs.push_back(v);
    }
  }

  TEST_CASE("clustered eigenvalues stay orthogonal") {
    // Two decoupled identical blocks give exactly degenerate pairs.
    Eigen::VectorXd d(8), e(7);
    d << 2, 2, 2, 2, 2, 2, 2, 2;
    e << -1, -1, -1, 0, -1, -1, -1;
    const SymmetricTridiagonal<double> t(d, e);
    const auto values = smallest_eigenvalues(t, 2);
    CHECK(values[0] == doctest::Approx(values[1]));
    std::vector<Eigen::VectorXd> vecs;
    vecs.push_back(inverse_iteration(t, values[0], vecs, 0));
    vecs.push_back(inverse_iteration(t, values[1], vecs, 1));
    CHECK(std::abs(vecs[0].dot(vecs[1])) < 1e-8);
    CHECK((t * vecs[1] - values[1] * vecs[1]).norm() < 1e-10);
  }

  TEST_CASE("count outside [1, n] is rejected") {
    const auto t = random_matrix(5, 1);
    CHECK_THROWS_AS(smallest_eigenvalues(t, 0), std::invalid_argument);
    CHECK_THROWS_AS(smallest_eigenvalues(t, 6), std::invalid_argument);
  }
}
