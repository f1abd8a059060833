#include "doctest.h"

#include "fastosc/eigensolver.hpp"

#include <cmath>

using namespace fastosc;

namespace {

const RealFunction kFree = [](double) { return 0.0; };

}  // namespace

TEST_SUITE("eigensolver") {
  TEST_CASE("grid geometry") {
    const Grid g(-1, 1, 9);
    CHECK(g.dx() == doctest::Approx(0.2));
    CHECK(g.x(0) == doctest::Approx(-0.8));
    CHECK(g.x(8) == doctest::Approx(0.8));
    CHECK_THROWS_AS(Grid(0, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(Grid(1, 0, 10), std::invalid_argument);
    const Grid r = Grid::resolving(-6, 6, 251.3, 16);
    CHECK(r.dx() <= kTwoPi / (16 * 251.3));
  }

  TEST_CASE("particle in a box") {
    const double L = 2.0;
    const Grid g(0, L, 1999);
    const auto s = lowest_eigenpairs(assemble(g, kFree), 3);
    for (int n = 1; n <= 3; ++n) {
      const double exact = std::pow(n * M_PI / L, 2);
      CHECK(std::abs(s.energies[n - 1] - exact) < exact * std::pow(n * M_PI * g.dx() / L, 2));
    }
    CHECK(bound_states(s).size() == 0);
  }

  TEST_CASE("box error is second order") {
    double err[2];
    for (int i = 0; i < 2; ++i) {
      const Grid g(0, 1, 99 + i * 100);
      err[i] = std::abs(lowest_energies(assemble(g, kFree), 1)[0] - M_PI * M_PI);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.01));
  }

  TEST_CASE("diagonal equals 2/dx² + ρ for a zero envelope") {
    const Grid g(-2, 2, 50);
    const RealFunction rho = [](double x) { return x * x; };
    const auto h = assemble(g, rho);
    for (Eigen::Index j = 0; j < g.size(); ++j)
      CHECK(h.matrix.diagonal()[j] == doctest::Approx(2 / (g.dx() * g.dx()) + rho(g.x(j))));
    for (Eigen::Index j = 0; j + 1 < g.size(); ++j)
      CHECK(h.matrix.off_diagonal()[j] == doctest::Approx(-1 / (g.dx() * g.dx())));
  }

  TEST_CASE("attractive delta approaches -c²/4") {
    const double c = 3.0;
    auto error = [c](double position, double dx) {
      const DeltaTerm delta[] = {{position, -c}};
      const Grid g(-15, 15, static_cast<Eigen::Index>(std::lround(30 / dx)) - 1);
      return std::abs(lowest_energies(assemble(g, kFree, delta), 1)[0] + c * c / 4);
    };
    // On a node the error is second order.
    CHECK(error(0.0, 0.01) / error(0.0, 0.005) == doctest::Approx(4.0).epsilon(0.01));
    CHECK(error(0.0, 0.0025) < 1e-5);
    // Between nodes the linear weights converge at first order.
    for (double position : {0.0137, 0.0025, -0.3111})
      for (double dx : {0.02, 0.01, 0.005, 0.0025}) CHECK(error(position, dx) <= c * c * c * dx / 4);
  }

  TEST_CASE("delta weights sum to s/dx") {
    const Grid g(-1, 1, 19);
    const DeltaTerm delta[] = {{0.033, 2.5}};
    const auto h0 = assemble(g, kFree);
    const auto h1 = assemble(g, kFree, delta);
    CHECK((h1.matrix.diagonal() - h0.matrix.diagonal()).sum() * g.dx() == doctest::Approx(2.5));
  }

  TEST_CASE("invalid inputs") {
    const Grid g(-1, 1, 19);
    const DeltaTerm outside[] = {{1.5, 1.0}};
    CHECK_THROWS_AS(assemble(g, kFree, outside), std::domain_error);
    CHECK_THROWS_AS(assemble(g, [](double) { return std::nan(""); }), std::domain_error);
    CHECK_THROWS_AS(lowest_eigenpairs(assemble(g, kFree), 0), std::invalid_argument);
  }

  TEST_CASE("spectrum invariants on a Pöschl–Teller well") {
    const double a = 2 * std::sqrt(210.0);
    const Grid g = Grid::with_max_spacing(-12, 12, 0.005);
    const RealFunction v = [a](double x) { return -a * a / 2 / std::pow(std::cosh(x), 2); };
    const auto h = assemble(g, v);
    const auto s = lowest_eigenpairs(h, 5);
    const double expected[] = {-400, -361, -324, -289, -256};
    for (int n = 0; n < 5; ++n) {
      CHECK(s.energies[n] == doctest::Approx(expected[n]).epsilon(2e-3));
      CHECK(s.node_counts[n] == n);
      CHECK(inner(s.state(n), s.state(n), g.dx()) == doctest::Approx(1.0).epsilon(1e-10));
      for (int m = 0; m < n; ++m) CHECK(std::abs(inner(s.state(n), s.state(m), g.dx())) < 1e-8);
      const Eigen::VectorXd psi = s.state(n);
      CHECK((h.matrix * psi - s.energies[n] * psi).norm() <= 1e-8 * h.matrix.norm_inf());
      if (n > 0) CHECK(s.energies[n] > s.energies[n - 1]);
      // Sign convention: first significant component positive.
      const double peak = psi.cwiseAbs().maxCoeff();
      for (Eigen::Index j = 0; j < psi.size(); ++j)
        if (std::abs(psi[j]) > 1e-3 * peak) {
          CHECK(psi[j] > 0);
          break;
        }
    }
    CHECK(count_bound(h) == 20);
  }

  TEST_CASE("halving dx reduces the error fourfold") {
    const RealFunction v = [](double x) { return -8 / std::pow(std::cosh(x), 2); };
    // a = 4: λ = (√33 - 1)/2.
    const double lambda = (std::sqrt(33.0) - 1) / 2;
    double err[2];
    for (int i = 0; i < 2; ++i) {
      const Grid g = Grid::with_max_spacing(-16, 16, 0.02 / (1 << i));
      err[i] = std::abs(lowest_energies(assemble(g, v), 1)[0] + lambda * lambda);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("bound state filter") {
    const Spectrum s{Grid(-1, 1, 5), Eigen::Vector3d(-2, 0, 1), Eigen::MatrixXd::Identity(5, 3), {0, 1, 2}};
    const auto b = bound_states(s);
    CHECK(b.size() == 1);
    CHECK(b.energies[0] == -2);
  }
}
