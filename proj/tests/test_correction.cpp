#include "doctest.h"

#include "fastosc/analytic.hpp"
#include "fastosc/correction.hpp"

#include <cmath>

using namespace fastosc;

namespace {

Eigen::VectorXd sampled_pt(const Grid& g, int n, double a) {
  Eigen::VectorXd psi = g.sample([&](double x) { return pt_wavefunction(n, a, x); });
  normalize_state(psi, g.dx());
  return psi;
}

}  // namespace

TEST_SUITE("correction") {
  TEST_CASE("identity <v w> = -<(w')²>") {
    for (const auto& p : {cosine_profile(), sine_profile(), fourier_profile({{1, 1.0, 0.0}, {2, 0.5, 0.0}})}) {
      const auto [vw, ww] = identity_check(p);
      CHECK(std::abs(vw - ww) < 1e-10);
    }
    const auto [vw, ww] = identity_check(cosine_profile());
    CHECK(vw == doctest::Approx(-0.5));
    CHECK(ww == doctest::Approx(-0.5));
    const auto tab = make_profile([](double s) { return std::sin(s) - 0.3 * std::cos(4 * s); });
    const auto [tv, tw] = identity_check(tab);
    CHECK(std::abs(tv - tw) < 1e-8);
  }

  TEST_CASE("zero envelope gives zero correction") {
    const ModulatedPotential mp(250, cosine_profile(), zero_envelope());
    const Grid g(-5, 5, 999);
    const Eigen::VectorXd xi = oscillatory_correction(mp, g, Eigen::VectorXd::Ones(g.size()));
    CHECK(xi.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("correction amplitude scales as 1/k") {
    const Grid g(-5, 5, 20000 - 1);
    const Eigen::VectorXd psi = g.sample([](double x) { return std::exp(-x * x); });
    const auto xi1 = oscillatory_correction(ModulatedPotential(250, cosine_profile(), sech_envelope(3)), g, psi);
    const auto xi2 = oscillatory_correction(ModulatedPotential(500, cosine_profile(), sech_envelope(3)), g, psi);
    CHECK(xi2.cwiseAbs().maxCoeff() / xi1.cwiseAbs().maxCoeff() == doctest::Approx(0.5).epsilon(0.02));
    CHECK(xi1.cwiseAbs().maxCoeff() <= 3.0 * 1.0 * 1.0 / 250 + 1e-15);
    const auto cs = correct_state(ModulatedPotential(250, cosine_profile(), sech_envelope(3)), g, psi, -1.0);
    CHECK((cs.combined() - psi - xi1).norm() < 1e-13);
    CHECK(cs.energy == -1.0);
  }

  TEST_CASE("corrected ground state is closer to the exact state") {
    const double a = 2 * std::sqrt(210.0);
    const double k = 250;
    const ModulatedPotential mp(k, cosine_profile(), sech_envelope(a));
    const Grid g = Grid::resolving(-18, 18, k, 16);
    const auto exact = lowest_eigenpairs(assemble(g, [&](double x) { return mp(x); }), 1);
    const Eigen::VectorXd bar = sampled_pt(g, 0, a);
    const Eigen::VectorXd xi = oscillatory_correction(mp, g, bar);
    CHECK(aligned_l2_distance(exact.state(0), bar + xi, g.dx()) <
          aligned_l2_distance(exact.state(0), bar, g.dx()));
    CHECK(std::abs(inner(bar, xi, g.dx())) < 1e-3);
  }

  TEST_CASE("overlap and distance helpers") {
    const Grid g(-5, 5, 999);
    const Eigen::VectorXd a = g.sample([](double x) { return std::exp(-x * x); });
    CHECK(overlap(a, -3.0 * a, g.dx()) == doctest::Approx(1.0));
    CHECK(aligned_l2_distance(a, -3.0 * a, g.dx()) == doctest::Approx(0.0).epsilon(1e-12));
    const Eigen::VectorXd b = g.sample([](double x) { return x * std::exp(-x * x); });
    CHECK(overlap(a, b, g.dx()) < 1e-12);
    CHECK(aligned_l2_distance(a, b, g.dx()) == doctest::Approx(std::sqrt(2.0)));
  }
}
