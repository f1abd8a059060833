#pragma once

#include "fastosc/profiles.hpp"

#include <vector>

namespace fastosc {

// Pöschl–Teller well -(a²/2) sech²(x).

/// λ = (√(1+2a²) - 1)/2.
double pt_lambda(double a);

/// -(λ-n)² for n = 0..⌊λ⌋. The last entry is the threshold value 0 when λ is an integer.
std::vector<double> pt_energies(double a);

/// Unit-norm eigenfunction ∝ P_λ^{λ-n}(tanh x) for integer λ and 0 <= n < λ, positive in the
/// left tail. Throws std::invalid_argument for non-integer λ or n out of range.
double pt_wavefunction(int n, double a, double x);

// Finite square well -V0 on |x| < L.

/// Bound energies in (-V0, 0), ascending; even and odd parity alternate starting with even.
std::vector<double> finite_well_levels(double depth, double half_width);

/// Unit-norm eigenfunction for a level returned by finite_well_levels (index selects parity),
/// positive in the left tail.
double finite_well_wavefunction(double depth, double half_width, double energy, int index,
                                double x);

/// -V0 inside, 0 outside, -V0/2 exactly on the walls.
RealFunction finite_well_potential(double depth, double half_width);

}  // namespace fastosc
