#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastosc {

using RealFunction = std::function<double(double)>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// One harmonic of a zero-mean Fourier profile: a cos(n s) + b sin(n s), n >= 1.
struct FourierTerm {
  int harmonic = 1;
  double cos_amplitude = 0.0;
  double sin_amplitude = 0.0;
};

class ProfileError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A 2π-periodic zero-mean oscillation v(s) together with its zero-mean antiderivative g
/// (g' = v) and zero-mean second antiderivative w (w'' = v, w' = g).
///
/// Immutable; copies share the underlying tables.
class PeriodicProfile {
 public:
  double v(double s) const { return v_(s); }
  double g(double s) const { return g_(s); }
  double w(double s) const { return w_(s); }

  /// <g^2> over one period.
  double g_mean_square() const { return g_mean_square_; }

  /// Harmonic content when the profile is band-limited and known exactly.
  const std::optional<std::vector<FourierTerm>>& fourier_terms() const { return terms_; }

  const std::string& name() const { return name_; }

 private:
  friend PeriodicProfile fourier_profile(std::vector<FourierTerm> terms, std::string name);
  friend PeriodicProfile make_profile(RealFunction v, int samples_per_period);

  PeriodicProfile() = default;

  RealFunction v_, g_, w_;
  double g_mean_square_ = 0.0;
  std::optional<std::vector<FourierTerm>> terms_;
  std::string name_;
};

/// Exact profile from a finite Fourier series. An empty list yields the zero profile.
PeriodicProfile fourier_profile(std::vector<FourierTerm> terms, std::string name = "fourier");

/// v(s) = cos(s), g(s) = sin(s), w(s) = -cos(s).
PeriodicProfile cosine_profile();

/// v(s) = sin(s), g(s) = -cos(s), w(s) = -sin(s).
PeriodicProfile sine_profile();

/// Builds g and w for an arbitrary 2π-periodic callable by dense tabulation over one period.
/// Throws ProfileError if the sampled mean of v exceeds 1e-10 in magnitude.
PeriodicProfile make_profile(RealFunction v, int samples_per_period = 4096);

/// (1/2π) ∫_0^{2π} f(s) ds by the periodic trapezoid rule.
double period_average(const RealFunction& f, int samples = 4096);

}  // namespace fastosc
