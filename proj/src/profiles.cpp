#include "fastosc/profiles.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace fastosc {
namespace {

constexpr double kMeanTolerance = 1e-10;

/// Periodic cubic Hermite interpolant on a uniform table with known derivatives.
class PeriodicHermite {
 public:
  PeriodicHermite(std::vector<double> values, std::vector<double> slopes)
      : values_(std::move(values)), slopes_(std::move(slopes)) {
    step_ = kTwoPi / static_cast<double>(values_.size());
  }

  double operator()(double s) const {
    const auto n = static_cast<long>(values_.size());
    double t = s / step_;
    const double cell = std::floor(t);
    t -= cell;
    long j = static_cast<long>(cell) % n;
    if (j < 0) j += n;
    const long j1 = (j + 1) % n;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * values_[j] + h10 * step_ * slopes_[j] + h01 * values_[j1] +
           h11 * step_ * slopes_[j1];
  }

 private:
  std::vector<double> values_, slopes_;
  double step_;
};

}  // namespace

PeriodicProfile fourier_profile(std::vector<FourierTerm> terms, std::string name) {
  std::vector<FourierTerm> merged;
  for (const auto& t : terms) {
    if (t.harmonic < 1)
      throw ProfileError("fourier_profile: harmonic index must be >= 1 (a constant term is not "
                         "zero-mean)");
    auto same = std::find_if(merged.begin(), merged.end(),
                             [&](const FourierTerm& m) { return m.harmonic == t.harmonic; });
    if (same == merged.end()) {
      merged.push_back(t);
    } else {
      same->cos_amplitude += t.cos_amplitude;
      same->sin_amplitude += t.sin_amplitude;
    }
  }
  terms = std::move(merged);

  double msq = 0.0;
  for (const auto& t : terms) {
    const double n = t.harmonic;
    msq += (t.cos_amplitude * t.cos_amplitude + t.sin_amplitude * t.sin_amplitude) / (2 * n * n);
  }

  auto shared = std::make_shared<const std::vector<FourierTerm>>(terms);
  PeriodicProfile p;
  p.v_ = [shared](double s) {
    double sum = 0.0;
    for (const auto& t : *shared)
      sum += t.cos_amplitude * std::cos(t.harmonic * s) + t.sin_amplitude * std::sin(t.harmonic * s);
    return sum;
  };
  p.g_ = [shared](double s) {
    double sum = 0.0;
    for (const auto& t : *shared)
      sum += (t.cos_amplitude * std::sin(t.harmonic * s) -
              t.sin_amplitude * std::cos(t.harmonic * s)) /
             t.harmonic;
    return sum;
  };
  p.w_ = [shared](double s) {
    double sum = 0.0;
    for (const auto& t : *shared) {
      const double n2 = double(t.harmonic) * t.harmonic;
      sum -= (t.cos_amplitude * std::cos(t.harmonic * s) +
              t.sin_amplitude * std::sin(t.harmonic * s)) /
             n2;
    }
    return sum;
  };
  p.g_mean_square_ = msq;
  p.terms_ = std::move(terms);
  p.name_ = std::move(name);
  return p;
}

PeriodicProfile cosine_profile() { return fourier_profile({{1, 1.0, 0.0}}, "cos"); }

PeriodicProfile sine_profile() { return fourier_profile({{1, 0.0, 1.0}}, "sin"); }

PeriodicProfile make_profile(RealFunction v, int samples_per_period) {
  if (samples_per_period < 16)
    throw ProfileError("make_profile: samples_per_period must be at least 16");
  const int n = samples_per_period;
  const double h = kTwoPi / n;

  std::vector<double> samples(static_cast<std::size_t>(n));
  double mean = 0.0;
  for (int j = 0; j < n; ++j) {
    samples[j] = v(j * h);
    if (!std::isfinite(samples[j])) throw ProfileError("make_profile: non-finite sample of v");
    mean += samples[j];
  }
  mean /= n;
  if (std::abs(mean) > kMeanTolerance) {
    std::ostringstream msg;
    msg << "make_profile: <v> = " << mean
        << " is not zero; move the constant part into the background";
    throw ProfileError(msg.str());
  }

  // Antiderivatives are taken harmonic by harmonic; the Nyquist mode has no real
  // antiderivative on the table and is dropped.
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, samples);
  std::vector<std::complex<double>> g_hat(spectrum.size()), w_hat(spectrum.size());
  const std::complex<double> i(0.0, 1.0);
  for (int m = 1; m < n; ++m) {
    const int freq = m <= n / 2 ? m : m - n;
    if (2 * m == n) continue;
    g_hat[m] = spectrum[m] / (i * double(freq));
    w_hat[m] = -spectrum[m] / (double(freq) * freq);
  }
  std::vector<std::complex<double>> g_c, w_c;
  fft.inv(g_c, g_hat);
  fft.inv(w_c, w_hat);

  std::vector<double> g_tab(n), w_tab(n);
  double msq = 0.0;
  for (int j = 0; j < n; ++j) {
    g_tab[j] = g_c[j].real();
    w_tab[j] = w_c[j].real();
    msq += g_tab[j] * g_tab[j];
  }
  msq /= n;

  PeriodicProfile p;
  p.v_ = std::move(v);
  p.g_ = PeriodicHermite(g_tab, samples);
  p.w_ = PeriodicHermite(w_tab, g_tab);
  p.g_mean_square_ = msq;
  p.name_ = "tabulated";
  return p;
}

double period_average(const RealFunction& f, int samples) {
  if (samples < 1) throw std::invalid_argument("period_average: samples must be positive");
  const double h = kTwoPi / samples;
  double sum = 0.0;
  for (int j = 0; j < samples; ++j) sum += f(j * h);
  return sum / samples;
}

}  // namespace fastosc
