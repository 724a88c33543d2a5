#include "wavepacket/coherence.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wavepacket {

using std::numbers::ln2;
using std::numbers::pi;

double DetectorSpec::added_variance() const {
  if (fwhm < 0.0) throw std::invalid_argument("detector fwhm must be >= 0");
  switch (kernel) {
    case DetectorKernel::gaussian:
      return fwhm * fwhm / (8.0 * ln2);
    case DetectorKernel::tophat:
      return fwhm * fwhm / 12.0;
  }
  throw std::invalid_argument("unknown detector kernel");
}

std::complex<double> density_initial(double x, double x_prime, const MixedState& ms) {
  const double b = ms.params.b;
  const double dk = ms.coherence.delta_kx;
  const double diff = x - x_prime;
  const double amp = 1.0 / (b * std::sqrt(pi)) *
                     std::exp(-(x * x + x_prime * x_prime) / (2.0 * b * b)) *
                     std::exp(-0.25 * dk * dk * diff * diff);
  return {amp, 0.0};
}

CovarianceMatrix covariance_mixed(double t, const MixedState& ms) {
  const double b = ms.params.b;
  const double tau = ms.params.tau_b;
  const double hbar = ms.constants.hbar;
  const double eps = ms.epsilon();
  const double u = t / tau;
  CovarianceMatrix cov;
  cov.sigma_xx = 0.5 * b * b * (1.0 + eps * u * u);
  cov.sigma_pp = 0.5 * hbar * hbar * eps / (b * b);
  cov.sigma_xp = 0.5 * hbar * u * eps;
  return cov;
}

double effective_width(double t, const MixedState& ms) {
  return std::sqrt(2.0 * covariance_mixed(t, ms).sigma_xx);
}

double gouy_mixed(double t, const MixedState& ms) {
  const double root_eps = std::sqrt(ms.epsilon());
  return -0.5 / root_eps * std::atan(root_eps * t / ms.params.tau_b);
}

double intensity(double x, double t, const MixedState& ms) {
  const double var = covariance_mixed(t, ms).sigma_xx;
  return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * pi * var);
}

namespace {

double tophat_convolved(double x, double sigma2, double width) {
  const double s = std::sqrt(2.0 * sigma2);
  return 0.5 / width * (std::erf((x + 0.5 * width) / s) - std::erf((x - 0.5 * width) / s));
}

}  // namespace

double detected_intensity(double x, double t, const MixedState& ms, const DetectorSpec& det) {
  const double var = covariance_mixed(t, ms).sigma_xx;
  if (det.fwhm == 0.0) return intensity(x, t, ms);
  if (det.kernel == DetectorKernel::gaussian) {
    const double eff = var + det.added_variance();
    return std::exp(-0.5 * x * x / eff) / std::sqrt(2.0 * pi * eff);
  }
  return tophat_convolved(x, var, det.fwhm);
}

double fwhm(double t, const MixedState& ms, const DetectorSpec& det) {
  if (det.fwhm == 0.0 || det.kernel == DetectorKernel::gaussian) {
    const double eff = covariance_mixed(t, ms).sigma_xx + det.added_variance();
    return 2.0 * std::sqrt(2.0 * ln2 * eff);
  }
  // top-hat kernel: locate the half-maximum by bisection
  const double peak = detected_intensity(0.0, t, ms, det);
  const double sigma = std::sqrt(covariance_mixed(t, ms).sigma_xx + det.added_variance());
  double lo = 0.0, hi = 10.0 * sigma + det.fwhm;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (detected_intensity(mid, t, ms, det) > 0.5 * peak)
      lo = mid;
    else
      hi = mid;
  }
  return lo + hi;  // 2 * half-width
}

double sigma_xp_from_fwhm(double W, double b, double delta_kx, const PhysicalConstants& pc) {
  const double floor = 2.0 * std::sqrt(ln2) * b;
  const double ratio = W / floor;
  if (ratio < 1.0)
    throw std::domain_error("sigma_xp_from_fwhm: width below initial-state minimum");
  const double eps = coherence_epsilon(b, delta_kx);
  return 0.5 * pc.hbar * std::sqrt(eps) * std::sqrt(ratio * ratio - 1.0);
}

}  // namespace wavepacket
