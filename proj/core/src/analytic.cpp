#include "wavepacket/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wavepacket/quadrature.hpp"

namespace wavepacket {

using std::numbers::pi;

double width_B(double t, const PacketParams& params) {
  const double u = t / params.tau_b;
  return params.b * std::sqrt(1.0 + u * u);
}

double radius_R(double t, const PacketParams& params) {
  if (t == 0.0)
    return std::copysign(std::numeric_limits<double>::infinity(), t);
  const double r = params.tau_b / t;
  return t * (1.0 + r * r);
}

double gouy_pure(double t, const PacketParams& params) {
  return -0.5 * params.dim * std::atan(t / params.tau_b);
}

std::complex<double> wavefunction_pure_1d(double x, double t, const PureEvolution& ev) {
  const PacketParams& p = ev.params;
  const double B = width_B(t, p);
  const double mu = -0.5 * std::atan(t / p.tau_b);
  const double envelope = std::pow(pi * B * B, -0.25) * std::exp(-x * x / (2.0 * B * B));
  double phase = mu;
  if (t != 0.0) {
    const double R = radius_R(t, p);
    phase += ev.particle.mass * x * x / (2.0 * ev.constants.hbar * R);
  }
  return std::polar(envelope, phase);
}

std::complex<double> wavefunction_pure(double x, double y, double t, const PureEvolution& ev) {
  if (ev.params.dim != 2)
    throw std::invalid_argument("wavefunction_pure: (x,y) form requires dim = 2");
  return wavefunction_pure_1d(x, t, ev) * wavefunction_pure_1d(y, t, ev);
}

CovarianceMatrix covariance_pure(double t, const PureEvolution& ev) {
  const PacketParams& p = ev.params;
  const double hbar = ev.constants.hbar;
  const double B = width_B(t, p);
  CovarianceMatrix cov;
  cov.sigma_xx = 0.5 * B * B;
  cov.sigma_pp = 0.5 * hbar * hbar / (p.b * p.b);
  cov.sigma_xp = 0.5 * hbar * t / p.tau_b;
  return cov;
}

double gouy_from_width_integral(const std::function<double(double)>& width_fn,
                                double t, double mass,
                                const PhysicalConstants& pc, double rel_tol) {
  auto integrand = [&](double tp) {
    const double w = width_fn(tp);
    if (!(w > 0.0)) throw std::domain_error("gouy_from_width_integral: non-positive width");
    return 1.0 / (w * w);
  };
  const QuadratureResult q = integrate_gk15(integrand, 0.0, t, rel_tol);
  return -0.5 * pc.hbar / mass * q.value;
}

double OpticalBeam::width(double z) const {
  const double u = z / z_R;
  return w0 * std::sqrt(1.0 + u * u);
}

double OpticalBeam::curvature_radius(double z) const {
  if (z == 0.0)
    return std::copysign(std::numeric_limits<double>::infinity(), z);
  const double r = z_R / z;
  return z * (1.0 + r * r);
}

double OpticalBeam::gouy(double z) const { return -std::atan(z / z_R); }

OpticalBeam optical_equivalent(const PacketParams& params, const Particle& particle,
                               const PhysicalConstants& pc) {
  OpticalBeam beam;
  beam.w0 = params.b;
  beam.lambda_L = de_broglie_wavelength(particle, pc);
  // z_R = v_z tau_b: verified via t = z/v_z so that w(z) = B(t) pointwise.
  // Equals 2 pi w0^2 / lambda_L under this amplitude-width convention.
  beam.z_R = particle.velocity() * params.tau_b;
  return beam;
}

}  // namespace wavepacket
