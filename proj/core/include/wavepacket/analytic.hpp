#ifndef WAVEPACKET_ANALYTIC_HPP
#define WAVEPACKET_ANALYTIC_HPP

#include <complex>
#include <functional>

#include "wavepacket/types.hpp"

namespace wavepacket {

/// Closed-form free evolution of a pure Gaussian packet.
struct PureEvolution {
  PacketParams params;
  Particle particle;
  PhysicalConstants constants{};
};

/// Packet width B(t) = b sqrt(1 + (t/tau_b)^2). Even in t.
double width_B(double t, const PacketParams& params);

/// Wavefront curvature "time" R(t) = t [1 + (tau_b/t)^2] (seconds; the
/// quadratic phase is m x^2 / (2 hbar R)). Returns signed infinity at
/// t = 0 (flat wavefront) so sweeps over t do not abort.
double radius_R(double t, const PacketParams& params);

/// Gouy phase -(dim/2) arctan(t/tau_b). The per-dimension phase
/// -(1/2) arctan is the primitive; dim acts as a multiplier.
double gouy_pure(double t, const PacketParams& params);

/// 1D amplitude at (x, t): (pi B^2)^(-1/4) * gaussian envelope *
/// exp(i [m x^2/(2 hbar R) - (1/2) arctan(t/tau_b)]).
std::complex<double> wavefunction_pure_1d(double x, double t, const PureEvolution& ev);

/// 2D amplitude; product of two 1D factors, on-axis phase = gouy_pure with dim 2.
std::complex<double> wavefunction_pure(double x, double y, double t, const PureEvolution& ev);

/// Per-dimension covariance: sigma_xx = B^2/2, sigma_pp = hbar^2/(2 b^2),
/// sigma_xp = hbar t/(2 tau_b). Determinant = hbar^2/4 for all t.
CovarianceMatrix covariance_pure(double t, const PureEvolution& ev);

/// Gouy phase from the width integral: -(hbar/2m) int_0^t dt'/width(t')^2,
/// adaptive quadrature at rel_tol. Per-dimension phase.
double gouy_from_width_integral(const std::function<double(double)>& width_fn,
                                double t, double mass,
                                const PhysicalConstants& pc = {},
                                double rel_tol = 1e-10);

/// Optical Gaussian beam matched to a matter packet under z = v_z t.
/// With the packet amplitude convention exp(-x^2/(2B^2)) the matched
/// Rayleigh range is z_R = v_z tau_b = 2 pi w0^2 / lambda_L, twice the
/// textbook pi w0^2/lambda of the intensity-width convention.
struct OpticalBeam {
  double lambda_L;  // m
  double w0;        // m
  double z_R;       // m, derived

  double width(double z) const;             // w(z), coincides with B(z/v_z)
  double curvature_radius(double z) const;  // R(z) = v_z * R(t), meters
  double gouy(double z) const;              // zeta(z) = -arctan(z/z_R), 2D per dim pair
};

OpticalBeam optical_equivalent(const PacketParams& params, const Particle& particle,
                               const PhysicalConstants& pc = {});

}  // namespace wavepacket

#endif
