#ifndef WAVEPACKET_TYPES_HPP
#define WAVEPACKET_TYPES_HPP

#include <cmath>
#include <optional>
#include <stdexcept>

#include "wavepacket/constants.hpp"

namespace wavepacket {

namespace detail {
inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}
}  // namespace detail

/// A point particle moving along z with classical longitudinal velocity.
/// v_z is optional: it is only needed for the optical correspondence
/// (lambda_P, k_z) and for t <-> z conversion.
struct Particle {
  double mass;                    // kg
  std::optional<double> v_z;      // m/s

  explicit Particle(double mass_kg, std::optional<double> vz = std::nullopt)
      : mass(mass_kg), v_z(vz) {
    detail::require_finite(mass, "mass");
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");
    if (v_z) {
      detail::require_finite(*v_z, "v_z");
      if (!(*v_z > 0.0)) throw std::invalid_argument("v_z must be > 0");
    }
  }

  double velocity() const {
    if (!v_z) throw std::invalid_argument("longitudinal velocity required");
    return *v_z;
  }
};

/// Packet spreading timescale tau_b = m b^2 / hbar, the matter-wave
/// analog of the Rayleigh range.
inline double timescale_tau(double mass, double b, const PhysicalConstants& pc = {}) {
  detail::require_finite(mass, "mass");
  detail::require_finite(b, "b");
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");
  if (b < 0.0) throw std::invalid_argument("b must be >= 0");
  return mass * b * b / pc.hbar;
}

/// de Broglie wavelength lambda_P = h / (m v_z).
inline double de_broglie_wavelength(const Particle& p, const PhysicalConstants& pc = {}) {
  return pc.planck() / (p.mass * p.velocity());
}

/// Longitudinal wavenumber k_z = m v_z / hbar; k_z * lambda_P = 2 pi.
inline double wavenumber_kz(const Particle& p, const PhysicalConstants& pc = {}) {
  return p.mass * p.velocity() / pc.hbar;
}

/// Coherence factor epsilon = 1 + b^2 dk_x^2; equals 1 iff delta_kx = 0.
inline double coherence_epsilon(double b, double delta_kx) {
  detail::require_finite(b, "b");
  detail::require_finite(delta_kx, "delta_kx");
  if (b < 0.0 || delta_kx < 0.0)
    throw std::invalid_argument("b and delta_kx must be >= 0");
  const double u = b * delta_kx;
  return 1.0 + u * u;
}

/// Initial Gaussian packet: b is the transverse Gaussian parameter of the
/// slit-exit state, dim the number of transverse dimensions (1 or 2).
struct PacketParams {
  double b;      // m
  int dim;       // 1 or 2
  double tau_b;  // s, derived

  PacketParams(double b_m, int dimension, double mass, const PhysicalConstants& pc = {})
      : b(b_m), dim(dimension), tau_b(timescale_tau(mass, b_m, pc)) {
    if (!(b > 0.0)) throw std::invalid_argument("b must be > 0");
    if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  }
};

/// Transverse momentum spread of the partially coherent beam.
struct CoherenceSpec {
  double delta_kx;  // 1/m

  explicit CoherenceSpec(double dkx) : delta_kx(dkx) {
    detail::require_finite(dkx, "delta_kx");
    if (dkx < 0.0) throw std::invalid_argument("delta_kx must be >= 0");
  }

  double epsilon(double b) const { return coherence_epsilon(b, delta_kx); }
};

/// Symmetric 1D covariance matrix of the transverse phase-space variables.
struct CovarianceMatrix {
  double sigma_xx;  // m^2
  double sigma_pp;  // kg^2 m^2 / s^2
  double sigma_xp;  // J s

  /// Kahan's fma form of a*d - b*c: keeps the cancellation exact so the
  /// result is accurate to a few ulp even when the two products nearly cancel.
  double determinant() const {
    const double w = sigma_xp * sigma_xp;
    const double e = std::fma(sigma_xp, sigma_xp, -w);
    return std::fma(sigma_xx, sigma_pp, -w) - e;
  }

  /// Schroedinger-Robertson bound: det >= hbar^2/4 (relative slack for
  /// numerically obtained matrices).
  bool satisfies_uncertainty(const PhysicalConstants& pc = {}, double rel_slack = 1e-9) const {
    const double bound = 0.25 * pc.hbar * pc.hbar;
    return sigma_xx > 0.0 && sigma_pp > 0.0 && determinant() >= bound * (1.0 - rel_slack);
  }
};

}  // namespace wavepacket

#endif
