#ifndef WAVEPACKET_COHERENCE_HPP
#define WAVEPACKET_COHERENCE_HPP

#include <complex>
#include <vector>

#include "wavepacket/analytic.hpp"
#include "wavepacket/types.hpp"

namespace wavepacket {

/// Partially coherent slit-exit state: Gaussian packet of parameter b
/// averaged over a Gaussian transverse-momentum distribution of spread
/// delta_kx. Transverse direction only (dim = 1).
struct MixedState {
  PacketParams params;
  CoherenceSpec coherence;
  Particle particle;
  PhysicalConstants constants{};

  double epsilon() const { return coherence.epsilon(params.b); }

  PureEvolution pure() const { return PureEvolution{params, particle, constants}; }
};

enum class DetectorKernel { gaussian, tophat };

/// Detector resolution; D is the FWHM of the resolution kernel
/// (full width for the top-hat alternative). D = 0 is an ideal detector.
struct DetectorSpec {
  double fwhm = 0.0;  // m
  DetectorKernel kernel = DetectorKernel::gaussian;

  /// Variance added to the intensity profile by the kernel.
  double added_variance() const;
};

struct IntensityProfile {
  double t = 0.0;
  std::vector<double> grid;    // m, ordered
  std::vector<double> values;  // 1/m
};

/// Initial density matrix rho(x, x', 0): the Gaussian k_x integral carried
/// out in closed form. Hermitian, real and positive on the diagonal.
std::complex<double> density_initial(double x, double x_prime, const MixedState& ms);

/// Evolved covariance matrix; determinant = (hbar^2/4)(1 + b^2 dk^2) for all t.
CovarianceMatrix covariance_mixed(double t, const MixedState& ms);

/// Effective width Bbar(t) = sqrt(2 sigma_xx) = (b/tau_b) sqrt(tau_b^2 + eps t^2).
double effective_width(double t, const MixedState& ms);

/// Mixed-state Gouy phase -(1/(2 sqrt(eps))) arctan(sqrt(eps) t / tau_b);
/// asymptote -pi/(4 sqrt(eps)).
double gouy_mixed(double t, const MixedState& ms);

/// Intensity I(x,t) = rho(x,x,t): Gaussian of variance sigma_xx(t), unit norm.
double intensity(double x, double t, const MixedState& ms);

/// Intensity convolved with the detector kernel.
double detected_intensity(double x, double t, const MixedState& ms, const DetectorSpec& det);

/// FWHM of the detected pattern. Closed form for the Gaussian kernel,
/// numeric half-max bracketing for the top-hat.
double fwhm(double t, const MixedState& ms, const DetectorSpec& det);

/// Inversion of the width relation: |sigma_xp| inferred from a measured
/// FWHM (detector already deconvolved). Throws std::domain_error when W is
/// below the t = 0 floor 2 sqrt(ln 2) b.
double sigma_xp_from_fwhm(double W, double b, double delta_kx,
                          const PhysicalConstants& pc = {});

}  // namespace wavepacket

#endif
