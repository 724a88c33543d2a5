#ifndef WAVEPACKET_ORACLE_HPP
#define WAVEPACKET_ORACLE_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "wavepacket/coherence.hpp"
#include "wavepacket/types.hpp"

namespace wavepacket::oracle {

struct GridOverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform complex amplitude grid on [x_min, x_max), n a power of two.
/// The grid is symmetric about 0 so that x = 0 lands exactly on a node.
struct GridField {
  double x_min = 0.0;
  double x_max = 0.0;
  std::vector<std::complex<double>> values;

  std::size_t size() const { return values.size(); }
  double dx() const { return (x_max - x_min) / static_cast<double>(size()); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }

  double norm() const;       // sum |psi|^2 dx
  void normalize();
};

/// Symmetric grid holding a normalized Gaussian of parameter b boosted by
/// momentum hbar*k0. half_span is the half-extent; n must be a power of two.
GridField initial_gaussian(double b, double k0, double half_span, std::size_t n);

/// Exact free evolution in momentum space, phase exp(-i hbar k^2 t / 2m).
/// Throws GridOverflowError when the evolved density touches the grid edge
/// (boundary density > 1e-12 of peak).
GridField propagate_free(const GridField& field, double t, double mass,
                         const PhysicalConstants& pc = {});

/// Position/momentum second moments by grid quadrature; sigma_xp from the
/// symmetrized form via the spectral derivative.
CovarianceMatrix numeric_moments(const GridField& field, const PhysicalConstants& pc = {});

/// Phase at x = 0. Throws std::domain_error when the on-axis amplitude
/// is below 1e-12 of the peak.
double on_axis_phase(const GridField& field);

/// Gouy phase of field_t relative to the t = 0 reference (zero-mean-momentum
/// packets only). Principal value; use gouy_ladder for unwrapped sweeps.
double numeric_gouy(const GridField& field_t, const GridField& reference);

/// On-axis phase along a time ladder, unwrapped step to step. times must be
/// dense enough that the phase moves < pi/2 per step.
std::vector<double> gouy_ladder(const GridField& initial,
                                const std::vector<double>& times, double mass,
                                const PhysicalConstants& pc = {});

/// Wavefront curvature time R: least-squares fit of the quadratic phase
/// coefficient over the central +-fit_width, R = m / (2 hbar c).
double numeric_radius(const GridField& field, double mass, double fit_width,
                      const PhysicalConstants& pc = {});

/// Gauss-Hermite nodes/weights for integrals of f(u) exp(-u^2) du.
/// Weights sum to sqrt(pi).
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
HermiteRule gauss_hermite(int n);

struct EnsembleSpec {
  int quadrature_nodes = 32;
  unsigned seed = 0;           // only used by the sampling stress mode
  std::size_t grid_n = 4096;   // power of two
  bool monte_carlo = false;    // deterministic quadrature by default
};

struct EnsembleResult {
  CovarianceMatrix covariance;
  IntensityProfile profile;
};

/// Momentum-ensemble average of the evolved pure packets: the numeric
/// realization of the partially coherent state's k_x integral.
EnsembleResult ensemble_average(const MixedState& ms, double t, const EnsembleSpec& spec);

struct ConjectureRow {
  double t;
  double gouy_numeric;   // -(hbar/2m) int dt / Bbar_numeric^2
  double gouy_closed;    // gouy_mixed(t)
  double rel_deviation;
};

struct ConjectureReport {
  std::vector<ConjectureRow> rows;
  double max_rel_deviation = 0.0;
  double final_rel_deviation = 0.0;  // Richardson-refined, at t_max
};

/// Width-integral vs closed-form Gouy phase on a time ladder, with the
/// widths taken from ensemble_average (numeric, not closed form).
ConjectureReport verify_conjecture(const MixedState& ms, double t_max, int steps,
                                   const EnsembleSpec& spec);

}  // namespace wavepacket::oracle

#endif
