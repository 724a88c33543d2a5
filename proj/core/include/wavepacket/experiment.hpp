#ifndef WAVEPACKET_EXPERIMENT_HPP
#define WAVEPACKET_EXPERIMENT_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "wavepacket/coherence.hpp"
#include "wavepacket/types.hpp"

namespace wavepacket {

/// One slit-width / measured-FWHM record. vdw_flag marks points whose
/// effective slit parameter is rescaled for van der Waals attraction.
struct DataPoint {
  double slit_width;    // m
  double measured_fwhm; // m
  bool vdw_flag = false;
  double weight = 1.0;
};

enum class VdwMode { none, factor_below_threshold, per_point_flag };

struct VdwPolicy {
  VdwMode mode = VdwMode::per_point_flag;
  double factor = 1.0 / 3.0;  // b -> factor * b on corrected points
  double threshold = 0.0;     // m, for factor_below_threshold
};

enum class ThetaConvention { sigma, sqrt2_sigma };

struct ExperimentConfig {
  Particle particle;
  double t;                    // s, time of flight
  DetectorSpec detector{};
  double slit_factor = 1.0;    // b = slit_factor * a before the vdW policy
  VdwPolicy vdw{};
  bool deconvolve = true;      // subtract detector variance before the sigma_xp inversion
  PhysicalConstants constants{};
};

struct FitResult {
  double delta_kx = 0.0;       // 1/m
  double residual_rms = 0.0;   // m
  double parameter_stderr = 0.0;
  int n_iterations = 0;
  bool converged = false;
};

/// Thrown when a fit has no information content (too few or degenerate
/// points, widths below the physical floor). CLI exit code 3.
struct IllPosedFitError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Slit width -> Gaussian parameter b: factor * a, then the vdW policy.
double slit_to_b(double a, const ExperimentConfig& cfg, bool vdw_flag = false);

/// Mixed state at slit width a with momentum spread delta_kx.
MixedState state_for_slit(double a, double delta_kx, const ExperimentConfig& cfg,
                          bool vdw_flag = false);

/// Detected FWHM predicted for one slit width.
double model_fwhm(double a, double delta_kx, const ExperimentConfig& cfg,
                  bool vdw_flag = false);

std::vector<std::pair<double, double>> predict_fwhm_curve(
    const std::vector<double>& a_values, double delta_kx, const ExperimentConfig& cfg);

std::vector<std::pair<double, double>> sigma_xp_curve(
    const std::vector<double>& a_values, double delta_kx, const ExperimentConfig& cfg);

std::vector<std::pair<double, double>> gouy_curve(
    const std::vector<double>& a_values, double delta_kx, const ExperimentConfig& cfg);

/// One-parameter least squares for delta_kx: coarse deterministic bracket
/// scan followed by guarded Gauss-Newton.
FitResult fit_delta_kx(const std::vector<DataPoint>& data, const ExperimentConfig& cfg,
                       double init);

/// Beam angular divergence theta = dk/k_z (sigma) or dk/(sqrt(2) k_z)
/// (sqrt2-sigma, the default elsewhere: g(k) has rms dk/sqrt(2)).
double angular_divergence(double delta_kx, const Particle& particle,
                          ThetaConvention convention,
                          const PhysicalConstants& pc = {});

/// Model-generated dataset; noise_frac > 0 adds seeded multiplicative
/// Gaussian noise (fixed Box-Muller over mt19937 for cross-platform
/// determinism).
std::vector<DataPoint> synthetic_dataset(const std::vector<double>& a_values,
                                         double delta_kx_true,
                                         const ExperimentConfig& cfg,
                                         double noise_frac = 0.0,
                                         unsigned seed = 0);

}  // namespace wavepacket

#endif
