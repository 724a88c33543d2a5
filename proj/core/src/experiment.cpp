#include "wavepacket/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace wavepacket {

using std::numbers::ln2;
using std::numbers::pi;

double slit_to_b(double a, const ExperimentConfig& cfg, bool vdw_flag) {
  if (!(a > 0.0)) throw std::invalid_argument("slit width must be > 0");
  double b = cfg.slit_factor * a;
  switch (cfg.vdw.mode) {
    case VdwMode::none:
      break;
    case VdwMode::factor_below_threshold:
      if (a < cfg.vdw.threshold) b *= cfg.vdw.factor;
      break;
    case VdwMode::per_point_flag:
      if (vdw_flag) b *= cfg.vdw.factor;
      break;
  }
  if (!(b > 0.0)) throw std::invalid_argument("slit_to_b: nonpositive result");
  return b;
}

MixedState state_for_slit(double a, double delta_kx, const ExperimentConfig& cfg,
                          bool vdw_flag) {
  const double b = slit_to_b(a, cfg, vdw_flag);
  return MixedState{PacketParams(b, 1, cfg.particle.mass, cfg.constants),
                    CoherenceSpec(delta_kx), cfg.particle, cfg.constants};
}

double model_fwhm(double a, double delta_kx, const ExperimentConfig& cfg, bool vdw_flag) {
  return fwhm(cfg.t, state_for_slit(a, delta_kx, cfg, vdw_flag), cfg.detector);
}

std::vector<std::pair<double, double>> predict_fwhm_curve(
    const std::vector<double>& a_values, double delta_kx, const ExperimentConfig& cfg) {
  std::vector<std::pair<double, double>> out;
  out.reserve(a_values.size());
  for (double a : a_values) out.emplace_back(a, model_fwhm(a, delta_kx, cfg));
  return out;
}

std::vector<std::pair<double, double>> sigma_xp_curve(
    const std::vector<double>& a_values, double delta_kx, const ExperimentConfig& cfg) {
  std::vector<std::pair<double, double>> out;
  out.reserve(a_values.size());
  for (double a : a_values) {
    const MixedState ms = state_for_slit(a, delta_kx, cfg);
    out.emplace_back(a, covariance_mixed(cfg.t, ms).sigma_xp);
  }
  return out;
}

std::vector<std::pair<double, double>> gouy_curve(
    const std::vector<double>& a_values, double delta_kx, const ExperimentConfig& cfg) {
  std::vector<std::pair<double, double>> out;
  out.reserve(a_values.size());
  for (double a : a_values)
    out.emplace_back(a, gouy_mixed(cfg.t, state_for_slit(a, delta_kx, cfg)));
  return out;
}

namespace {

double sum_sq_residuals(const std::vector<DataPoint>& data, const ExperimentConfig& cfg,
                        double dk) {
  double sse = 0.0;
  for (const auto& p : data) {
    const double r = model_fwhm(p.slit_width, dk, cfg, p.vdw_flag) - p.measured_fwhm;
    sse += p.weight * r * r;
  }
  return sse;
}

}  // namespace

FitResult fit_delta_kx(const std::vector<DataPoint>& data, const ExperimentConfig& cfg,
                       double init) {
  if (data.size() < 3) throw IllPosedFitError("fit requires at least 3 data points");
  if (!(init > 0.0)) throw std::invalid_argument("init must be > 0");
  const double a0 = data.front().slit_width;
  const bool degenerate = std::all_of(data.begin(), data.end(),
                                      [&](const DataPoint& p) { return p.slit_width == a0; });
  if (degenerate) throw IllPosedFitError("ill-posed fit: all points share one slit width");
  for (const auto& p : data) {
    if (!(p.slit_width > 0.0) || !(p.measured_fwhm > 0.0))
      throw std::invalid_argument("data point with nonpositive width");
    const double floor = 2.0 * std::sqrt(ln2) * slit_to_b(p.slit_width, cfg, p.vdw_flag);
    if (p.measured_fwhm < floor)
      throw IllPosedFitError("ill-posed fit: measured width below initial-state minimum");
  }

  // coarse deterministic scan (0 plus a log ladder around init) for a seed
  double best_dk = 0.0;
  double best_sse = sum_sq_residuals(data, cfg, 0.0);
  for (int i = -20; i <= 20; ++i) {
    const double dk = init * std::pow(10.0, i / 10.0);
    const double sse = sum_sq_residuals(data, cfg, dk);
    if (sse < best_sse) {
      best_sse = sse;
      best_dk = dk;
    }
  }

  // guarded Gauss-Newton refinement
  FitResult result;
  double dk = best_dk;
  double sse = best_sse;
  double jtj = 0.0;
  const int max_iter = 100;
  bool converged = false;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const double step_h = std::max(1e-6 * dk, 1e-3);
    double jtr = 0.0;
    jtj = 0.0;
    for (const auto& p : data) {
      const double wp = model_fwhm(p.slit_width, dk + step_h, cfg, p.vdw_flag);
      const double wm = model_fwhm(p.slit_width, std::max(dk - step_h, 0.0), cfg, p.vdw_flag);
      const double j = (wp - wm) / (step_h + std::min(dk, step_h));
      const double r = model_fwhm(p.slit_width, dk, cfg, p.vdw_flag) - p.measured_fwhm;
      jtr += p.weight * j * r;
      jtj += p.weight * j * j;
    }
    if (!(jtj > 0.0)) break;
    double step = -jtr / jtj;
    // backtracking guard, delta_kx stays nonnegative
    double trial_sse = sse;
    double trial_dk = dk;
    for (int bt = 0; bt < 40; ++bt) {
      trial_dk = std::max(dk + step, 0.0);
      trial_sse = sum_sq_residuals(data, cfg, trial_dk);
      if (trial_sse <= sse) break;
      step *= 0.5;
    }
    const double moved = std::abs(trial_dk - dk);
    dk = trial_dk;
    sse = std::min(trial_sse, sse);
    if (moved <= 1e-10 * (1.0 + dk)) {
      converged = true;
      ++iter;
      break;
    }
  }

  result.delta_kx = dk;
  result.n_iterations = iter;
  result.converged = converged;
  double wsum = 0.0;
  for (const auto& p : data) wsum += p.weight;
  result.residual_rms = std::sqrt(sse / wsum);
  const int dof = static_cast<int>(data.size()) - 1;
  if (jtj > 0.0 && dof > 0)
    result.parameter_stderr = std::sqrt(sse / dof / jtj);
  return result;
}

double angular_divergence(double delta_kx, const Particle& particle,
                          ThetaConvention convention, const PhysicalConstants& pc) {
  if (delta_kx < 0.0) throw std::invalid_argument("delta_kx must be >= 0");
  const double kz = wavenumber_kz(particle, pc);
  const double theta = delta_kx / kz;
  return convention == ThetaConvention::sigma ? theta : theta / std::sqrt(2.0);
}

std::vector<DataPoint> synthetic_dataset(const std::vector<double>& a_values,
                                         double delta_kx_true,
                                         const ExperimentConfig& cfg,
                                         double noise_frac, unsigned seed) {
  std::vector<DataPoint> out;
  out.reserve(a_values.size());
  std::mt19937 rng(seed);
  auto gauss = [&rng]() {
    const double u1 = (static_cast<double>(rng()) + 0.5) / 4294967296.0;
    const double u2 = (static_cast<double>(rng()) + 0.5) / 4294967296.0;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
  };
  for (double a : a_values) {
    DataPoint p;
    p.slit_width = a;
    p.measured_fwhm = model_fwhm(a, delta_kx_true, cfg);
    if (noise_frac > 0.0) p.measured_fwhm *= 1.0 + noise_frac * gauss();
    out.push_back(p);
  }
  return out;
}

}  // namespace wavepacket
