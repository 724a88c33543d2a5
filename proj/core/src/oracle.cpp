#include "wavepacket/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

namespace wavepacket::oracle {

using std::numbers::pi;

namespace {

bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

void fft_inplace(std::vector<std::complex<double>>& v, int sign) {
  auto* data = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(v.size()), data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

/// Wrapped wavenumber of FFT bin j: k = 2 pi j~ / (n dx), j~ in [-n/2, n/2).
double bin_k(std::size_t j, std::size_t n, double dx) {
  const auto jn = static_cast<std::ptrdiff_t>(j);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  const std::ptrdiff_t jw = jn < half ? jn : jn - static_cast<std::ptrdiff_t>(n);
  return 2.0 * pi * static_cast<double>(jw) / (static_cast<double>(n) * dx);
}

}  // namespace

double GridField::norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * dx();
}

void GridField::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw std::domain_error("cannot normalize zero field");
  const double scale = 1.0 / std::sqrt(n);
  for (auto& v : values) v *= scale;
}

GridField initial_gaussian(double b, double k0, double half_span, std::size_t n) {
  if (!is_pow2(n)) throw std::invalid_argument("grid size must be a power of two");
  if (!(b > 0.0) || !(half_span > 0.0))
    throw std::invalid_argument("b and half_span must be > 0");
  GridField f;
  f.x_min = -half_span;
  f.x_max = half_span;
  f.values.resize(n);
  const double amp = std::pow(pi * b * b, -0.25);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = f.x(i);
    f.values[i] = std::polar(amp * std::exp(-x * x / (2.0 * b * b)), k0 * x);
  }
  f.normalize();
  return f;
}

GridField propagate_free(const GridField& field, double t, double mass,
                         const PhysicalConstants& pc) {
  if (!is_pow2(field.size())) throw std::invalid_argument("grid size must be a power of two");
  if (!std::isfinite(t)) throw std::invalid_argument("t must be finite");
  GridField out = field;
  fft_inplace(out.values, FFTW_FORWARD);
  const std::size_t n = out.size();
  const double dx = field.dx();
  for (std::size_t j = 0; j < n; ++j) {
    const double k = bin_k(j, n, dx);
    out.values[j] *= std::polar(1.0 / static_cast<double>(n),
                                -0.5 * pc.hbar * k * k * t / mass);
  }
  fft_inplace(out.values, FFTW_BACKWARD);

  double peak = 0.0;
  for (const auto& v : out.values) peak = std::max(peak, std::norm(v));
  const double edge = std::max(std::norm(out.values.front()), std::norm(out.values.back()));
  if (edge > 1e-12 * peak)
    throw GridOverflowError("propagate_free: evolved state reaches the grid boundary");
  return out;
}

CovarianceMatrix numeric_moments(const GridField& field, const PhysicalConstants& pc) {
  const std::size_t n = field.size();
  const double dx = field.dx();
  const double nrm = field.norm();
  if (std::abs(nrm - 1.0) > 1e-6)
    throw std::invalid_argument("numeric_moments: field not normalized");

  double mean_x = 0.0, mean_x2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::norm(field.values[i]) * dx;
    const double x = field.x(i);
    mean_x += w * x;
    mean_x2 += w * x * x;
  }

  // momentum moments from the spectral weights
  std::vector<std::complex<double>> spec = field.values;
  fft_inplace(spec, FFTW_FORWARD);
  double mean_p = 0.0, mean_p2 = 0.0;
  const double wnorm = dx / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(spec[j]) * wnorm;
    const double p = pc.hbar * bin_k(j, n, dx);
    mean_p += w * p;
    mean_p2 += w * p * p;
  }

  // p psi via the spectral multiplier hbar k, then Re<x p> (the symmetrized moment)
  std::vector<std::complex<double>> dpsi = spec;
  for (std::size_t j = 0; j < n; ++j)
    dpsi[j] *= pc.hbar * bin_k(j, n, dx) / static_cast<double>(n);
  fft_inplace(dpsi, FFTW_BACKWARD);
  double re_xp = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    re_xp += (std::conj(field.values[i]) * field.x(i) * dpsi[i]).real() * dx;

  CovarianceMatrix cov;
  cov.sigma_xx = mean_x2 - mean_x * mean_x;
  cov.sigma_pp = mean_p2 - mean_p * mean_p;
  cov.sigma_xp = re_xp - mean_x * mean_p;
  return cov;
}

double on_axis_phase(const GridField& field) {
  const std::size_t i0 = field.size() / 2;
  if (std::abs(field.x(i0)) > 1e-9 * field.dx() + 1e-300)
    throw std::invalid_argument("on_axis_phase: grid does not contain x = 0");
  double peak = 0.0;
  for (const auto& v : field.values) peak = std::max(peak, std::abs(v));
  const std::complex<double> c = field.values[i0];
  if (std::abs(c) < 1e-12 * peak) throw std::domain_error("on-axis phase undefined");
  return std::arg(c);
}

double numeric_gouy(const GridField& field_t, const GridField& reference) {
  double phase = on_axis_phase(field_t) - on_axis_phase(reference);
  while (phase > pi) phase -= 2.0 * pi;
  while (phase < -pi) phase += 2.0 * pi;
  return phase;
}

std::vector<double> gouy_ladder(const GridField& initial,
                                const std::vector<double>& times, double mass,
                                const PhysicalConstants& pc) {
  std::vector<double> out;
  out.reserve(times.size());
  const double phase0 = on_axis_phase(initial);
  double prev = 0.0;
  for (double t : times) {
    const GridField ft = propagate_free(initial, t, mass, pc);
    double raw = on_axis_phase(ft) - phase0;
    // unwrap against the previous ladder point
    while (raw - prev > pi) raw -= 2.0 * pi;
    while (raw - prev < -pi) raw += 2.0 * pi;
    out.push_back(raw);
    prev = raw;
  }
  return out;
}

double numeric_radius(const GridField& field, double mass, double fit_width,
                      const PhysicalConstants& pc) {
  if (!(fit_width > 0.0)) throw std::invalid_argument("fit_width must be > 0");
  const std::size_t n = field.size();
  const std::size_t i0 = n / 2;
  const double mu = on_axis_phase(field);

  // unwrapped phase samples phi(x) - mu over the central window,
  // least squares against {1, x^2}
  double s0 = 0.0, s2 = 0.0, s4 = 0.0, sy = 0.0, sy2 = 0.0;
  for (int dir : {-1, 1}) {
    double prev = 0.0;
    for (std::size_t k = 1;; ++k) {
      const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(i0) + dir * static_cast<std::ptrdiff_t>(k);
      if (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) break;
      const double x = field.x(static_cast<std::size_t>(i));
      if (std::abs(x) > fit_width) break;
      double phi = std::arg(field.values[static_cast<std::size_t>(i)]) - mu;
      while (phi - prev > pi) phi -= 2.0 * pi;
      while (phi - prev < -pi) phi += 2.0 * pi;
      prev = phi;
      const double x2 = x * x;
      s0 += 1.0;
      s2 += x2;
      s4 += x2 * x2;
      sy += phi;
      sy2 += phi * x2;
    }
  }
  const double det = s0 * s4 - s2 * s2;
  if (!(det > 0.0)) throw std::domain_error("numeric_radius: fit window too small");
  const double c = (s0 * sy2 - s2 * sy) / det;
  return mass / (2.0 * pc.hbar * c);
}

HermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n >= 1 required");
  HermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  const double pim4 = std::pow(pi, -0.25);
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // initial guesses, then Newton on the orthonormal Hermite recurrence
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[m - 1] = 0.0;
  return rule;
}

namespace {

struct NodeSet {
  std::vector<double> k;
  std::vector<double> w;  // sums to 1
};

NodeSet momentum_nodes(const MixedState& ms, const EnsembleSpec& spec) {
  if (spec.quadrature_nodes < 8 && ms.coherence.delta_kx > 0.0)
    throw std::invalid_argument("ensemble_average: at least 8 nodes required");
  NodeSet ns;
  const double dk = ms.coherence.delta_kx;
  if (dk == 0.0) {
    ns.k = {0.0};
    ns.w = {1.0};
    return ns;
  }
  if (spec.monte_carlo) {
    // seeded stress mode: equal-weight draws from g(k)
    std::mt19937 rng(spec.seed);
    const int nsamp = spec.quadrature_nodes;
    ns.k.reserve(nsamp);
    ns.w.assign(nsamp, 1.0 / nsamp);
    for (int i = 0; i < nsamp; ++i) {
      // Box-Muller, fixed algorithm for cross-platform determinism
      const double u1 = (static_cast<double>(rng()) + 0.5) / 4294967296.0;
      const double u2 = (static_cast<double>(rng()) + 0.5) / 4294967296.0;
      const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
      ns.k.push_back(g * dk / std::sqrt(2.0));  // g(k) has rms dk/sqrt(2)
    }
    return ns;
  }
  const HermiteRule rule = gauss_hermite(spec.quadrature_nodes);
  const double inv_sqrt_pi = 1.0 / std::sqrt(pi);
  for (int i = 0; i < spec.quadrature_nodes; ++i) {
    ns.k.push_back(dk * rule.nodes[i]);
    ns.w.push_back(rule.weights[i] * inv_sqrt_pi);
  }
  return ns;
}

double grid_half_span(const MixedState& ms, double t_final, double k_max) {
  const double b = ms.params.b;
  const double u = t_final / ms.params.tau_b;
  const double pure_width = b * std::sqrt(1.0 + u * u);
  const double drift = std::abs(ms.constants.hbar * k_max * t_final / ms.particle.mass);
  return std::max(8.0 * b, drift + 8.0 * pure_width);
}

}  // namespace

EnsembleResult ensemble_average(const MixedState& ms, double t, const EnsembleSpec& spec) {
  const NodeSet ns = momentum_nodes(ms, spec);
  const double k_max = *std::max_element(ns.k.begin(), ns.k.end(),
                                         [](double a, double b) { return std::abs(a) < std::abs(b); });
  const double half = grid_half_span(ms, t, std::abs(k_max));

  EnsembleResult out;
  out.profile.t = t;
  double mean_x = 0.0, mean_x2 = 0.0, mean_p = 0.0, mean_p2 = 0.0, mean_xp = 0.0;
  for (std::size_t i = 0; i < ns.k.size(); ++i) {
    GridField f = initial_gaussian(ms.params.b, ns.k[i], half, spec.grid_n);
    if (t != 0.0) f = propagate_free(f, t, ms.particle.mass, ms.constants);
    const double w = ns.w[i];

    const std::size_t n = f.size();
    const double dx = f.dx();
    if (out.profile.grid.empty()) {
      out.profile.grid.resize(n);
      out.profile.values.assign(n, 0.0);
      for (std::size_t j = 0; j < n; ++j) out.profile.grid[j] = f.x(j);
    }
    for (std::size_t j = 0; j < n; ++j)
      out.profile.values[j] += w * std::norm(f.values[j]);

    // raw first/second moments of this component
    double mx = 0.0, mx2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ww = std::norm(f.values[j]) * dx;
      mx += ww * f.x(j);
      mx2 += ww * f.x(j) * f.x(j);
    }
    const CovarianceMatrix c = numeric_moments(f, ms.constants);
    const double mp = ms.constants.hbar * ns.k[i];  // boosted packet mean momentum
    mean_x += w * mx;
    mean_x2 += w * mx2;
    mean_p += w * mp;
    mean_p2 += w * (c.sigma_pp + mp * mp);
    mean_xp += w * (c.sigma_xp + mx * mp);
  }
  out.covariance.sigma_xx = mean_x2 - mean_x * mean_x;
  out.covariance.sigma_pp = mean_p2 - mean_p * mean_p;
  out.covariance.sigma_xp = mean_xp - mean_x * mean_p;
  return out;
}

ConjectureReport verify_conjecture(const MixedState& ms, double t_max, int steps,
                                   const EnsembleSpec& spec) {
  if (steps < 16) throw std::invalid_argument("verify_conjecture: steps >= 16 required");
  steps += (4 - steps % 4) % 4;  // cumulative Simpson + Richardson need multiples of 4

  const double h = t_max / steps;
  std::vector<double> integrand(steps + 1);
  for (int j = 0; j <= steps; ++j) {
    const double bbar2 = 2.0 * ensemble_average(ms, j * h, spec).covariance.sigma_xx;
    integrand[j] = 1.0 / bbar2;
  }

  const double scale = -0.5 * ms.constants.hbar / ms.particle.mass;
  auto simpson_prefix = [&](int stride) {
    // cumulative Simpson with step stride*h, defined at multiples of 2*stride
    std::vector<double> s(steps + 1, 0.0);
    double acc = 0.0;
    for (int j = 2 * stride; j <= steps; j += 2 * stride) {
      acc += stride * h / 3.0 *
             (integrand[j - 2 * stride] + 4.0 * integrand[j - stride] + integrand[j]);
      s[j] = acc;
    }
    return s;
  };
  const std::vector<double> fine = simpson_prefix(1);
  const std::vector<double> coarse = simpson_prefix(2);

  ConjectureReport report;
  for (int j = 4; j <= steps; j += 4) {
    const double refined = fine[j] + (fine[j] - coarse[j]) / 15.0;
    ConjectureRow row;
    row.t = j * h;
    row.gouy_numeric = scale * refined;
    row.gouy_closed = gouy_mixed(row.t, ms);
    row.rel_deviation = std::abs(row.gouy_numeric - row.gouy_closed) / std::abs(row.gouy_closed);
    report.rows.push_back(row);
    report.max_rel_deviation = std::max(report.max_rel_deviation, row.rel_deviation);
  }
  report.final_rel_deviation = report.rows.back().rel_deviation;
  return report;
}

}  // namespace wavepacket::oracle
