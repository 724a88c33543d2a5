#ifndef WAVEPACKET_QUADRATURE_HPP
#define WAVEPACKET_QUADRATURE_HPP

#include <cstddef>
#include <functional>

namespace wavepacket {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;   // estimated
  std::size_t intervals = 0;
  bool converged = false;
};

/// Adaptive 15-point Gauss-Kronrod integration of f on [a, b].
/// Bisects the interval with the worst local error estimate until the
/// global estimate drops below rel_tol * |integral| (or abs floor).
QuadratureResult integrate_gk15(const std::function<double(double)>& f,
                                double a, double b,
                                double rel_tol = 1e-10,
                                std::size_t max_intervals = 1000000);

}  // namespace wavepacket

#endif
