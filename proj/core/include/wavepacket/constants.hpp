#ifndef WAVEPACKET_CONSTANTS_HPP
#define WAVEPACKET_CONSTANTS_HPP

#include <numbers>
#include <stdexcept>

namespace wavepacket {

/// Physical constants in SI units. Defaults are CODATA 2018; both values
/// can be overridden through the config file for exact unit tests.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;             // J s
  double atomic_mass_unit = 1.66053907e-27;  // kg

  constexpr double planck() const { return 2.0 * std::numbers::pi * hbar; }

  void validate() const {
    if (!(hbar > 0.0) || !(atomic_mass_unit > 0.0))
      throw std::invalid_argument("physical constants must be strictly positive");
  }
};

/// Default particle species: C70 fullerene, 70 x 12.011 u.
inline constexpr double kC70MassU = 70.0 * 12.011;

inline double c70_mass(const PhysicalConstants& pc = {}) {
  return kC70MassU * pc.atomic_mass_unit;
}

}  // namespace wavepacket

#endif
