// Generates the shipped synthetic slit-width/FWHM dataset: 12 log-spaced
// slit widths through the C70 model with delta_kx = 9.0e6 1/m,
// t = 6.65 ms and a 12 um Gaussian detector kernel.

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "wavepacket/experiment.hpp"
#include "wavepacket/io.hpp"

int main(int argc, char** argv) {
  using namespace wavepacket;
  const std::string path = argc > 1 ? argv[1] : "synthetic_fig1.csv";
  const double noise = argc > 2 ? std::stod(argv[2]) : 0.0;
  const unsigned seed = argc > 3 ? static_cast<unsigned>(std::stoul(argv[3])) : 0;

  PhysicalConstants pc;
  ExperimentConfig cfg{Particle(c70_mass(pc)), 6.65e-3, DetectorSpec{12e-6},
                       1.0, VdwPolicy{}, true, pc};
  std::vector<double> a;
  for (int i = 0; i < 12; ++i)
    a.push_back(5.0e-8 * std::pow(2.0e-6 / 5.0e-8, i / 11.0));
  const double dk_true = 9.0e6;
  const auto data = synthetic_dataset(a, dk_true, cfg, noise, seed);
  io::write_dataset(path, data,
                    {{"generator.delta_kx", io::format_double(dk_true)},
                     {"generator.noise_frac", io::format_double(noise)},
                     {"generator.seed", std::to_string(seed)},
                     {"generator.t_s", io::format_double(cfg.t)},
                     {"generator.detector_fwhm_m", io::format_double(cfg.detector.fwhm)}});
  std::cout << "wrote " << path << "\n";
  return 0;
}
