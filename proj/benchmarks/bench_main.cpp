#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "wavepacket/analytic.hpp"
#include "wavepacket/experiment.hpp"
#include "wavepacket/oracle.hpp"

namespace wp = wavepacket;

namespace {

wp::MixedState reference_state(double dkx = 9.0e6) {
  wp::PhysicalConstants pc;
  return wp::MixedState{wp::PacketParams(1.0e-7, 1, wp::c70_mass(pc), pc),
                        wp::CoherenceSpec(dkx), wp::Particle(wp::c70_mass(pc)), pc};
}

void BM_PropagateFree(benchmark::State& state) {
  const wp::MixedState ms = reference_state(0.0);
  const double tau = ms.params.tau_b;
  const auto n = static_cast<std::size_t>(state.range(0));
  const wp::oracle::GridField init =
      wp::oracle::initial_gaussian(ms.params.b, 0.0, 64.0 * ms.params.b, n);
  for (auto _ : state) {
    auto out = wp::oracle::propagate_free(init, tau, ms.particle.mass, ms.constants);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PropagateFree)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oNLogN);

void BM_EnsembleAverage(benchmark::State& state) {
  const wp::MixedState ms = reference_state();
  wp::oracle::EnsembleSpec spec;
  spec.quadrature_nodes = static_cast<int>(state.range(0));
  spec.grid_n = 4096;
  for (auto _ : state) {
    auto res = wp::oracle::ensemble_average(ms, ms.params.tau_b, spec);
    benchmark::DoNotOptimize(res.covariance.sigma_xx);
  }
}
BENCHMARK(BM_EnsembleAverage)->Arg(8)->Arg(32)->Arg(64);

void BM_GouyWidthIntegral(benchmark::State& state) {
  const wp::MixedState ms = reference_state();
  const double tau = ms.params.tau_b;
  auto width = [&](double t) { return wp::effective_width(t, ms); };
  for (auto _ : state) {
    const double mu = wp::gouy_from_width_integral(width, 3.0 * tau, ms.particle.mass,
                                                   ms.constants);
    benchmark::DoNotOptimize(mu);
  }
}
BENCHMARK(BM_GouyWidthIntegral);

void BM_FitDeltaKx(benchmark::State& state) {
  wp::PhysicalConstants pc;
  wp::ExperimentConfig cfg{wp::Particle(wp::c70_mass(pc)), 6.65e-3,
                           wp::DetectorSpec{12e-6}, 1.0, wp::VdwPolicy{}, true, pc};
  std::vector<double> a;
  for (int i = 0; i < 12; ++i)
    a.push_back(5.0e-8 * std::pow(40.0, i / 11.0));
  const auto data = wp::synthetic_dataset(a, 9.0e6, cfg);
  for (auto _ : state) {
    auto fit = wp::fit_delta_kx(data, cfg, 1.0e6);
    benchmark::DoNotOptimize(fit.delta_kx);
  }
}
BENCHMARK(BM_FitDeltaKx);

}  // namespace

BENCHMARK_MAIN();
