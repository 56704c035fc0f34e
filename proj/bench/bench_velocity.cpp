// Serial reference vs OpenMP node-velocity evaluation.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "qs2l/boundary_integral.hpp"
#include "qs2l/contour.hpp"
#include "qs2l/dynamics.hpp"

namespace {

using namespace qs2l;

dynamics::EvolutionState perturbed_pair(int nodes) {
  std::vector<std::complex<double>> z1(nodes), z2(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double t = 2.0 * std::numbers::pi * i / nodes;
    z1[i] = std::polar(1.0 + 0.05 * std::cos(3.0 * t), t);
    z2[i] = std::polar(0.7 + 0.03 * std::cos(2.0 * t), t);
  }
  dynamics::EvolutionState s;
  s.boundaries = {dynamics::PatchBoundary::from_points(z1, 1), dynamics::PatchBoundary::from_points(z2, 2)};
  return s;
}

void velocity(benchmark::State& st, bie::Execution exec) {
  const int nodes = static_cast<int>(st.range(0));
  const LayerParams p = LayerParams::make(1.0, 1.0, 1.0, 0.7);
  const bie::VelocityOperator op(p, nodes);
  const bie::CurvePair curves = dynamics::state_curves(perturbed_pair(nodes));
  for (auto _ : st) {
    benchmark::DoNotOptimize(op.on_nodes(curves, 1, exec));
    benchmark::DoNotOptimize(op.on_nodes(curves, 2, exec));
  }
  st.SetItemsProcessed(st.iterations() * 4L * nodes * nodes);
}

void BM_VelocitySerial(benchmark::State& st) { velocity(st, bie::Execution::serial); }
void BM_VelocityParallel(benchmark::State& st) { velocity(st, bie::Execution::parallel); }

void functional(benchmark::State& st, bie::Execution exec) {
  const int nodes = static_cast<int>(st.range(0));
  const LayerParams p = LayerParams::make(1.0, 1.0, 1.0, 0.7);
  auto r = contour::RadialDeformation::from_coeffs(3, nodes, {1e-3, 1e-5}, {2e-3, -1e-5});
  for (auto _ : st) benchmark::DoNotOptimize(contour::functional_f(p, 0.3, r, exec));
}

void BM_FunctionalSerial(benchmark::State& st) { functional(st, bie::Execution::serial); }
void BM_FunctionalParallel(benchmark::State& st) { functional(st, bie::Execution::parallel); }

}  // namespace

BENCHMARK(BM_VelocitySerial)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VelocityParallel)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FunctionalSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FunctionalParallel)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
