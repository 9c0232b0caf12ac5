// Serial reference vs OpenMP/fast production kernels.
#include <benchmark/benchmark.h>

#include "ealign/config.hpp"
#include "ealign/dynamics.hpp"
#include "ealign/kernel.hpp"
#include "ealign/reference.hpp"

using namespace ealign;

namespace {

struct Setup {
  GridPtr grid;
  Kernel kernel;
  VectorField u;
  ScalarField w;
  EosParams eos;
  SimState state;
};

Setup make_setup(int dim, int n, KernelKind kind) {
  Setup s;
  s.grid = make_grid(dim, 6.283185307179586, n);
  KernelSpec spec;
  spec.kind = kind;
  spec.profile = KernelProfile::bump;
  spec.radius = 1.0;
  spec.amplitude = 1.0;
  s.kernel = build_kernel(spec, s.grid);
  s.u = VectorField(s.grid);
  for (int d = 0; d < dim; ++d)
    s.u.comps[static_cast<std::size_t>(d)] =
        random_band_field(s.grid, 1, n / 4, 0.01, 7, static_cast<std::uint64_t>(d));
  s.w = random_band_field(s.grid, 0, n / 4, 0.01, 9, 5);
  for (auto& v : s.w.values) v += 1.0;
  s.eos = make_eos(1.0, 2.0, 0.5, 2.0, 0.4);
  s.state.form = Formulation::symmetrized;
  s.state.density_like = random_band_field(s.grid, 1, n / 4, 0.01, 11, 6);
  s.state.velocity = s.u;
  return s;
}

void BM_ConvolveDirectSerial(benchmark::State& state) {
  const auto s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                            KernelKind::projection);
  for (auto _ : state) benchmark::DoNotOptimize(ref::convolve_direct(s.kernel, s.u));
}

void BM_ConvolveDirectOmp(benchmark::State& state) {
  const auto s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                            KernelKind::projection);
  for (auto _ : state)
    benchmark::DoNotOptimize(convolve(s.kernel, s.u, ConvMethod::direct));
}

void BM_ConvolveFast(benchmark::State& state) {
  const auto s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                            KernelKind::projection);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(s.kernel, s.u, ConvMethod::fast));
}

void BM_AlignmentForceSerial(benchmark::State& state) {
  const auto s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                            KernelKind::isotropic);
  for (auto _ : state)
    benchmark::DoNotOptimize(ref::alignment_force_direct(s.kernel, s.u, s.w, 1.0));
}

void BM_AlignmentForceFast(benchmark::State& state) {
  const auto s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                            KernelKind::isotropic);
  for (auto _ : state)
    benchmark::DoNotOptimize(alignment_force(s.kernel, s.u, s.w, 1.0, ConvMethod::fast));
}

void BM_RhsSymmetrized(benchmark::State& state) {
  const auto s = make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                            KernelKind::isotropic);
  for (auto _ : state) benchmark::DoNotOptimize(rhs_symmetrized(s.state, s.eos, s.kernel));
}

}  // namespace

BENCHMARK(BM_ConvolveDirectSerial)->Args({1, 1024})->Args({2, 64})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ConvolveDirectOmp)->Args({1, 1024})->Args({2, 64})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ConvolveFast)->Args({1, 1024})->Args({2, 64})->Args({2, 256})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AlignmentForceSerial)->Args({1, 1024})->Args({2, 64})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AlignmentForceFast)->Args({1, 1024})->Args({2, 64})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RhsSymmetrized)->Args({1, 4096})->Args({2, 128})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
