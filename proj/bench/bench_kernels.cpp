// Serial reference vs OpenMP path for the grid kernels.
// Thread count follows OMP_NUM_THREADS / ROTENBERG_THREADS.

#include <benchmark/benchmark.h>

#include "rotenberg/densities.hpp"
#include "rotenberg/dual.hpp"
#include "rotenberg/extension.hpp"
#include "rotenberg/semigroup.hpp"
#include "rotenberg/stationary.hpp"

using namespace rotenberg;

namespace {

const Model& model() {
    static const Model m({1.0, 2.0, 0.6, 0.3}, VelocitySpace::uniform(1.0, 2.0, 200),
                         Kernel::builtin(BuiltinKernel::constant, 1.0, 2.0));
    return m;
}

const DensityField& density() {
    static const DensityField f = random_smooth_density(400, model().velocities_ptr(), 1);
    return f;
}

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_BuildExtension(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_extension(model(), density(), 2.0, mode(state)));
    }
}

void BM_Apply(benchmark::State& state) {
    const auto ext = build_extension(model(), density(), 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply(ext, 2.0, mode(state)));
    }
}

void BM_ApplySmallT(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_small_t(model(), 0.4, density(), mode(state)));
    }
}

void BM_DualStep(benchmark::State& state) {
    const auto phi = random_dual(400, model().velocities_ptr(), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_dual_small(model(), 0.5, phi, mode(state)));
    }
}

void BM_ApplyK(benchmark::State& state) {
    const auto g = random_velocity_density(model().velocities(), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_K(model(), g, mode(state)));
    }
}

}  // namespace

// Argument 0 = serial reference, 1 = parallel.
BENCHMARK(BM_BuildExtension)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Apply)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplySmallT)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DualStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplyK)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
