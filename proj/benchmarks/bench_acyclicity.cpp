#include <benchmark/benchmark.h>

#include "dagsl/acyclicity.hpp"
#include "dagsl/graph.hpp"

using namespace dagsl;

namespace {

Matrix cyclic_instance(int d, uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Matrix w = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) w(i, j) = u(rng) / d;
    return w;
}

}  // namespace

static void BM_HExpm(benchmark::State& state) {
    const Matrix w = cyclic_instance(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(h_expm(w));
}
BENCHMARK(BM_HExpm)->Arg(50)->Arg(100)->Arg(200);

static void BM_HPoly(benchmark::State& state) {
    const Matrix w = cyclic_instance(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(h_poly(w));
}
BENCHMARK(BM_HPoly)->Arg(50)->Arg(100)->Arg(200);

static void BM_HLdet(benchmark::State& state) {
    const Matrix w = cyclic_instance(static_cast<int>(state.range(0)), 3);
    const double s = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(h_ldet(w, s));
}
BENCHMARK(BM_HLdet)->Arg(50)->Arg(100)->Arg(200);

static void BM_SpectralRadius(benchmark::State& state) {
    const Matrix w = cyclic_instance(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_radius(w));
}
BENCHMARK(BM_SpectralRadius)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
