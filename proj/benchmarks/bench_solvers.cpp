#include <benchmark/benchmark.h>

#include "dagsl/colide.hpp"
#include "dagsl/graph.hpp"
#include "dagsl/nomad.hpp"

using namespace dagsl;

namespace {

Dataset instance(int d, long n, uint64_t seed) {
    Rng rng(seed);
    auto g = random_er_dag(d, 4.0, rng);
    Matrix w = assign_weights(g, 0.5, 2.0, WeightSign::mixed, rng);
    return sample_linear_sem(
        w, NoiseSpec::equal_variance(NoiseFamily::gaussian, 1.0, d), n, rng);
}

}  // namespace

// One short central-path stage; isolates the per-iteration cost.
static void BM_ColideStage(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const Dataset data = instance(d, 1000, 7);
    SolverConfig cfg;
    cfg.obj_stop = false;
    const Schedule one{{1.0, 1.0, 200}};
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_colide(data, Variant::ev, 0.02, one, cfg));
    state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_ColideStage)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_NomadFit(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    Rng rng(11);
    auto g = random_er_dag(d, 4.0, rng);
    Matrix w = assign_weights(g, 0.25, 1.0, WeightSign::nonneg, rng);
    auto data = sample_linear_sem(
        w, NoiseSpec::equal_variance(NoiseFamily::gaussian, 1.0, d), 1000, rng);
    MomConfig mom;
    mom.outer_max = 10;
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_nomad(data, 0.01, 1.1, mom, 0.1));
}
BENCHMARK(BM_NomadFit)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_SampleCov(benchmark::State& state) {
    const Dataset data = instance(50, state.range(0), 3);
    for (auto _ : state) benchmark::DoNotOptimize(sample_cov(data.X));
}
BENCHMARK(BM_SampleCov)->Arg(1000)->Arg(10000);
