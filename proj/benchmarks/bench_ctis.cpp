#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "ctis/em_solver.hpp"
#include "ctis/optics.hpp"
#include "ctis/scene.hpp"
#include "ctis/system_matrix.hpp"

namespace {

using namespace ctis;

// Arguments: cube side, band count.
ShiftGeometry geometry(const benchmark::State& state) {
    return ShiftGeometry::with_default_shifts(static_cast<std::size_t>(state.range(0)),
                                              static_cast<std::size_t>(state.range(1)));
}

HyperCube scene(const ShiftGeometry& g) {
    SceneSpec spec;
    spec.seed = 1;
    spec.rows = spec.cols = g.cube_side();
    spec.bands = g.bands();
    return generate_scene(spec);
}

void sides(benchmark::internal::Benchmark* b) {
    b->Args({32, 5})->Args({100, 5})->Args({100, 25})->Unit(benchmark::kMillisecond);
}

void BM_Build(benchmark::State& state) {
    const auto g = geometry(state);
    for (auto _ : state) benchmark::DoNotOptimize(SparseSystemMatrix::build(g));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.cube_side() * g.cube_side() * g.bands()));
}
BENCHMARK(BM_Build)->Apply(sides);

void BM_Simulate(benchmark::State& state) {
    const auto g = geometry(state);
    const auto cube = scene(g);
    for (auto _ : state) benchmark::DoNotOptimize(simulate(cube, g));
}
BENCHMARK(BM_Simulate)->Apply(sides);

void BM_Matvec(benchmark::State& state) {
    const auto g = geometry(state);
    const auto H = SparseSystemMatrix::build(g);
    const auto f = scene(g).vectorize();
    std::vector<double> out(H.rows());
    for (auto _ : state) {
        H.matvec(f, out);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(H.nonzeros()));
}
BENCHMARK(BM_Matvec)->Apply(sides);

void BM_Rmatvec(benchmark::State& state) {
    const auto g = geometry(state);
    const auto H = SparseSystemMatrix::build(g);
    const auto v = H.matvec(scene(g).vectorize());
    std::vector<double> out(H.cols());
    for (auto _ : state) {
        H.rmatvec(v, out);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(H.nonzeros()));
}
BENCHMARK(BM_Rmatvec)->Apply(sides);

void BM_EmStep(benchmark::State& state) {
    const auto g = geometry(state);
    const auto H = SparseSystemMatrix::build(g);
    const auto gdet = H.matvec(scene(g).vectorize());
    const auto f = H.rmatvec(gdet);
    for (auto _ : state) benchmark::DoNotOptimize(em_step(H, gdet, f));
}
BENCHMARK(BM_EmStep)->Apply(sides);

// Twenty-iteration reconstruction, the default configuration.
void BM_Reconstruct20(benchmark::State& state) {
    const auto g = geometry(state);
    const auto H = SparseSystemMatrix::build(g);
    const auto image = simulate(scene(g), g);
    EmConfig cfg;
    cfg.record_loglik = false;
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct(H, image, cfg));
}
BENCHMARK(BM_Reconstruct20)->Apply(sides);

}  // namespace
BENCHMARK_MAIN();
