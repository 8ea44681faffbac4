#include <benchmark/benchmark.h>

#include <cnsf/phantom.hpp>
#include <cnsf/projector.hpp>

using namespace cnsf;

namespace {

// Same size pairing as `cnsf bench`, with fewer views to keep runs short.
FanBeamGeometry geometry_for(int n) {
    const double d = 100.0 * n / 64.0;
    const int n_s = 2 * int(1.6 * n + 0.5) + 1;
    return FanBeamGeometry::uniform(d, d, n_s, 1.0, 1.0, 90);
}

void fp(benchmark::State &state, Model model) {
    const int n = int(state.range(0));
    const FanBeamGeometry g = geometry_for(n);
    const Projector proj(g, n, 1.0, model);
    const ImageGrid img = shepp_logan(n, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(proj.forward(img));
    state.counters["pixel_views/s"] =
        benchmark::Counter(double(n) * n * g.n_views(), benchmark::Counter::kIsIterationInvariantRate);
}

void bp(benchmark::State &state, Model model) {
    const int n = int(state.range(0));
    const FanBeamGeometry g = geometry_for(n);
    const Projector proj(g, n, 1.0, model);
    const Sinogram y = proj.forward(shepp_logan(n, 1.0));
    for (auto _ : state)
        benchmark::DoNotOptimize(proj.back(y));
    state.counters["pixel_views/s"] =
        benchmark::Counter(double(n) * n * g.n_views(), benchmark::Counter::kIsIterationInvariantRate);
}

void precomputed_fp(benchmark::State &state) {
    const int n = int(state.range(0));
    const PrecomputedProjector pre(Projector(geometry_for(n), n, 1.0, Model::cnsf));
    const ImageGrid img = shepp_logan(n, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(pre.forward(img));
}

} // namespace

BENCHMARK_CAPTURE(fp, cnsf, Model::cnsf)->RangeMultiplier(2)->Range(64, 256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(fp, area, Model::area)->RangeMultiplier(2)->Range(64, 256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(fp, parallel, Model::parallel)->RangeMultiplier(2)->Range(64, 256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(fp, ref, Model::reference)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bp, cnsf, Model::cnsf)->RangeMultiplier(2)->Range(64, 256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bp, area, Model::area)->RangeMultiplier(2)->Range(64, 256)->Unit(benchmark::kMillisecond);
BENCHMARK(precomputed_fp)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
