#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include <cnsf/boxspline.hpp>
#include <cnsf/footprint.hpp>

using namespace cnsf;

namespace {

void box_spline(benchmark::State &state) {
    const std::vector<double> raw{1.0, 0.7, 0.3};
    const DirectionSet d = canonicalize(std::vector<double>(raw.begin(), raw.begin() + state.range(0)));
    double x = -1.0, acc = 0.0;
    for (auto _ : state) {
        acc += eval_centered(d, x);
        x = x > 1.0 ? -1.0 : x + 1e-3;
    }
    benchmark::DoNotOptimize(acc);
}

template <class F>
void sweep(benchmark::State &state, F footprint) {
    const FanBeamGeometry g = FanBeamGeometry::uniform(200, 200, 1001, 0.5, 0.5, 1);
    const ViewFrame f = view_frame(g, 0.3);
    double acc = 0.0;
    for (auto _ : state)
        for (double s = -2.0; s <= 2.0; s += 0.05)
            acc += footprint(f, g, s);
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations() * 81);
}

void closed_form(benchmark::State &state) {
    sweep(state, [](const ViewFrame &f, const FanBeamGeometry &g, double s) {
        return cnsf_footprint_blurred(f, g, {0.5, 0.5}, 1.0, s);
    });
}

void reference(benchmark::State &state) {
    sweep(state, [](const ViewFrame &f, const FanBeamGeometry &g, double s) {
        return reference_bin_integral(f, g, {0.5, 0.5}, 1.0, s);
    });
}

void area_model(benchmark::State &state) {
    sweep(state, [](const ViewFrame &f, const FanBeamGeometry &g, double s) {
        return area_bin_value(f, g, {0.5, 0.5}, 1.0, s);
    });
}

} // namespace

BENCHMARK(box_spline)->DenseRange(1, 3);
BENCHMARK(closed_form);
BENCHMARK(reference);
BENCHMARK(area_model);
