#include <benchmark/benchmark.h>

#include "biphoton/analysis.hpp"
#include "biphoton/detection.hpp"
#include "biphoton/optics.hpp"
#include "biphoton/scans.hpp"

#include <cmath>
#include <vector>

namespace {

biphoton::OpticalSetup reference_setup() {
    biphoton::OpticalSetup setup;
    setup.wavelength = 814e-9;
    setup.focal_length = 60e-3;
    setup.mode_separation = 72e-6;
    setup.mode_radius = 4.3e-6;
    setup.slit_width = 62.5e-6;
    return setup;
}

void FarFieldAnalytic(benchmark::State& state) {
    const auto setup = reference_setup();
    const auto noon0 = biphoton::noon(0.0);
    const auto derived = biphoton::derive(setup);
    double x = 0.0;
    for (auto _ : state) {
        x += derived.sigma * 1e-3;
        benchmark::DoNotOptimize(
            biphoton::far_field_analytic(noon0, {x, 0.0}, {x, 0.0}, setup));
    }
}
BENCHMARK(FarFieldAnalytic);

void FarFieldNumeric(benchmark::State& state) {
    const auto setup = reference_setup();
    const auto noon0 = biphoton::noon(0.0);
    const auto derived = biphoton::derive(setup);
    const biphoton::QuadratureSpec quad{8.0 * setup.mode_radius,
                                        static_cast<int>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(biphoton::far_field_numeric(
            noon0, {derived.sigma, 0.0}, {-derived.sigma / 2.0, 0.0}, setup, quad));
    }
}
BENCHMARK(FarFieldNumeric)->Arg(128)->Arg(512)->Arg(2048);

void SlitRate(benchmark::State& state) {
    const auto setup = reference_setup();
    const auto noon0 = biphoton::noon(0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(biphoton::rate_slit(
            noon0, {0.0, 0.0, setup.slit_width}, setup, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(SlitRate)->Arg(16)->Arg(64)->Arg(256);

void FringeFit(benchmark::State& state) {
    const auto setup = reference_setup();
    biphoton::ScanSpec spec;
    spec.kind = biphoton::ScanKind::same_direction;
    spec.start = -1.5e-3;
    spec.stop = 1.5e-3;
    spec.points = static_cast<int>(state.range(0));
    spec.alpha = 3.14159265358979 / 8.0;
    const auto scan = biphoton::run_scan(spec, setup);
    std::vector<biphoton::FitSample> samples;
    for (const auto& s : scan.samples) samples.push_back({s.parameter, s.ideal_rate, {}});
    for (auto _ : state) {
        benchmark::DoNotOptimize(biphoton::fit_fringe(samples));
    }
}
BENCHMARK(FringeFit)->Arg(101)->Arg(401);

}  // namespace

BENCHMARK_MAIN();
