// Serial reference against the OpenMP path for the two parallel workloads:
// independent simulations of a sweep, and DE population evaluation.

#include "neuristor/analysis.hpp"
#include "neuristor/fit.hpp"
#include "neuristor/scenarios.hpp"

#include <benchmark/benchmark.h>

using namespace neuristor;

namespace {

Execution mode(const benchmark::State& state)
{
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state)
{
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_RateSweep(benchmark::State& state)
{
    SimulationSettings s;
    s.horizon = 20e-6;
    s.execution = mode(state);
    const auto device = paper_fit_device(12e3);
    for (auto _ : state) {
        auto curve = rate_coding_sweep(device, DetectionSettings{}, 325.0, 9.0, 16.0, 0.5, s);
        benchmark::DoNotOptimize(curve);
    }
    label(state);
}
BENCHMARK(BM_RateSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DriveMap(benchmark::State& state)
{
    const auto pair = scenarios::paper_pair(0.1);
    SimulationSettings s;
    s.horizon = 40e-6;
    s.execution = mode(state);
    for (auto _ : state) {
        auto points = drive_response_map(pair.network, pair.detection, 9.4, 9.0, 16.0, 1.0, 0.1, s);
        benchmark::DoNotOptimize(points);
    }
    label(state);
}
BENCHMARK(BM_DriveMap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HysteresisFit(benchmark::State& state)
{
    const auto data = simulate_rt(paper_fit_2023(), standard_rt_protocol());
    FitOptions o;
    o.max_generations = 30;
    o.execution = mode(state);
    for (auto _ : state) {
        auto fit = fit_hysteresis(data, o);
        benchmark::DoNotOptimize(fit);
    }
    label(state);
}
BENCHMARK(BM_HysteresisFit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DeviceFitGeneration(benchmark::State& state)
{
    const auto device = paper_fit_device(12e3);
    const DeviceDrive drive;
    const auto target = simulate_features(device, drive);
    FitOptions o;
    o.max_generations = 1;
    o.population = 16;
    o.execution = mode(state);
    for (auto _ : state) {
        auto fit = fit_device(target, device.hysteresis, drive, o);
        benchmark::DoNotOptimize(fit);
    }
    label(state);
}
BENCHMARK(BM_DeviceFitGeneration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
