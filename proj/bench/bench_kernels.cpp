#include <benchmark/benchmark.h>

#include <vector>

#include "biosim/agents.hpp"
#include "biosim/kernels.hpp"

using namespace biosim;

namespace {

Field outbreak(int n) {
    Field f(Mask(n, n, 1));
    Rng rng(1);
    for (auto& rec : f.cells.values()) {
        if (uniform01(rng) < 0.15) {
            rec.state = HealthState::Infected;
            rec.days_infected = 1;
            rec.onset_stage = 1;
        }
    }
    return f;
}

template <auto Kernel>
void pressure(benchmark::State& state) {
    const Field f = outbreak(static_cast<int>(state.range(0)));
    std::vector<double> out(f.cells.size());
    for (auto _ : state) {
        Kernel(f, SpreadParams{}, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

void traces(benchmark::State& state, Backend backend) {
    const EnvConfig cfg;
    for (auto _ : state) {
        auto t = collect_traces(ReactivePolicy(1, 3), cfg, static_cast<int>(state.range(0)), 5, backend);
        benchmark::DoNotOptimize(t.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(pressure<kernels::infection_pressure_serial>)->Name("pressure/serial")->Arg(10)->Arg(64)->Arg(256);
BENCHMARK(pressure<kernels::infection_pressure_omp>)->Name("pressure/openmp")->Arg(10)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(traces, serial, Backend::Serial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(traces, openmp, Backend::OpenMP)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
