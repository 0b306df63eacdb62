#include <benchmark/benchmark.h>

#include "slelab/loewner.hpp"
#include "slelab/sle.hpp"

using namespace slelab;

namespace {

loewner::driving_function brownian_driving(std::size_t steps)
{
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    return sle::sample_driving(p, 1.0 / static_cast<double>(steps), 1.0, 13,
                               0);
}

void SlitApply(benchmark::State& state)
{
    const slit_element e{0.3, 2e-4};
    cplx z{0.4, 1.1};
    for (auto _ : state) {
        z = slit_apply(z, e);
        benchmark::DoNotOptimize(z);
        z = {0.4, 1.1};
    }
}
BENCHMARK(SlitApply);

void PipelineJet(benchmark::State& state)
{
    const auto d = brownian_driving(static_cast<std::size_t>(state.range(0)));
    const auto s = loewner::evolve(d);
    for (auto _ : state) {
        const jet3 j = s.pipeline.jet_at(cplx{0.5, 2.0});
        benchmark::DoNotOptimize(j);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(PipelineJet)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void Evolve(benchmark::State& state)
{
    const auto d = brownian_driving(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto s = loewner::evolve(d);
        benchmark::DoNotOptimize(s.capacity);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(Evolve)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void Trace(benchmark::State& state)
{
    const auto d = brownian_driving(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto tips = loewner::trace(d);
        benchmark::DoNotOptimize(tips.back());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(Trace)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

void Unzip(benchmark::State& state)
{
    const auto d = brownian_driving(static_cast<std::size_t>(state.range(0)));
    const auto tips = loewner::trace(d);
    for (auto _ : state) {
        const auto r = loewner::unzip(tips);
        benchmark::DoNotOptimize(r.capacities.back());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(Unzip)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

} // namespace

BENCHMARK_MAIN();
