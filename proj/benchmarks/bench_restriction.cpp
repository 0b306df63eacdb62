#include <benchmark/benchmark.h>

#include "slelab/restriction.hpp"

using namespace slelab;
using namespace slelab::restriction;

namespace {

void FrameFromHullImage(benchmark::State& state)
{
    const alpha_map a = mapping_out(half_disk{2.0, 1.0});
    const auto arc = a.boundary_arc(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const restriction_frame f = frame_from_hull_image(arc, 0.0, 0.0);
        benchmark::DoNotOptimize(f.H);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(FrameFromHullImage)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void AvoidancePath(benchmark::State& state)
{
    const auto p = sle::params_from_kappa(8.0 / 3.0);
    avoidance_config cfg;
    cfg.n_paths = 8;
    cfg.dt = 2e-4;
    cfg.threads = 1;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        cfg.seed = seed++;
        const auto res = avoidance_mc(p, half_disk{2.0, 1.0}, cfg);
        benchmark::DoNotOptimize(res.p_hat);
    }
}
BENCHMARK(AvoidancePath)->Unit(benchmark::kMillisecond);

} // namespace
