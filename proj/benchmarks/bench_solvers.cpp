#include <benchmark/benchmark.h>

#include <numbers>

#include "slelab/annulus.hpp"
#include "slelab/liouville.hpp"

using namespace slelab;

namespace {

void AnnulusSolve(benchmark::State& state)
{
    annulus::annular_domain dom;
    for (int k = 0; k < 256; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 256;
        dom.outer.emplace_back(std::cos(th), std::sin(th));
        dom.inner.emplace_back(0.5 * std::cos(th), 0.5 * std::sin(th));
    }
    for (auto _ : state) {
        const auto sol =
            annulus::solve(dom, static_cast<std::size_t>(state.range(0)));
        benchmark::DoNotOptimize(sol.modulus);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(AnnulusSolve)->RangeMultiplier(2)->Range(48, 192)->Complexity()
    ->Unit(benchmark::kMillisecond);

void LiouvilleActionGrid(benchmark::State& state)
{
    using namespace liouville;
    const conformal_metric g1 =
        metric_add_bump(metric_flat(1.0), cplx{0.2, 0.1}, 0.7, 0.5);
    const conformal_metric g2 =
        metric_add_bump(metric_flat(1.0), cplx{-0.3, 0.2}, 0.6, -0.4);
    const auto n = static_cast<std::size_t>(state.range(0));
    const grid_spec grid{-2.0, 2.0, -2.0, 2.0, n, n};
    for (auto _ : state) {
        benchmark::DoNotOptimize(liouville_action(g1, g2, grid));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(LiouvilleActionGrid)->RangeMultiplier(2)->Range(128, 512)
    ->Complexity()->Unit(benchmark::kMillisecond);

} // namespace
