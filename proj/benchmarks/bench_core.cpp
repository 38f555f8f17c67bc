#include <random>

#include <benchmark/benchmark.h>

#include "hgrn/evolve.hpp"
#include "hgrn/pdmp.hpp"
#include "hgrn/transport.hpp"

using namespace hgrn;

namespace {

std::vector<double> random_cells(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v)
        x = U(rng);
    return v;
}

void BM_ApplyT1(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const ScalarField f(random_cells(n, 1));
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_T1(0.37, f));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyT1)->RangeMultiplier(4)->Range(64, 4096);

void BM_StrangStep(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const CanonicalModel m;
    const auto field = SwitchingMatrixField::from_model(m, n);
    GridDensity u{random_cells(n, 2), random_cells(n, 3)};
    for (auto _ : state)
    {
        step_inplace(m, field, 2, 1e-3, u);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(4)->Range(64, 4096);

void BM_AssembleResolvent(benchmark::State& state)
{
    LaplaceQuadConfig q;
    q.n = static_cast<std::size_t>(state.range(0));
    q.dt = 1e-2;
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_resolvent(CanonicalModel{}, 5.0, q));
}
BENCHMARK(BM_AssembleResolvent)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state)
{
    const auto N = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate(CanonicalModel{}, InitialDistribution::uniform(1), N, 2.0, 9));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
