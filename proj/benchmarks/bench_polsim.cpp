#include <benchmark/benchmark.h>

#include "polsim/polariton_spectrum.hpp"
#include "polsim/propagation.hpp"
#include "polsim/spinwave.hpp"
#include "polsim/susceptibility.hpp"

using namespace polsim;

namespace {

Medium gated(double d_b) { return make_medium(d_b, 10.0, 5.0, 1.0, 2.0, 20.0); }

}  // namespace

static void BM_Nu(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(nu(10.0, 5.0, 5.0).value);
}
BENCHMARK(BM_Nu);

static void BM_CwAnalytic(benchmark::State& state) {
    const Medium m = gated(5.0);
    for (auto _ : state) benchmark::DoNotOptimize(cw_analytic(m).scatter.T);
}
BENCHMARK(BM_CwAnalytic);

static void BM_SolveBvp(benchmark::State& state) {
    const Medium m = gated(static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_bvp(0.05, m).scatter.T);
}
BENCHMARK(BM_SolveBvp)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Spectrum(benchmark::State& state) {
    const Medium m = gated(1.0);
    const auto regime = state.range(0) ? Regime::blockaded : Regime::free;
    const std::vector<double> k = linspace(-2.0, 2.0, 101);
    for (auto _ : state) benchmark::DoNotOptimize(spectrum(k, regime, m).size());
}
BENCHMARK(BM_Spectrum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_EvolveCw(benchmark::State& state) {
    const Medium m = make_medium(5.0, 5.0, 2.5, 1.0, 2.0, 20.0);
    const SpinWaveDensityMatrix rho0 = initial_sine_mode(5.0, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(evolve_cw(rho0, m).rho(0, 0));
}
BENCHMARK(BM_EvolveCw)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
