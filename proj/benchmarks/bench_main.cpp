#include <benchmark/benchmark.h>

#include <random>

#include "fba/baxterflow.hpp"
#include "fba/quadrature.hpp"
#include "fba/thermo.hpp"

using namespace fba;

namespace {

qspecial::QParams params(double q) {
    qspecial::QParams p;
    p.q = q;
    p.s = 0.5;
    return p;
}

void BM_Sigma(benchmark::State& st) {
    const auto p = params(0.2);
    cplx v(0.4, 0.3);
    for (auto _ : st) benchmark::DoNotOptimize(qspecial::sigma(v, p));
}
BENCHMARK(BM_Sigma);

void BM_Pentagon(benchmark::State& st) {
    const auto p = params(0.2);
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> ph(-kPi, kPi), ra(0.2, 0.35), rb(0.1, 0.2);
    std::array<cplx, 3> a, b;
    do {
        a = {std::polar(ra(g), ph(g)), std::polar(ra(g), ph(g)), std::polar(ra(g), ph(g))};
        b = {std::polar(rb(g), ph(g)), std::polar(rb(g), ph(g)), {}};
        b[2] = p.q * p.q * a[0] * a[1] * a[2] / (b[0] * b[1]);
    } while (!quadrature::pentagon_annulus(a, b, p).feasible());
    const int nodes = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(quadrature::pentagon_check(a, b, p, {0.0, nodes}));
}
BENCHMARK(BM_Pentagon)->Arg(128)->Arg(512);

void BM_ChiPlus(benchmark::State& st) {
    const auto p = params(0.1);
    const auto T = baxterflow::tropical_transfer(static_cast<int>(st.range(0)), p.s);
    for (auto _ : st) benchmark::DoNotOptimize(baxterflow::chi_plus_eval(cplx(0.7, 0.4), T, p));
}
BENCHMARK(BM_ChiPlus)->Arg(2)->Arg(4);

void BM_SolveGround(benchmark::State& st) {
    const auto p = params(0.1);
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(baxterflow::solve_ground(n, p));
}
BENCHMARK(BM_SolveGround)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_PartitionIntegral(benchmark::State& st) {
    const auto dm = thermo::DensityModel::make(0.5, -0.1, 1e-15);
    for (auto _ : st) benchmark::DoNotOptimize(thermo::partition_integral(std::polar(1.0, 0.3), dm, 1024));
}
BENCHMARK(BM_PartitionIntegral)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
