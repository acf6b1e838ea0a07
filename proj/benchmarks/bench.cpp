// Microbenchmarks for the spectral pipeline hot spots.
#include <benchmark/benchmark.h>

#include "fractrace/dft.hpp"
#include "fractrace/field.hpp"
#include "fractrace/frac_calculus.hpp"
#include "fractrace/function_spaces.hpp"
#include "fractrace/ivp_solver.hpp"
#include "fractrace/mittag_leffler.hpp"

using namespace fractrace;

static void BM_DftRoundTrip(benchmark::State& state) {
    SpaceGrid g(1, 16.0, int(state.range(0)));
    std::vector<cd> f = preset_gaussian(g, 1.0);
    for (auto _ : state) {
        std::vector<cd> spec = dft_forward(f, g);
        std::vector<cd> back = dft_inverse(spec, g);
        benchmark::DoNotOptimize(back.data());
    }
}
BENCHMARK(BM_DftRoundTrip)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_MlSeries(benchmark::State& state) {
    MittagLefflerParams p;
    p.beta = 0.75;
    for (auto _ : state) benchmark::DoNotOptimize(ml_series(p, 2.0));
}
BENCHMARK(BM_MlSeries);

static void BM_MlIntegral(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(ml_integral_one_param(0.6, 40.0));
}
BENCHMARK(BM_MlIntegral);

static void BM_CaputoField(benchmark::State& state) {
    TimeGrid tg(1.0, int(state.range(0)), 2.0);
    SpaceGrid sg(1, 16.0, 128);
    SampledField u(tg, sg);
    std::vector<cd> u0 = preset_gaussian(sg, 1.0);
    for (size_t i = 0; i < u.num_slices(); ++i) {
        double t = tg.node(int(i));
        auto s = u.slice(i);
        for (size_t x = 0; x < s.size(); ++x) s[x] = u0[x] * std::exp(-t);
    }
    for (auto _ : state) {
        SampledField c = caputo_field(u, u0, 0.5, 1);
        benchmark::DoNotOptimize(c.values.data());
    }
}
BENCHMARK(BM_CaputoField)->Arg(128)->Arg(256);

static void BM_BesovNorm(benchmark::State& state) {
    SpaceGrid g(1, 16.0, int(state.range(0)));
    LPFamily fam = build_lp_family(g);
    std::vector<cd> f = preset_gaussian(g, 1.0);
    BesovParams bp;
    bp.s = 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(besov_norm(f, bp, fam));
}
BENCHMARK(BM_BesovNorm)->Arg(256)->Arg(1024);

static void BM_SolveSubdiffusion(benchmark::State& state) {
    IVPProblem prob;
    prob.order = FracOrder{0.75, 0};
    prob.tgrid = TimeGrid(1.0, int(state.range(0)), 2.0);
    prob.sgrid = SpaceGrid(1, 16.0, 256);
    prob.u0 = preset_gaussian(prob.sgrid, 1.0);
    for (auto _ : state) {
        SampledField U = solve_subdiffusion(prob, 1);
        benchmark::DoNotOptimize(U.values.data());
    }
}
BENCHMARK(BM_SolveSubdiffusion)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
