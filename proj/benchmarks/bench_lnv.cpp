#include <benchmark/benchmark.h>

#include "lnv/arith.hpp"
#include "lnv/characters.hpp"
#include "lnv/expsums.hpp"
#include "lnv/lmoments.hpp"
#include "lnv/specfun.hpp"

using namespace lnv;

static void bm_kloosterman_row(benchmark::State& state) {
    PrimeContext ctx(static_cast<std::uint64_t>(state.range(0)));
    std::int64_t y = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kloosterman_row(ctx, y));
        y = y % (ctx.p() - 1) + 1;
    }
}
BENCHMARK(bm_kloosterman_row)->Arg(199)->Arg(10007)->Arg(100003);

static void bm_kloosterman_direct(benchmark::State& state) {
    PrimeContext ctx(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kloosterman(ctx, 3, 5));
}
BENCHMARK(bm_kloosterman_direct)->Arg(199)->Arg(10007);

static void bm_four_product_sum(benchmark::State& state) {
    PrimeContext ctx(static_cast<std::uint64_t>(state.range(0)));
    KloostermanRowCache cache(ctx);
    for (auto _ : state) benchmark::DoNotOptimize(four_product_sum(cache, {1, 2, 3, 5}));
}
BENCHMARK(bm_four_product_sum)->Arg(199)->Arg(1009);

static void bm_family(benchmark::State& state, SumPath path) {
    const auto p = static_cast<std::uint32_t>(state.range(0));
    PrimeContext ctx(p);
    const auto params = MollifierParams::make(p, 0.2, 0.1, 0.6, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_family(ctx, params, {}, path));
}
BENCHMARK_CAPTURE(bm_family, dft, SumPath::Dft)->Arg(1009)->Arg(10007)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_family, naive, SumPath::Naive)->Arg(1009)->Unit(benchmark::kMillisecond);

static void bm_moments(benchmark::State& state) {
    const auto p = static_cast<std::uint32_t>(state.range(0));
    PrimeContext ctx(p);
    const auto params = MollifierParams::make(p, 0.2, 0.1, 0.6, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(compute_moments(ctx, params));
}
BENCHMARK(bm_moments)->Arg(1009)->Arg(10007)->Unit(benchmark::kMillisecond);

static void bm_weight_V_quadrature(benchmark::State& state) {
    const MellinQuadrature v(Kernel::V, {});
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(v(x));
        x = x < 10.0 ? x * 1.01 : 0.01;
    }
}
BENCHMARK(bm_weight_V_quadrature);

static void bm_weight_V_cache(benchmark::State& state) {
    const WeightVCache v(1e-6, 100.0);
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(v(x));
        x = x < 10.0 ? x * 1.01 : 0.01;
    }
}
BENCHMARK(bm_weight_V_cache);

static void bm_weight_W(benchmark::State& state) {
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(weight_W(x));
        x = x < 10.0 ? x * 1.01 : 0.01;
    }
}
BENCHMARK(bm_weight_W);

static void bm_gauss_sum_table(benchmark::State& state) {
    const auto p = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        PrimeContext ctx(p);
        benchmark::DoNotOptimize(gauss_sum_table(ctx).data());
    }
}
BENCHMARK(bm_gauss_sum_table)->Arg(10007)->Arg(100003)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
