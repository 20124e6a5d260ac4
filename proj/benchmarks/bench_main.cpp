#include "queuetail/bounds_mmn.hpp"
#include "queuetail/exact.hpp"
#include "queuetail/sim.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace queuetail;

static void BM_SimulateJsq(benchmark::State& state) {
    const JsqSystem sys(static_cast<int>(state.range(0)), 1.0, 0.05);
    SimConfig cfg;
    cfg.seed = 7;
    cfg.horizon_events = 2'000'000;
    cfg.threads = 1;
    cfg.tail_grid = {1.0, 2.0};
    cfg.theta_grid = {0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_jsq(sys, cfg));
    }
    state.SetItemsProcessed(state.iterations() * cfg.horizon_events);
}
BENCHMARK(BM_SimulateJsq)->Arg(1)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_SimulateSsq(benchmark::State& state) {
    const SsqSystem sys(BoundedPmf({0, 1}, {0.6, 0.4}), BoundedPmf({0, 1}, {0.5, 0.5}));
    SimConfig cfg;
    cfg.seed = 7;
    cfg.horizon_events = 2'000'000;
    cfg.threads = 1;
    cfg.tail_grid = {1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_ssq(sys, cfg));
    }
    state.SetItemsProcessed(state.iterations() * cfg.horizon_events);
}
BENCHMARK(BM_SimulateSsq)->Unit(benchmark::kMillisecond);

static void BM_GnLogIntegral(benchmark::State& state) {
    const MmnSystem sys(state.range(0), 1.0, 1.0 / std::sqrt(static_cast<double>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mmn::gn_log_integral(sys, 0.0));
    }
}
BENCHMARK(BM_GnLogIntegral)->Arg(10)->Arg(10'000)->Arg(1'000'000);

static void BM_MmnStationary(benchmark::State& state) {
    const MmnSystem sys(state.range(0), 1.0, 1.0 / std::sqrt(static_cast<double>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact::mmn_stationary(sys));
    }
}
BENCHMARK(BM_MmnStationary)->Arg(100)->Arg(10'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static void BM_SsqStationary(benchmark::State& state) {
    const SsqSystem sys(BoundedPmf({0, 1}, {0.6, 0.4}), BoundedPmf({0, 1}, {0.5, 0.5}));
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact::ssq_stationary(sys));
    }
}
BENCHMARK(BM_SsqStationary)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
