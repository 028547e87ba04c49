#include <benchmark/benchmark.h>

#include <vector>

#include "secmodels/calibration.hpp"
#include "secmodels/montecarlo.hpp"
#include "secmodels/patchrace.hpp"
#include "secmodels/phishing.hpp"

using namespace secmodels;

static void BM_DelayTableBuild(benchmark::State& state) {
    auto s = patchrace::default_scenario();
    s.grid = numerics::Grid(0.0, 730.0, 1.0 / static_cast<double>(state.range(0)));
    for (auto _ : state) {
        patchrace::PatchDelayTable table(s);
        benchmark::DoNotOptimize(table.patched_fraction(365.0));
    }
    state.SetLabel("step=1/" + std::to_string(state.range(0)));
}
BENCHMARK(BM_DelayTableBuild)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_RaceSweep(benchmark::State& state) {
    const auto s = patchrace::default_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(patchrace::race_sweep(s));
    }
}
BENCHMARK(BM_RaceSweep)->Unit(benchmark::kMillisecond);

static void BM_WeibullFit(benchmark::State& state) {
    const auto samples = calibration::reference_patch_dev_samples();
    for (auto _ : state) {
        benchmark::DoNotOptimize(calibration::fit_weibull_cdf(samples));
    }
}
BENCHMARK(BM_WeibullFit)->Unit(benchmark::kMillisecond);

static void BM_OptimalCampaign(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(phishing::optimal_campaign(phishing::baseline(), 1000));
    }
}
BENCHMARK(BM_OptimalCampaign);

static void BM_SimulatePhishing(benchmark::State& state) {
    montecarlo::SimConfig cfg;
    cfg.trials = 100000;
    cfg.workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(montecarlo::simulate_phishing(phishing::baseline(), 26, cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}
BENCHMARK(BM_SimulatePhishing)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
