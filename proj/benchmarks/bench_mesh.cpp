#include <benchmark/benchmark.h>

#include "omegadim/dimension.hpp"
#include "omegadim/metrics.hpp"

using namespace omegadim;

namespace {

const SpectrumPlan& strict_plan() {
    static SpectrumPlan plan = plan_spectrum(ModulusSpec::parse("holder:1/2"), BigRat(1, 4),
                                             BigRat(1, 2), BigRat(1, 10), 3,
                                             PlanMode::strict);
    return plan;
}

const LazyPLF& strict_function() {
    static LazyPLF f = build_spectrum(strict_plan());
    return f;
}

LazyPLF toy_sawtooth() {
    return LazyPLF({SawtoothBlock{BigRat(0), BigRat(1), BigRat(1, 9999), BigInt(9999),
                                  BigRat(0), BigRat(-1, 10)}});
}

}  // namespace

// Closed-form stage count over ~1.8e8 teeth: independent of the tooth count.
static void BM_AnalyticStageCount(benchmark::State& state) {
    const auto& plan = strict_plan();
    const auto& f = strict_function();
    Window w = spectrum_stage_window(plan, 1);
    for (auto _ : state) {
        auto rec = mesh_count(f, w, plan.stages[0].tooth_width);
        benchmark::DoNotOptimize(rec.count);
    }
}
BENCHMARK(BM_AnalyticStageCount);

// Whole-domain analytic count across mismatched stage scales.
static void BM_AnalyticWholeDomain(benchmark::State& state) {
    const auto& plan = strict_plan();
    const auto& f = strict_function();
    for (auto _ : state) {
        auto rec = mesh_count(f, Window::whole_domain(), plan.stages[2].tooth_width);
        benchmark::DoNotOptimize(rec.count);
    }
}
BENCHMARK(BM_AnalyticWholeDomain);

// Column-by-column brute force on a 10^4-tooth toy (the oracle's workload).
static void BM_BruteToyCount(benchmark::State& state) {
    LazyPLF f = toy_sawtooth();
    for (auto _ : state) {
        auto rec = mesh_count(f, Window::whole_domain(), BigRat(1, 9999), CountMethod::brute);
        benchmark::DoNotOptimize(rec.count);
    }
}
BENCHMARK(BM_BruteToyCount);

static void BM_EvalDeepStage(benchmark::State& state) {
    const auto& plan = strict_plan();
    const auto& f = strict_function();
    BigRat x = plan.stages[2].center + plan.stages[2].tooth_width / 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.eval(x));
    }
}
BENCHMARK(BM_EvalDeepStage);

static void BM_SeminormGrid(benchmark::State& state) {
    const auto& f = strict_function();
    ModulusSpec m = ModulusSpec::parse("holder:1/2");
    for (auto _ : state) {
        auto est = seminorm_omega(f, m, PairMethod::grid, 7, (int)state.range(0));
        benchmark::DoNotOptimize(est.value);
    }
}
BENCHMARK(BM_SeminormGrid)->Arg(6)->Arg(8);

BENCHMARK_MAIN();
