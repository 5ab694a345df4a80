// Serial reference vs OpenMP kernels on the same inputs.
#include <benchmark/benchmark.h>

#include "pss/backlund/backlund.hpp"
#include "pss/core/linear.hpp"
#include "pss/families/families.hpp"
#include "pss/numerics/analysis.hpp"

using namespace pss;
using numerics::Exec;
using numerics::Grid;

namespace {

const core::SystemDocument& kdv() { return families::catalog_entry("coupled-kdv").doc; }

Grid grid(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    return Grid::over(0, 1, 0, 1, n, n);
}

Exec exec(benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

const backlund::BTParams kWave{1, 0, 1, -1, 0};

void BM_PdeResidual(benchmark::State& state) {
    const auto sol = backlund::bt_vacuum(kWave, grid(state));
    for (auto _ : state) benchmark::DoNotOptimize(numerics::pde_residual(kdv().system, sol, {}, exec(state)));
}

void BM_Curvature(benchmark::State& state) {
    const auto sol = backlund::bt_vacuum(kWave, grid(state));
    for (auto _ : state) {
        const auto m = numerics::metric_field(kdv().fij, sol, {{"eta", 1.5}}, exec(state));
        benchmark::DoNotOptimize(numerics::gaussian_curvature(m, numerics::kDegeneracyThreshold, exec(state)));
    }
}

void BM_Holonomy(benchmark::State& state) {
    const auto sol = backlund::bt_vacuum(kWave, grid(state));
    const auto lp = core::build_linear_problem(kdv().fij);
    for (auto _ : state) benchmark::DoNotOptimize(numerics::holonomy_defect(lp, sol, {{"eta", 1.5}}, exec(state)));
}

void BM_Pseudopotential(benchmark::State& state) {
    const Grid g = grid(state);
    const auto seed = numerics::SampledSolution::closed_form(g, jet::Expr(0L), jet::Expr(1L));
    backlund::IntegrationOptions opt;
    opt.exec = exec(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(backlund::integrate_pseudopotential(seed, backlund::BTParams{}, 0.5, -0.8, opt));
    }
}

void sizes(benchmark::internal::Benchmark* b) {
    for (int n : {65, 129, 257}) {
        for (int parallel : {0, 1}) b->Args({n, parallel});
    }
    b->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_PdeResidual)->Apply(sizes);
BENCHMARK(BM_Curvature)->Apply(sizes);
BENCHMARK(BM_Holonomy)->Apply(sizes);
BENCHMARK(BM_Pseudopotential)->Apply(sizes);

BENCHMARK_MAIN();
