// Serial reference vs OpenMP versions of the heavier kernels.
#include "lhdl/entropy/entropy_table.hpp"
#include "lhdl/model/flux.hpp"
#include "lhdl/pde/solver.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>

using namespace lhdl;

static void BM_Solver(benchmark::State& st)
{
    const bool par = st.range(0) != 0;
    LimitFlux f(2.0);
    SolverOptions o;
    o.parallel = par;
    const int m = int(st.range(1));
    auto r0 = initial_field([](double x) { return 1.0 + 0.3 * std::sin(2 * M_PI * x); }, m, o.scheme, FieldKind::Rho);
    auto u0 = initial_field([](double x) { return 0.2 * std::cos(2 * M_PI * x); }, m, o.scheme, FieldKind::U);
    for (auto _ : st) {
        auto run = solve(f, r0, u0, 0.02, o);
        benchmark::DoNotOptimize(run.steps);
    }
    st.SetLabel(par ? "openmp" : "serial");
}
BENCHMARK(BM_Solver)->Args({0, 1024})->Args({1, 1024})->Args({0, 4096})->Args({1, 4096})->Unit(benchmark::kMillisecond);

static void BM_EntropyLattice(benchmark::State& st)
{
    const int threads = st.range(0) ? omp_get_max_threads() : 1;
    omp_set_num_threads(threads);
    auto f = make_flux("limit", 2.0);
    EntropyOptions o;
    o.grid = 64;
    for (auto _ : st) {
        auto t = build_entropy(f, 0.02, 0.02 * std::exp(4.0), 1, 0, o);
        benchmark::DoNotOptimize(t.rows.size());
    }
    st.SetLabel(std::to_string(threads) + " thread(s)");
}
BENCHMARK(BM_EntropyLattice)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
