#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "gll/dynamics.hpp"
#include "gll/fields.hpp"

using namespace gll;

namespace {

Scheme scheme_of(const benchmark::State& state) { return state.range(1) ? Scheme::Fd4 : Scheme::Spectral; }

void BM_Derivative(benchmark::State& state) {
    const PeriodicGrid g(static_cast<std::size_t>(state.range(0)));
    std::vector<double> f(g.n_points());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(std::sin(g.node(i)));
    const Scheme s = scheme_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(g.derivative(f, 3, s));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Derivative)->ArgsProduct({{64, 128, 256, 512}, {0, 1}});

void BM_Rhs(benchmark::State& state) {
    const auto u = random_smooth_field(PeriodicGrid(static_cast<std::size_t>(state.range(0))), 2, 1);
    FlowRhs rhs(u.grid(), 3, static_cast<FlowForm>(state.range(1)), PotentialMatrix::diagonal({1, 2, 3}), 1e-3);
    std::vector<double> du(u.data().size());
    for (auto _ : state) {
        rhs(u.data(), du);
        benchmark::DoNotOptimize(du.data());
    }
}
BENCHMARK(BM_Rhs)->ArgsProduct({{64, 128, 256},
                                {static_cast<int>(FlowForm::Extrinsic), static_cast<int>(FlowForm::Intrinsic),
                                 static_cast<int>(FlowForm::Regularized), static_cast<int>(FlowForm::ClassicalLL)}});

void BM_Rk4Step(benchmark::State& state) {
    const auto u0 = random_smooth_field(PeriodicGrid(static_cast<std::size_t>(state.range(0))), 2, 1);
    FlowRhs rhs(u0.grid(), 3, FlowForm::Intrinsic, PotentialMatrix::diagonal({1, 2, 3}));
    const RhsFn f = rhs.as_function();
    const double dt = stable_dt(u0.grid(), 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(step_rk4(u0, f, dt));
}
BENCHMARK(BM_Rk4Step)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
