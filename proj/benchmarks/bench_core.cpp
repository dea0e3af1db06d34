#include "vibrobeam/band.hpp"
#include "vibrobeam/bdf.hpp"
#include "vibrobeam/beam_fem.hpp"
#include "vibrobeam/modal.hpp"
#include "vibrobeam/newmark.hpp"
#include "vibrobeam/sweep.hpp"

#include <benchmark/benchmark.h>

using namespace vibrobeam;

namespace {

BeamProperties beam(int n) {
    BeamProperties p;
    p.n_elements = n;
    return p;
}

} // namespace

static void BM_Assemble(benchmark::State& state) {
    const BeamProperties p = beam(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble(p));
    }
}
BENCHMARK(BM_Assemble)->Arg(10)->Arg(40)->Arg(160);

static void BM_BandMultiply(benchmark::State& state) {
    const AssembledModel m = assemble(beam(static_cast<int>(state.range(0))));
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(m.dof_count(), -1.0, 1.0);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m.dof_count());
    for (auto _ : state) {
        m.stiffness_band().multiply_add(x, y);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_BandMultiply)->Arg(10)->Arg(40)->Arg(160);

static void BM_BandCholeskySolve(benchmark::State& state) {
    const AssembledModel m = assemble(beam(static_cast<int>(state.range(0))));
    BandCholesky chol;
    chol.compute(m.stiffness_band());
    Eigen::VectorXd x = Eigen::VectorXd::Ones(m.dof_count());
    for (auto _ : state) {
        chol.solve_in_place(x);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_BandCholeskySolve)->Arg(10)->Arg(40)->Arg(160);

static void BM_Eigenfrequencies(benchmark::State& state) {
    const AssembledModel m = assemble(beam(static_cast<int>(state.range(0))));
    UnilateralSpring s;
    s.mode = SpringMode::bilateral;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fem_eigenfrequencies(m, s, 3));
    }
}
BENCHMARK(BM_Eigenfrequencies)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

// One drive period of the unilateral beam.
static void BM_BdfPeriod(benchmark::State& state) {
    const AssembledModel m = assemble(beam(static_cast<int>(state.range(0))));
    const BaseExcitation exc = BaseExcitation::from_hz(50.0, 300.0);
    const BeamDynamics dyn(m, UnilateralSpring{}, exc);
    SolverOptions opts;
    opts.dt_out = SolverOptions::default_dt_out(exc.omega);
    const State rest = State::at_rest(m.dof_count());
    long steps = 0;
    for (auto _ : state) {
        const TimeSeries s = integrate_bdf(dyn, 0.0, 1.0 / 300.0, rest, opts);
        steps += s.stats.steps;
    }
    state.counters["steps"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_BdfPeriod)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_NewmarkPeriod(benchmark::State& state) {
    const AssembledModel m = assemble(beam(10));
    const BaseExcitation exc = BaseExcitation::from_hz(50.0, 300.0);
    const BeamDynamics dyn(m, UnilateralSpring{}, exc);
    const State rest = State::at_rest(m.dof_count());
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_reference(dyn, 0.0, 1.0 / 300.0, rest, 1e-6));
    }
}
BENCHMARK(BM_NewmarkPeriod)->Unit(benchmark::kMillisecond);

static void BM_SweepPoint(benchmark::State& state) {
    const AssembledModel m = assemble(beam(10));
    UnilateralSpring s;
    s.mode = state.range(0) == 0 ? SpringMode::bilateral : SpringMode::unilateral;
    SweepConfig cfg;
    cfg.tf = 0.05;
    const SweepOptions opts;
    const State rest = State::at_rest(m.dof_count());
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep_point(m, s, 50.0, 300.0, cfg, opts, rest));
    }
}
BENCHMARK(BM_SweepPoint)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
