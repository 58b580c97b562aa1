#include <benchmark/benchmark.h>

#include "mvstrat/drones.hpp"
#include "mvstrat/mc2.hpp"
#include "mvstrat/mvmc.hpp"
#include "mvstrat/projection.hpp"

namespace {

using namespace mvstrat;

MvCGS drone_model(std::size_t drones, std::size_t energy) {
    DroneConfig cfg;
    cfg.drones = drones;
    cfg.energy = energy;
    return gen_drones(builtin_map("grid12"), cfg);
}

void BM_GenDrones(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const auto e = static_cast<std::size_t>(state.range(1));
    std::size_t states = 0;
    for (auto _ : state) {
        states = drone_model(k, e).num_states();
        benchmark::DoNotOptimize(states);
    }
    state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_GenDrones)->Args({1, 4})->Args({1, 8})->Args({2, 2})->Args({2, 3})->Unit(benchmark::kMillisecond);

void BM_Projection(benchmark::State& state) {
    const MvCGS m = drone_model(1, 8);
    const Element level = m.lattice().join_irreducibles()[0];
    for (auto _ : state) {
        benchmark::DoNotOptimize(project_threshold(m, level));
    }
}
BENCHMARK(BM_Projection)->Unit(benchmark::kMicrosecond);

// Translation over the first n join-irreducible levels.
void BM_TranslateLevels(benchmark::State& state) {
    const MvCGS m = drone_model(1, 8);
    const auto ji = m.lattice().join_irreducibles();
    const std::vector<Element> levels(ji.begin(), ji.begin() + state.range(0));
    const Formula f = phi1_right(1);
    CheckerConfig cfg;
    cfg.algorithm = Algorithm::translate;
    cfg.semantics = Semantics::ir_lower;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gmcheck_tr_levels(m, f, cfg, levels));
    }
}
BENCHMARK(BM_TranslateLevels)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

void BM_Semantics(benchmark::State& state) {
    const MvCGS m = drone_model(2, 2);
    const Formula f = phi2_right(2, "11");
    CheckerConfig cfg;
    cfg.algorithm = Algorithm::translate;
    cfg.semantics = static_cast<Semantics>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gmcheck_tr(m, f, cfg));
    }
}
BENCHMARK(BM_Semantics)
    ->Arg(static_cast<int>(Semantics::perfect))
    ->Arg(static_cast<int>(Semantics::ir_lower))
    ->Arg(static_cast<int>(Semantics::ir_upper))
    ->Unit(benchmark::kMillisecond);

void BM_Parallel(benchmark::State& state) {
    const MvCGS m = drone_model(1, 8);
    const Formula f = phi1_right(1);
    CheckerConfig cfg;
    cfg.algorithm = Algorithm::translate;
    cfg.semantics = Semantics::ir_lower;
    cfg.parallelism = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gmcheck_tr(m, f, cfg));
    }
}
BENCHMARK(BM_Parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
