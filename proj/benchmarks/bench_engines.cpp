#include <benchmark/benchmark.h>

#include "gather3d/analysis.hpp"
#include "gather3d/generators.hpp"
#include "gather3d/strategies.hpp"

using namespace gather3d;

static void BM_FsyncRound(benchmark::State& state) {
    const auto c = generators::random_connected(static_cast<int>(state.range(0)), 7, 0.2 * static_cast<double>(state.range(0)));
    const auto strat = strategies::gtc3d();
    for (auto _ : state) benchmark::DoNotOptimize(strategies::fsync_round(c, strat));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FsyncRound)->RangeMultiplier(2)->Range(8, 256)->Complexity();

static void BM_EulerStepGtcCont(benchmark::State& state) {
    const auto c = generators::random_connected(static_cast<int>(state.range(0)), 8, 0.2 * static_cast<double>(state.range(0)));
    const auto strat = strategies::gtc3d_cont();
    for (auto _ : state) benchmark::DoNotOptimize(strategies::euler_step(c, strat, 1e-3));
}
BENCHMARK(BM_EulerStepGtcCont)->RangeMultiplier(2)->Range(8, 256);

static void BM_EulerStepMoam(benchmark::State& state) {
    const auto c = generators::random_connected(static_cast<int>(state.range(0)), 9, 0.2 * static_cast<double>(state.range(0)));
    const auto strat = strategies::moam();
    for (auto _ : state) benchmark::DoNotOptimize(strategies::euler_step(c, strat, 1e-3));
}
BENCHMARK(BM_EulerStepMoam)->RangeMultiplier(2)->Range(8, 256);

static void BM_CircleGathering(benchmark::State& state) {
    const auto c = generators::circle_config(static_cast<int>(state.range(0)));
    const auto strat = strategies::gtc3d();
    for (auto _ : state)
        benchmark::DoNotOptimize(strategies::run_fsync(c, strat, 1000000, 1e-9, {false, 1}));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CircleGathering)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_ContractingCheck(benchmark::State& state) {
    const auto c = generators::random_connected(static_cast<int>(state.range(0)), 10, 0.2 * static_cast<double>(state.range(0)));
    const auto g = visibility_graph(c);
    std::vector<Vec3> v;
    for (RobotId i = 0; i < c.live(); ++i) v.push_back(strategies::gtc3d_cont_velocity(i, c, g));
    for (auto _ : state) benchmark::DoNotOptimize(analysis::contracting_check(c, v, 1e-6));
}
BENCHMARK(BM_ContractingCheck)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK_MAIN();
