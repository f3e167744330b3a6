#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gather3d/analysis.hpp"
#include "gather3d/generators.hpp"
#include "gather3d/geometry.hpp"
#include "gather3d/strategies.hpp"

using namespace gather3d;

namespace {

std::vector<Vec3> cloud(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Vec3> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({g(rng), g(rng), g(rng)});
    return pts;
}

}  // namespace

static void BM_SmallestEnclosingSphere(benchmark::State& state) {
    const auto pts = cloud(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(smallest_enclosing_sphere(pts));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SmallestEnclosingSphere)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

static void BM_ConvexHull(benchmark::State& state) {
    const auto pts = cloud(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvexHull)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

static void BM_ConvexHullCoplanar(benchmark::State& state) {
    auto pts = cloud(static_cast<std::size_t>(state.range(0)), 3);
    for (auto& p : pts) p.z = 0.0;
    for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
}
BENCHMARK(BM_ConvexHullCoplanar)->Arg(16)->Arg(256);

static void BM_AngleMinimizer(benchmark::State& state) {
    auto pts = cloud(static_cast<std::size_t>(state.range(0)), 4);
    for (auto& p : pts) p.z = std::abs(p.z) + 0.1;
    for (auto _ : state) benchmark::DoNotOptimize(strategies::angle_minimizer(pts));
}
BENCHMARK(BM_AngleMinimizer)->Arg(3)->Arg(8)->Arg(24);

static void BM_BigL(benchmark::State& state) {
    const auto c = generators::random_connected(32, 5, 3.0);
    const auto quad = analysis::Quadrature::hemisphere(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(analysis::big_L(c, quad));
}
BENCHMARK(BM_BigL)->Arg(64)->Arg(256)->Arg(1024);
