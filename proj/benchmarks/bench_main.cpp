#include <benchmark/benchmark.h>

#include <cmath>
#include <string>

#include "gpot/dirichlet.hpp"
#include "gpot/ends.hpp"
#include "gpot/greens.hpp"
#include "gpot/montecarlo.hpp"
#include "gpot/potential.hpp"
#include "gpot/schwarz.hpp"

using namespace gpot;

namespace {

BoundaryData half_plane_indicator() {
    BoundaryData d;
    d.vertex_values.emplace("0,0", 1.0);
    d.end_values[EndId{0}] = 0.0;
    return d;
}

BoundaryData ladder_logistic() {
    BoundaryData d;
    d.rule = [](std::string_view id) {
        const double x = std::stoi(std::string(id.substr(0, id.find(','))));
        return 1.0 / (1.0 + std::exp(-x / 3.0));
    };
    d.end_values = {{EndId{0}, 0.0}, {EndId{1}, 1.0}};
    return d;
}

void BM_ExploreBall(benchmark::State& state) {
    const int radius = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(explore_ball(families::half_plane(), radius));
}
BENCHMARK(BM_ExploreBall)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_DiamondPower(benchmark::State& state) {
    Truncation t = truncate(families::half_plane(), 10);
    const auto k = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(diamond_power(t.window, k));
}
BENCHMARK(BM_DiamondPower)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_OmegaK(benchmark::State& state) {
    Truncation t = truncate(families::half_plane(), 40);
    VertexFunction f(t.window.size(), 0.0);
    f[t.window.at("0,0")] = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(omega_k(t.window, f, 50));
}
BENCHMARK(BM_OmegaK)->Unit(benchmark::kMillisecond);

void BM_SolveIterative(benchmark::State& state) {
    Truncation t = truncate(families::half_plane(), static_cast<int>(state.range(0)));
    BoundaryData d = half_plane_indicator();
    for (auto _ : state) benchmark::DoNotOptimize(solve_iterative(t.window, d, t.end_of_frontier));
}
BENCHMARK(BM_SolveIterative)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SolveDirect(benchmark::State& state) {
    Truncation t = truncate(families::half_plane(), static_cast<int>(state.range(0)));
    BoundaryData d = half_plane_indicator();
    for (auto _ : state) benchmark::DoNotOptimize(solve_direct(t.window, d, t.end_of_frontier));
}
BENCHMARK(BM_SolveDirect)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Schwarz(benchmark::State& state) {
    BoundaryData d = ladder_logistic();
    SchwarzParams p{.radius = 40, .r_in = 10, .r_out = 20};
    for (auto _ : state) benchmark::DoNotOptimize(schwarz_solve(families::ladder(), d, p));
}
BENCHMARK(BM_Schwarz)->Unit(benchmark::kMillisecond);

void BM_Greens(benchmark::State& state) {
    Truncation t = truncate(families::tree(3), 8);
    const VertexIndex x = t.window.at("t0");
    GreensOptions o;
    o.max_order = 500;
    for (auto _ : state) benchmark::DoNotOptimize(greens_function(t.window, x, x, o));
}
BENCHMARK(BM_Greens)->Unit(benchmark::kMillisecond);

void BM_Walks(benchmark::State& state) {
    Truncation t = truncate(families::half_plane(), 20);
    BoundaryData d = half_plane_indicator();
    const VertexIndex start = t.window.at("0,1");
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_harmonic(t.window, d, t.end_of_frontier, start, n, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Walks)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
