#include <benchmark/benchmark.h>

#include <random>

#include "gmwcs/reductions.hpp"
#include "gmwcs/separation.hpp"
#include "gmwcs/solver.hpp"

namespace {

// Connected random graph: a random spanning tree plus extra edges at `density`.
gmwcs::Instance make_graph(std::size_t n, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(-5.0, 5.0), coin(0.0, 1.0);
    gmwcs::GraphBuilder builder;
    std::vector<gmwcs::VertexId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(builder.add_vertex(weight(rng)));
    for (std::size_t i = 1; i < n; ++i) builder.add_edge(ids[rng() % i], ids[i], weight(rng));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j)
            if (coin(rng) < density) builder.add_edge(ids[i], ids[j], weight(rng));
    return {builder.build(), std::nullopt};
}

void BM_Solve(benchmark::State &state) {
    const auto inst = make_graph(static_cast<std::size_t>(state.range(0)), 0.08, 1);
    for (auto _ : state) benchmark::DoNotOptimize(gmwcs::solve(inst).weight);
}
BENCHMARK(BM_Solve)->Arg(30)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_SolveFourWorkers(benchmark::State &state) {
    const auto inst = make_graph(static_cast<std::size_t>(state.range(0)), 0.08, 1);
    gmwcs::SolveConfig config;
    config.worker_count = 4;
    for (auto _ : state) benchmark::DoNotOptimize(gmwcs::solve(inst, config).weight);
}
BENCHMARK(BM_SolveFourWorkers)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_Preprocess(benchmark::State &state) {
    const auto inst = make_graph(static_cast<std::size_t>(state.range(0)), 0.08, 2);
    for (auto _ : state) benchmark::DoNotOptimize(gmwcs::preprocess(inst).reduced.graph.vertex_count());
}
BENCHMARK(BM_Preprocess)->Arg(60)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MaxFlow(benchmark::State &state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> cap(0.0, 1.0);
    gmwcs::FlowNetwork net;
    net.vertex_count = static_cast<std::size_t>(state.range(0));
    net.sink = net.vertex_count - 1;
    for (std::size_t a = 0; a < net.vertex_count; ++a)
        for (std::size_t b = 0; b < net.vertex_count; ++b)
            if (a != b && rng() % 5 == 0) net.arcs.push_back({a, b, cap(rng)});
    for (auto _ : state) benchmark::DoNotOptimize(gmwcs::max_flow(net).value);
}
BENCHMARK(BM_MaxFlow)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
