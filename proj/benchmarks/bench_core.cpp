#include <benchmark/benchmark.h>

#include "relaydmt/dmt.hpp"
#include "relaydmt/outage.hpp"
#include "relaydmt/rng.hpp"

namespace {

using namespace relaydmt;

NetworkTopology star(int K) {
  NetworkTopology g;
  g.node_count = K + 2;
  g.antennas.assign(static_cast<std::size_t>(K + 2), 1);
  for (int k = 1; k <= K; ++k) {
    g.edges.push_back(make_edge(0, k));
    g.edges.push_back(make_edge(k, K + 1));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.sources = {0};
  g.sink = K + 1;
  return g;
}

NetworkTopology three_hop() {
  return parse_topology(
      "nodes 6; edges 0-1 0-2 1-2 1-3 1-4 2-3 2-4 3-4 3-5 4-5; src 0; sink 5");
}

void BM_PropagateTwoHop(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const int B = static_cast<int>(state.range(1));
  const NetworkTopology g = star(K);
  const Schedule s = build_two_hop_schedule(K, B);
  const PropagationPlan plan(g, s);
  const UnitaryAssignment ident = UnitaryAssignment::identity(g, s);
  RandomStream rng(11, 0, 0);
  const ChannelRealization real = sample_realization(g, rng);
  for (auto _ : state) {
    EquivalentChannel eq = propagate(plan, real, ident, 100.0);
    benchmark::DoNotOptimize(eq.H_T);
  }
}
BENCHMARK(BM_PropagateTwoHop)->Args({2, 1})->Args({4, 3});

void BM_MutualInformation(benchmark::State& state) {
  const NetworkTopology g = star(4);
  const Schedule s = build_two_hop_schedule(4, 3);
  const PropagationPlan plan(g, s);
  const UnitaryAssignment ident = UnitaryAssignment::identity(g, s);
  RandomStream rng(11, 0, 1);
  const ChannelRealization real = sample_realization(g, rng);
  const EquivalentChannel eq = propagate(plan, real, ident, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(mutual_information(eq, 100.0));
}
BENCHMARK(BM_MutualInformation);

void BM_OutageTrial(benchmark::State& state) {
  const NetworkTopology g = star(2);
  const Schedule s = build_two_hop_schedule(2, 1);
  const PropagationPlan plan(g, s);
  const UnitaryAssignment ident = UnitaryAssignment::identity(g, s);
  std::uint64_t t = 0;
  for (auto _ : state) {
    RandomStream rng(7, 0, t++);
    const ChannelRealization real = sample_realization(g, rng);
    const EquivalentChannel eq = propagate(plan, real, ident, 1000.0);
    benchmark::DoNotOptimize(mutual_information(eq, 1000.0) <= 3.0);
  }
}
BENCHMARK(BM_OutageTrial);

void BM_MinCut(benchmark::State& state) {
  const NetworkTopology g = three_hop();
  for (auto _ : state) benchmark::DoNotOptimize(min_cut(g).weight);
}
BENCHMARK(BM_MinCut);

void BM_NiExact(benchmark::State& state) {
  const NetworkTopology g = star(3);
  const Schedule s = build_two_hop_schedule(3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(dmt_rs_ni_exact(g, s, 0.4));
}
BENCHMARK(BM_NiExact);

}  // namespace

BENCHMARK_MAIN();
