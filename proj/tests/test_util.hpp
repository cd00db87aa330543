#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaydmt/rng.hpp"
#include "relaydmt/schedule.hpp"
#include "relaydmt/topology.hpp"

namespace testutil {

inline std::string read_fixture(const std::string& name) {
  const std::string path = std::string(RELAYDMT_FIXTURES) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline relaydmt::NetworkTopology load_topo(const std::string& name) {
  return relaydmt::parse_topology(read_fixture(name));
}

inline relaydmt::Schedule load_sched(const std::string& name,
                                     const relaydmt::NetworkTopology& g) {
  return relaydmt::parse_schedule(read_fixture(name), g);
}

// Two-hop star: source 0, relays 1..K, sink K+1. Optional relay ring edges.
inline relaydmt::NetworkTopology make_star(int K, bool relay_ring = false) {
  relaydmt::NetworkTopology g;
  g.node_count = K + 2;
  g.antennas.assign(static_cast<std::size_t>(K + 2), 1);
  for (int k = 1; k <= K; ++k) {
    g.edges.push_back(relaydmt::make_edge(0, k));
    g.edges.push_back(relaydmt::make_edge(k, K + 1));
  }
  if (relay_ring && K == 2) g.edges.push_back(relaydmt::make_edge(1, 2));
  if (relay_ring && K >= 3)
    for (int k = 1; k <= K; ++k)
      g.edges.push_back(relaydmt::make_edge(k, (k % K) + 1));
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  g.sources = {0};
  g.sink = K + 1;
  g.check();
  return g;
}

// Random connected graph with source 0 and sink n-1. Guarantees a 0..sink
// path by wiring a random spanning chain first.
inline relaydmt::NetworkTopology random_graph(relaydmt::RandomStream& rng, int max_nodes,
                                              int max_extra_edges, int max_antennas) {
  const int n = 3 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_nodes - 2));
  relaydmt::NetworkTopology g;
  g.node_count = n;
  g.antennas.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    g.antennas[static_cast<std::size_t>(v)] =
        1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_antennas));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  for (int v = n - 1; v > 0; --v)
    std::swap(order[static_cast<std::size_t>(v)],
              order[rng.next() % static_cast<std::uint64_t>(v + 1)]);
  for (int v = 0; v + 1 < n; ++v)
    g.edges.push_back(relaydmt::make_edge(order[static_cast<std::size_t>(v)],
                                          order[static_cast<std::size_t>(v + 1)]));
  const int extra = static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_extra_edges + 1));
  for (int e = 0; e < extra; ++e) {
    const int a = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
    const int b = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
    if (a != b) g.edges.push_back(relaydmt::make_edge(a, b));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  g.sources = {0};
  g.sink = n - 1;
  g.check();
  return g;
}

// Random simple source-to-sink path via randomized depth-first search.
inline relaydmt::Path random_path(relaydmt::RandomStream& rng,
                                  const relaydmt::NetworkTopology& g) {
  std::vector<int> stack = {g.sources[0]};
  std::vector<bool> used(static_cast<std::size_t>(g.node_count), false);
  used[static_cast<std::size_t>(g.sources[0])] = true;
  while (true) {
    const int at = stack.back();
    if (at == g.sink) return stack;
    std::vector<int> nbrs = g.neighbors(at);
    std::vector<int> open;
    for (int v : nbrs)
      if (!used[static_cast<std::size_t>(v)] && !g.is_source(v)) open.push_back(v);
    if (open.empty()) {
      // dead end: restart
      stack = {g.sources[0]};
      std::fill(used.begin(), used.end(), false);
      used[static_cast<std::size_t>(g.sources[0])] = true;
      continue;
    }
    const int next = open[rng.next() % open.size()];
    used[static_cast<std::size_t>(next)] = true;
    stack.push_back(next);
  }
}

// Brute-force optimum of the hop-assignment program: enumerate assignments,
// solve each inner problem by exhaustive vertex search over which edges sit
// at mu=1 plus at most one fractional edge.
inline double lp_oracle(const relaydmt::NetworkTopology& g, const std::vector<relaydmt::Path>& paths,
                        int slot_count, double r) {
  const int L = static_cast<int>(paths.size());
  const double demand = L - slot_count * r;
  if (demand <= 0.0) return 0.0;
  std::vector<std::vector<int>> edge_ids(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (std::size_t j = 0; j + 1 < paths[i].size(); ++j)
      edge_ids[i].push_back(g.edge_index(paths[i][j], paths[i][j + 1]));

  double best = 1e300;
  std::vector<std::size_t> pick(paths.size(), 0);
  while (true) {
    std::vector<int> chosen;
    for (std::size_t i = 0; i < paths.size(); ++i) chosen.push_back(edge_ids[i][pick[i]]);
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    std::vector<double> mult(chosen.size(), 0.0);
    for (std::size_t i = 0; i < paths.size(); ++i)
      for (std::size_t e = 0; e < chosen.size(); ++e)
        if (edge_ids[i][pick[i]] == chosen[e]) mult[e] += 1.0;
    const int ne = static_cast<int>(chosen.size());
    for (unsigned sub = 0; sub < (1u << ne); ++sub) {
      double cover = 0.0;
      int ones = 0;
      for (int e = 0; e < ne; ++e)
        if (sub & (1u << e)) {
          cover += mult[static_cast<std::size_t>(e)];
          ++ones;
        }
      if (cover >= demand - 1e-12) best = std::min(best, static_cast<double>(ones));
      for (int f = 0; f < ne; ++f) {
        if (sub & (1u << f)) continue;
        const double frac = (demand - cover) / mult[static_cast<std::size_t>(f)];
        if (frac > 0.0 && frac <= 1.0 + 1e-12)
          best = std::min(best, ones + std::min(1.0, frac));
      }
    }
    std::size_t i = paths.size();
    while (i > 0) {
      --i;
      if (++pick[i] < edge_ids[i].size()) break;
      pick[i] = 0;
      if (i == 0) return best;
    }
  }
}

}  // namespace testutil
