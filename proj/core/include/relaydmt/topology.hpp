#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relaydmt {

// Undirected edge with endpoints normalized to a < b.
struct Edge {
  int a = 0;
  int b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

// Source-to-sink route; nodes[0] must be a source, nodes.back() the sink,
// all nodes distinct, consecutive nodes adjacent.
using Path = std::vector<int>;

struct ParseError : std::runtime_error {
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
  int line;
};

// Wireless relay network: nodes 0..node_count-1, per-node antenna counts,
// undirected edges (sorted, unique), one or more transmitters and one sink.
class NetworkTopology {
 public:
  int node_count = 0;
  std::vector<int> antennas;   // size node_count, all >= 1
  std::vector<Edge> edges;     // sorted ascending, no duplicates, no self loops
  std::vector<int> sources;    // nonempty, excludes sink
  int sink = 0;
  bool full_duplex = false;

  [[nodiscard]] bool has_edge(int u, int v) const;
  // index into edges (and into ChannelRealization gain storage); -1 if absent
  [[nodiscard]] int edge_index(int u, int v) const;
  [[nodiscard]] bool is_source(int v) const;
  [[nodiscard]] int relay_count() const {
    return node_count - static_cast<int>(sources.size()) - 1;
  }
  // undirected edge weight N_a * N_b
  [[nodiscard]] int edge_weight(const Edge& e) const {
    return antennas[e.a] * antennas[e.b];
  }
  [[nodiscard]] std::vector<int> neighbors(int v) const;

  // throws std::invalid_argument describing the first structural violation
  void check() const;
};

// Node subset defining a cut: contains every source, excludes the sink.
struct CutSet {
  std::vector<int> members;  // sorted
};

struct MinCutResult {
  long long weight = 0;
  CutSet witness;
};

struct DualFlowReport {
  bool feasible = false;
  // one entry per topology edge, weight minus number of paths crossing it
  std::vector<long long> slack;
  std::vector<Edge> violations;
};

// Text format, sections separated by ';', '#' starts a comment line:
//   nodes <n>; ant <id>:<N> ...; edges <a>-<b> ...; src <id>[,<id>...]; sink <id>[; full_duplex]
// Unlisted nodes default to one antenna. Throws ParseError with a line number.
NetworkTopology parse_topology(const std::string& text);
std::string serialize_topology(const NetworkTopology& g);

// Sum of N_a*N_b over edges crossing the cut. Throws std::invalid_argument if
// the cut omits a source or contains the sink.
long long cut_weight(const NetworkTopology& g, const CutSet& cut);

// Production route: max-flow over the antenna-weighted graph, witness taken
// from the residual reachable set. Weight 0 when source and sink are separated.
MinCutResult min_cut(const NetworkTopology& g);

// Test oracle route: enumerates every admissible cut. Requires node_count <= 16.
MinCutResult min_cut_exhaustive(const NetworkTopology& g);

// Integral max-flow decomposition into simple source->sink paths, each edge
// used by at most N_a*N_b paths. Deterministic: augmenting paths and the
// decomposition walk both prefer the lexicographically smallest node sequence.
// Throws std::invalid_argument when the sink is unreachable.
std::vector<Path> max_flow_path_decomposition(const NetworkTopology& g);

// Checks count(paths through e) <= N_a*N_b for every edge; the per-path unit
// weights then form a feasible solution of the flow dual with value |paths|.
DualFlowReport verify_dual_flow(const NetworkTopology& g, const std::vector<Path>& paths);

// Longest simple source->sink path (hop count). Exhaustive, node_count <= 16.
int max_path_length(const NetworkTopology& g);

struct HamiltonianCycleResult {
  bool exists = false;
  std::vector<int> ordering;  // relay labels in cycle order when exists
};

// Hamiltonian cycle in the complement of the relay-induced subgraph, i.e. an
// ordering of the relays in which consecutive ones (cyclically) never share an
// edge of g. Relay count <= 12 (Held-Karp); 1 or 2 relays degenerate to the
// single admissible ordering.
HamiltonianCycleResult has_hamiltonian_complement_cycle(const NetworkTopology& g);

}  // namespace relaydmt
