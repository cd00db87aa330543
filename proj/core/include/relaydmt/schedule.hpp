#pragma once

#include <map>
#include <string>
#include <vector>

#include "relaydmt/topology.hpp"

namespace relaydmt {

// Transmission plan for a path sequence: timing[i][j-1] holds the slot
// (1-based) in which hop j of path i+1 fires. A well-formed schedule obeys
//   (1) slots within [1, slot_count], slot_count = max slot used
//   (2) first-hop slots strictly increase with the path index
//   (3) slots strictly increase along each path
//   (4) when hop (i,j) and a later path's hop (i',j') share a slot, the
//       receiver of (i,j) must not be adjacent to the transmitter of (i',j')
// Property (4) permits interference from earlier paths only; schedules whose
// interference becomes causal only after reversing the slot axis carry the
// label suffix "causal-after-reversal" and are assembled accordingly.
struct Schedule {
  std::vector<Path> paths;
  std::vector<std::vector<int>> timing;
  int slot_count = 0;
  std::string label;

  [[nodiscard]] int path_count() const { return static_cast<int>(paths.size()); }
  [[nodiscard]] int hops(int i) const { return static_cast<int>(paths[i].size()) - 1; }
  [[nodiscard]] int slot(int i, int j) const { return timing[i][j - 1]; }  // 1-based hop
  [[nodiscard]] bool reversed_causality() const {
    return label.find("causal-after-reversal") != std::string::npos;
  }
};

struct Violation {
  int property = 0;  // 1..4, or 0 for malformed shape / invalid paths
  int path = 0;      // 1-based; 0 when not tied to a single path
  int hop = 0;       // 1-based
  int slot = 0;      // offending slot for property (4)
  std::string message;
};

struct ValidationReport {
  bool ok = false;
  std::vector<Violation> violations;
};

// Checks paths against the graph (membership, adjacency, simplicity,
// source/sink endpoints) and timing against properties (1)-(4).
ValidationReport validate_schedule(const NetworkTopology& g, const Schedule& s);

// Property (4) with the path-order restriction dropped: no two simultaneous
// hops may couple through an edge in either direction. Requires a valid
// schedule (throws std::invalid_argument otherwise).
bool is_non_interfering(const NetworkTopology& g, const Schedule& s);

// Round-robin two-hop construction: paths (0,k,K+1) repeated B times,
// s_{i,j} = i + j - 1, so slot_count = BK + 1.
Schedule build_two_hop_schedule(int K, int B);

// Max-flow decomposition paths, each repeated L0 times back-to-back, fully
// serialized (hop j of the i-th sequence entry fires after all earlier paths
// finish). Always non-interfering.
Schedule build_sequential_maxflow_schedule(const NetworkTopology& g, int L0);

// Pipelined construction for full-duplex graphs. On a strictly layered graph
// every path advances one slot after the previous one (s_{i,j} = i + j - 1);
// otherwise the decomposition blocks are offset by the preceding path lengths
// and only reversed-axis causality holds. Throws when the graph is
// half-duplex or when the produced timing fails validation.
Schedule build_pipelined_schedule(const NetworkTopology& g, int L0);

struct HopRef {
  int path = 0;  // 1-based
  int hop = 0;   // 1-based
  friend bool operator==(const HopRef&, const HopRef&) = default;
  friend auto operator<=>(const HopRef&, const HopRef&) = default;
};

// For each receiving hop, the simultaneous hops whose transmitter is adjacent
// to its receiver. Only hops with listed interferers appear.
using InterferencePattern = std::map<HopRef, std::vector<HopRef>>;

InterferencePattern interference_pattern(const NetworkTopology& g, const Schedule& s);

// Edge traversal counts over the path sequence (repetitions counted).
std::map<Edge, int> beta_counts(const Schedule& s);

// Text format: either explicit
//   paths: (0,1,3);(0,2,3)
//   timing: 1,2; 2,3
// or a builder line:
//   builder: two_hop K=2 B=3
//   builder: maxflow_serial L0=2
//   builder: pipelined L0=3
// Builders need the topology; '#' starts a comment line.
Schedule parse_schedule(const std::string& text, const NetworkTopology& g);
std::string serialize_schedule(const Schedule& s);

}  // namespace relaydmt
