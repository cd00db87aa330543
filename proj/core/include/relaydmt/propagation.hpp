#pragma once

#include "relaydmt/channel.hpp"

namespace relaydmt {

// Schedule-derived index tables reused across fading blocks; building them
// validates the schedule once so the per-trial propagation stays cheap.
struct PropagationPlan {
  NetworkTopology topo;
  Schedule sched;

  struct Arrival {
    int from_hop;  // plan index of the transmitting hop
    int tx;        // its transmitter node
  };
  struct HopInfo {
    int path = 0;  // 0-based
    int hop = 0;   // 1-based
    int rx = 0;
    int rx_dim = 0;
    bool last = false;
    int noise_col = 0;  // offset into the noise column section
    std::vector<Arrival> arrivals;
  };

  std::vector<HopInfo> hops;       // ascending slot order
  std::vector<int> stage_of;       // (path, hop) -> plan index, via row_off
  std::vector<int> row_off;        // per path, into stage_of
  std::vector<int> x_off;          // per-path input column offset
  std::vector<int> in_dim;         // per-path input block dimension
  int in_total = 0;
  int noise_total = 0;
  int out_dim = 0;  // sink antennas, identical for every output block

  PropagationPlan(const NetworkTopology& g, const Schedule& s);

  [[nodiscard]] int plan_index(int path, int hop) const {
    return stage_of[row_off[path] + hop - 1];
  }
};

EquivalentChannel propagate(const PropagationPlan& plan, const ChannelRealization& real,
                            const UnitaryAssignment& unis, double power,
                            const BuildOptions& opts = {});

}  // namespace relaydmt
