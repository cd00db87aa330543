#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "relaydmt/rng.hpp"
#include "relaydmt/schedule.hpp"
#include "relaydmt/topology.hpp"

namespace relaydmt {

using Cx = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;

// One fading block: per edge (a,b) with a < b, the N_b x N_a gain matrix of
// the a -> b direction. Links are reciprocal by default, so the b -> a gain is
// the transpose; a realization sampled with reciprocal=false stores the two
// directions independently.
struct ChannelRealization {
  std::vector<MatrixC> toward_high;
  std::vector<MatrixC> toward_low;  // empty when reciprocal
  bool reciprocal = true;

  [[nodiscard]] MatrixC gain(const NetworkTopology& g, int tx, int rx) const;
  // scalar shortcut for single-antenna edges
  [[nodiscard]] Cx scalar_gain(const NetworkTopology& g, int tx, int rx) const;
};

// i.i.d. CN(0,1) entries, edges consumed in index order so that estimators
// sharing a stream see identical gains.
ChannelRealization sample_realization(const NetworkTopology& g, RandomStream& rng,
                                      bool reciprocal = true);

// Haar-distributed n x n unitary (Ginibre + QR with the R-diagonal phase fix).
MatrixC sample_haar_unitary(int n, RandomStream& rng);

// Per (path, hop) mixing unitaries applied by the relays; dimension of entry
// (i,j) is the antenna count of p_i(j). Identity when not supplied.
struct UnitaryAssignment {
  std::vector<std::vector<MatrixC>> u;  // u[i][j-1], relay stages only (j < l_i)

  static UnitaryAssignment identity(const NetworkTopology& g, const Schedule& s);
  static UnitaryAssignment sample(const NetworkTopology& g, const Schedule& s,
                                  RandomStream& rng);
};

// Relay scaling keeping the per-slot output power within P: the denominator
// charges every simultaneously received signal at full transmit power plus
// the receiver noise power.
//   alpha = min{1, sqrt(P / (P * input_power_coeff + noise_power))}
// clip=false removes the min{1, .} cap (the analytic non-interfering mode).
double amp_coefficient(double input_power_coeff, double power, double noise_power = 1.0,
                       bool clip = true);

// Linear map from the stacked per-path source symbols and all injected noises
// to the stacked sink observations:  y = H_T x + Q n,  P_n = Q Q^H.
// Output/input blocks follow the path order (reversed for schedules labelled
// causal-after-reversal, which restores lower block-triangularity).
struct EquivalentChannel {
  MatrixC H_T;
  MatrixC Q;   // relay-noise columns first (path-major), then the identity
               // sub-block of the sink noise
  MatrixC P_n;
  std::map<std::pair<int, int>, double> alphas;  // (path, hop) 1-based; alpha_{i,l_i}=1
  std::vector<int> out_block;  // path index of each assembled output block
  std::vector<int> in_block;   // path index of each assembled input block
};

struct BuildOptions {
  bool clip = true;  // false: theoretical non-interfering amplification
};

// Impulse propagation through the schedule: every transmission in slot s is
// superposed at each adjacent scheduled receiver, relays apply U then alpha,
// alpha precomputed per (relay, slot) from the gains of all signals arriving
// in that slot.
EquivalentChannel build_equivalent_channel(const NetworkTopology& g, const Schedule& s,
                                           const ChannelRealization& real,
                                           const UnitaryAssignment& unis, double power,
                                           const BuildOptions& opts = {});

// Closed form for the round-robin two-hop schedule on a source / K relays /
// sink graph (relay-relay edges allowed): y = G Omega F (H x + n) + z with F
// unit lower-triangular accumulating the inter-relay leakage chain. Single
// antenna per node. Must match build_equivalent_channel entrywise.
EquivalentChannel two_hop_equivalent_channel(int K, int B, const NetworkTopology& g,
                                             const ChannelRealization& real, double power,
                                             const BuildOptions& opts = {});

// Shared two-hop matrices for the multiple-access variant: per-use relay
// index, uplink power sums and the A = G Omega F map with its noise
// covariance. uplink_sq[m][k-1] = |h_{m,k}|^2 of transmitter m.
struct TwoHopMacChannel {
  MatrixC A;
  MatrixC P_n;
  std::vector<int> relay_of_use;               // 1-based relay per use
  std::vector<std::vector<double>> uplink_sq;  // [transmitter][relay-1]
};

TwoHopMacChannel two_hop_mac_channel(int K, int B, const NetworkTopology& g,
                                     const ChannelRealization& real, double power,
                                     const BuildOptions& opts = {});

// Text dump, one line per edge and direction:  a-b: re+imi re+imi ...
// (row-major over the stored matrix). load restores exactly.
std::string dump_realization(const NetworkTopology& g, const ChannelRealization& real);
ChannelRealization load_realization(const NetworkTopology& g, const std::string& text);

}  // namespace relaydmt
