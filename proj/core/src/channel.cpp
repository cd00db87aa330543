#include "relaydmt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "relaydmt/propagation.hpp"

namespace relaydmt {

namespace {

MatrixC sample_gain_matrix(int rows, int cols, RandomStream& rng) {
  MatrixC m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.complex_normal();
  return m;
}

}  // namespace

MatrixC ChannelRealization::gain(const NetworkTopology& g, int tx, int rx) const {
  const int idx = g.edge_index(tx, rx);
  if (idx < 0) throw std::invalid_argument("gain requested for absent edge");
  if (tx < rx) return toward_high[static_cast<std::size_t>(idx)];
  if (reciprocal) return toward_high[static_cast<std::size_t>(idx)].transpose();
  return toward_low[static_cast<std::size_t>(idx)];
}

Cx ChannelRealization::scalar_gain(const NetworkTopology& g, int tx, int rx) const {
  const MatrixC m = gain(g, tx, rx);
  if (m.rows() != 1 || m.cols() != 1)
    throw std::invalid_argument("scalar_gain on a multi-antenna edge");
  return m(0, 0);
}

ChannelRealization sample_realization(const NetworkTopology& g, RandomStream& rng,
                                      bool reciprocal) {
  ChannelRealization real;
  real.reciprocal = reciprocal;
  real.toward_high.reserve(g.edges.size());
  if (!reciprocal) real.toward_low.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    real.toward_high.push_back(sample_gain_matrix(g.antennas[static_cast<std::size_t>(e.b)],
                                                  g.antennas[static_cast<std::size_t>(e.a)], rng));
    if (!reciprocal)
      real.toward_low.push_back(sample_gain_matrix(g.antennas[static_cast<std::size_t>(e.a)],
                                                   g.antennas[static_cast<std::size_t>(e.b)], rng));
  }
  return real;
}

MatrixC sample_haar_unitary(int n, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("unitary dimension must be positive");
  MatrixC z = sample_gain_matrix(n, n, rng);
  Eigen::HouseholderQR<MatrixC> qr(z);
  MatrixC q = qr.householderQ() * MatrixC::Identity(n, n);
  MatrixC r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Cx d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : Cx(1.0, 0.0);
  }
  return q;
}

UnitaryAssignment UnitaryAssignment::identity(const NetworkTopology& g, const Schedule& s) {
  (void)g;
  UnitaryAssignment ua;
  ua.u.resize(s.path_count());
  for (int i = 0; i < s.path_count(); ++i)
    ua.u[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(s.hops(i) - 1));
  return ua;
}

UnitaryAssignment UnitaryAssignment::sample(const NetworkTopology& g, const Schedule& s,
                                            RandomStream& rng) {
  UnitaryAssignment ua = identity(g, s);
  for (int i = 0; i < s.path_count(); ++i)
    for (int j = 1; j < s.hops(i); ++j) {
      const int relay = s.paths[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const int n = g.antennas[static_cast<std::size_t>(relay)];
      ua.u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] =
          sample_haar_unitary(n, rng);
    }
  return ua;
}

double amp_coefficient(double input_power_coeff, double power, double noise_power, bool clip) {
  if (input_power_coeff < 0.0 || power <= 0.0 || noise_power <= 0.0)
    throw std::invalid_argument("amp_coefficient arguments out of range");
  const double a = std::sqrt(power / (power * input_power_coeff + noise_power));
  return clip ? std::min(1.0, a) : a;
}

PropagationPlan::PropagationPlan(const NetworkTopology& g, const Schedule& s) : topo(g), sched(s) {
  const ValidationReport rep = validate_schedule(g, s);
  if (!rep.ok) throw std::invalid_argument("invalid schedule: " + rep.violations.front().message);

  const int L = s.path_count();
  out_dim = g.antennas[static_cast<std::size_t>(g.sink)];
  row_off.resize(static_cast<std::size_t>(L));
  x_off.resize(static_cast<std::size_t>(L));
  in_dim.resize(static_cast<std::size_t>(L));
  int stages = 0;
  for (int i = 0; i < L; ++i) {
    row_off[static_cast<std::size_t>(i)] = stages;
    stages += s.hops(i);
    x_off[static_cast<std::size_t>(i)] = in_total;
    in_dim[static_cast<std::size_t>(i)] =
        g.antennas[static_cast<std::size_t>(s.paths[static_cast<std::size_t>(i)].front())];
    in_total += in_dim[static_cast<std::size_t>(i)];
  }
  stage_of.assign(static_cast<std::size_t>(stages), -1);

  // Noise columns: every relay reception in (path, hop) order, then one sink
  // block per path. The sink section stays an identity in the assembled Q.
  int ncol = 0;
  std::vector<int> relay_noise(static_cast<std::size_t>(stages), -1);
  for (int i = 0; i < L; ++i)
    for (int j = 1; j < s.hops(i); ++j) {
      relay_noise[static_cast<std::size_t>(row_off[static_cast<std::size_t>(i)] + j - 1)] = ncol;
      ncol += g.antennas[static_cast<std::size_t>(
          s.paths[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])];
    }
  std::vector<int> sink_noise(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) {
    sink_noise[static_cast<std::size_t>(i)] = ncol;
    ncol += out_dim;
  }
  noise_total = ncol;

  struct Key {
    int slot, path, hop;
  };
  std::vector<Key> order;
  for (int i = 0; i < L; ++i)
    for (int j = 1; j <= s.hops(i); ++j) order.push_back({s.slot(i, j), i, j});
  std::sort(order.begin(), order.end(), [](const Key& a, const Key& b) {
    return std::tie(a.slot, a.path, a.hop) < std::tie(b.slot, b.path, b.hop);
  });

  hops.reserve(order.size());
  for (const Key& k : order) {
    HopInfo info;
    info.path = k.path;
    info.hop = k.hop;
    const Path& p = s.paths[static_cast<std::size_t>(k.path)];
    info.rx = p[static_cast<std::size_t>(k.hop)];
    info.rx_dim = g.antennas[static_cast<std::size_t>(info.rx)];
    info.last = (k.hop == s.hops(k.path));
    info.noise_col = info.last
                         ? sink_noise[static_cast<std::size_t>(k.path)]
                         : relay_noise[static_cast<std::size_t>(
                               row_off[static_cast<std::size_t>(k.path)] + k.hop - 1)];
    stage_of[static_cast<std::size_t>(row_off[static_cast<std::size_t>(k.path)] + k.hop - 1)] =
        static_cast<int>(hops.size());
    hops.push_back(info);
  }

  // Arrivals: every hop active in the same slot whose transmitter is adjacent
  // to the receiver. A hop's own signal qualifies through the same rule.
  for (HopInfo& h : hops) {
    for (int i2 = 0; i2 < L; ++i2) {
      const Path& p2 = s.paths[static_cast<std::size_t>(i2)];
      for (int j2 = 1; j2 <= s.hops(i2); ++j2) {
        if (s.slot(i2, j2) != s.slot(h.path, h.hop)) continue;
        const int tx = p2[static_cast<std::size_t>(j2 - 1)];
        if (!g.has_edge(tx, h.rx)) continue;
        h.arrivals.push_back({plan_index(i2, j2), tx});
      }
    }
  }
}

EquivalentChannel propagate(const PropagationPlan& plan, const ChannelRealization& real,
                            const UnitaryAssignment& unis, double power,
                            const BuildOptions& opts) {
  const NetworkTopology& g = plan.topo;
  const Schedule& s = plan.sched;
  const int L = s.path_count();
  const int cols = plan.in_total + plan.noise_total;
  const std::size_t n_hops = plan.hops.size();

  // maps[h]: what hop h received, as coefficients over [x | relay noise | z].
  // xmit[h]: what the stage at hop h transmits next (scaled, rotated).
  std::vector<MatrixC> maps(n_hops);
  std::vector<MatrixC> xmit(n_hops);
  EquivalentChannel eq;

  for (std::size_t h = 0; h < n_hops; ++h) {
    const PropagationPlan::HopInfo& info = plan.hops[h];
    MatrixC r = MatrixC::Zero(info.rx_dim, cols);
    r.middleCols(info.noise_col + plan.in_total, info.rx_dim).setIdentity();
    double c_in = 0.0;
    for (const PropagationPlan::Arrival& a : info.arrivals) {
      const MatrixC gm = real.gain(g, a.tx, info.rx);
      c_in += gm.squaredNorm();
      const PropagationPlan::HopInfo& src = plan.hops[static_cast<std::size_t>(a.from_hop)];
      if (src.hop == 1) {
        r.middleCols(plan.x_off[static_cast<std::size_t>(src.path)],
                     plan.in_dim[static_cast<std::size_t>(src.path)]) += gm;
      } else {
        r += gm * xmit[static_cast<std::size_t>(plan.plan_index(src.path, src.hop - 1))];
      }
    }
    maps[h] = std::move(r);
    if (info.last) {
      eq.alphas[{info.path + 1, info.hop}] = 1.0;
      continue;
    }
    const double alpha = amp_coefficient(c_in, power, static_cast<double>(info.rx_dim), opts.clip);
    eq.alphas[{info.path + 1, info.hop}] = alpha;
    const MatrixC& u =
        unis.u[static_cast<std::size_t>(info.path)][static_cast<std::size_t>(info.hop - 1)];
    xmit[h] = (u.size() == 0) ? MatrixC(alpha * maps[h]) : MatrixC(alpha * (u * maps[h]));
  }

  // Assembled block order flips for schedules whose causality holds only
  // after reversing the path sequence; that keeps the x-block of the
  // transfer matrix lower triangular.
  std::vector<int> order(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i)
    order[static_cast<std::size_t>(i)] = s.reversed_causality() ? L - 1 - i : i;

  const int out_total = L * plan.out_dim;
  const int relay_cols = plan.noise_total - out_total;
  eq.H_T = MatrixC::Zero(out_total, plan.in_total);
  eq.Q = MatrixC::Zero(out_total, plan.noise_total);
  eq.out_block.resize(static_cast<std::size_t>(L));
  eq.in_block.resize(static_cast<std::size_t>(L));

  std::vector<int> new_x_off(static_cast<std::size_t>(L));
  {
    int off = 0;
    for (int b = 0; b < L; ++b) {
      new_x_off[static_cast<std::size_t>(order[static_cast<std::size_t>(b)])] = off;
      off += plan.in_dim[static_cast<std::size_t>(order[static_cast<std::size_t>(b)])];
    }
  }
  // z columns follow the output blocks so the sink sub-block of Q stays I.
  std::vector<int> new_z_off(static_cast<std::size_t>(L));
  for (int b = 0; b < L; ++b)
    new_z_off[static_cast<std::size_t>(order[static_cast<std::size_t>(b)])] =
        relay_cols + b * plan.out_dim;

  for (int b = 0; b < L; ++b) {
    const int i = order[static_cast<std::size_t>(b)];
    eq.out_block[static_cast<std::size_t>(b)] = i;
    eq.in_block[static_cast<std::size_t>(b)] = i;
    const MatrixC& row =
        maps[static_cast<std::size_t>(plan.plan_index(i, s.hops(i)))];
    for (int b2 = 0; b2 < L; ++b2) {
      const int i2 = order[static_cast<std::size_t>(b2)];
      eq.H_T.block(b * plan.out_dim, new_x_off[static_cast<std::size_t>(i2)], plan.out_dim,
                   plan.in_dim[static_cast<std::size_t>(i2)]) =
          row.middleCols(plan.x_off[static_cast<std::size_t>(i2)],
                         plan.in_dim[static_cast<std::size_t>(i2)]);
    }
    // Relay noise columns keep their layout; sink blocks are re-homed.
    eq.Q.block(b * plan.out_dim, 0, plan.out_dim, relay_cols) =
        row.middleCols(plan.in_total, relay_cols);
    for (int b2 = 0; b2 < L; ++b2) {
      const int i2 = order[static_cast<std::size_t>(b2)];
      eq.Q.block(b * plan.out_dim, new_z_off[static_cast<std::size_t>(i2)], plan.out_dim,
                 plan.out_dim) =
          row.middleCols(plan.in_total + relay_cols + i2 * plan.out_dim, plan.out_dim);
    }
  }

  const MatrixC qr = eq.Q.leftCols(relay_cols);
  eq.P_n = MatrixC::Identity(out_total, out_total) + qr * qr.adjoint();
  return eq;
}

EquivalentChannel build_equivalent_channel(const NetworkTopology& g, const Schedule& s,
                                           const ChannelRealization& real,
                                           const UnitaryAssignment& unis, double power,
                                           const BuildOptions& opts) {
  return propagate(PropagationPlan(g, s), real, unis, power, opts);
}

namespace {

void require_two_hop_star(const NetworkTopology& g, int K, int n_sources) {
  const int sink = g.node_count - 1;
  if (g.node_count != n_sources + K + 1 || g.sink != sink)
    throw std::invalid_argument("topology is not a two-hop star");
  for (int m = 0; m < n_sources; ++m)
    if (!g.is_source(m)) throw std::invalid_argument("topology is not a two-hop star");
  for (int v = 0; v < g.node_count; ++v)
    if (g.antennas[static_cast<std::size_t>(v)] != 1)
      throw std::invalid_argument("two-hop closed form needs single-antenna nodes");
  for (int k = 0; k < K; ++k) {
    const int relay = n_sources + k;
    if (!g.has_edge(relay, sink))
      throw std::invalid_argument("two-hop star is missing a relay-sink edge");
    for (int m = 0; m < n_sources; ++m)
      if (!g.has_edge(m, relay))
        throw std::invalid_argument("two-hop star is missing a source-relay edge");
  }
  for (int m = 0; m < n_sources; ++m)
    if (g.has_edge(m, sink))
      throw std::invalid_argument("two-hop star must not have a direct source-sink link");
}

}  // namespace

EquivalentChannel two_hop_equivalent_channel(int K, int B, const NetworkTopology& g,
                                             const ChannelRealization& real, double power,
                                             const BuildOptions& opts) {
  if (K < 1 || B < 1) throw std::invalid_argument("K and B must be positive");
  require_two_hop_star(g, K, 1);
  const int sink = K + 1;
  const int L = B * K;

  std::vector<Cx> h(static_cast<std::size_t>(L)), gd(static_cast<std::size_t>(L));
  std::vector<double> alpha(static_cast<std::size_t>(L));
  std::vector<int> relay(static_cast<std::size_t>(L));
  EquivalentChannel eq;
  for (int i = 1; i <= L; ++i) {
    const int k = ((i - 1) % K) + 1;
    relay[static_cast<std::size_t>(i - 1)] = k;
    h[static_cast<std::size_t>(i - 1)] = real.scalar_gain(g, 0, k);
    gd[static_cast<std::size_t>(i - 1)] = real.scalar_gain(g, k, sink);
    double c = std::norm(h[static_cast<std::size_t>(i - 1)]);
    if (i >= 2) {
      const int kp = relay[static_cast<std::size_t>(i - 2)];
      if (g.has_edge(kp, k)) c += std::norm(real.scalar_gain(g, kp, k));
    }
    alpha[static_cast<std::size_t>(i - 1)] = amp_coefficient(c, power, 1.0, opts.clip);
    eq.alphas[{i, 1}] = alpha[static_cast<std::size_t>(i - 1)];
    eq.alphas[{i, 2}] = 1.0;
  }

  // Unit lower-triangular accumulation of inter-relay leakage: row i picks up
  // row i-1 through the link between the relays of uses i-1 and i.
  MatrixC f = MatrixC::Identity(L, L);
  for (int i = 2; i <= L; ++i) {
    const int kp = relay[static_cast<std::size_t>(i - 2)];
    const int k = relay[static_cast<std::size_t>(i - 1)];
    if (!g.has_edge(kp, k)) continue;
    const Cx ig = real.scalar_gain(g, kp, k);
    for (int i2 = 1; i2 < i; ++i2)
      f(i - 1, i2 - 1) = ig * alpha[static_cast<std::size_t>(i - 2)] * f(i - 2, i2 - 1);
  }

  MatrixC a = MatrixC::Zero(L, L);
  for (int i = 0; i < L; ++i)
    for (int i2 = 0; i2 <= i; ++i2)
      a(i, i2) = gd[static_cast<std::size_t>(i)] * alpha[static_cast<std::size_t>(i)] * f(i, i2);

  eq.H_T = a;
  for (int i2 = 0; i2 < L; ++i2) eq.H_T.col(i2) *= h[static_cast<std::size_t>(i2)];
  eq.Q = MatrixC::Zero(L, 2 * L);
  eq.Q.leftCols(L) = a;
  eq.Q.rightCols(L).setIdentity();
  eq.P_n = MatrixC::Identity(L, L) + a * a.adjoint();
  eq.out_block.resize(static_cast<std::size_t>(L));
  eq.in_block.resize(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) {
    eq.out_block[static_cast<std::size_t>(i)] = i;
    eq.in_block[static_cast<std::size_t>(i)] = i;
  }
  return eq;
}

TwoHopMacChannel two_hop_mac_channel(int K, int B, const NetworkTopology& g,
                                     const ChannelRealization& real, double power,
                                     const BuildOptions& opts) {
  if (K < 1 || B < 1) throw std::invalid_argument("K and B must be positive");
  const int M = static_cast<int>(g.sources.size());
  require_two_hop_star(g, K, M);
  const int sink = M + K;
  const int L = B * K;

  TwoHopMacChannel mac;
  mac.uplink_sq.assign(static_cast<std::size_t>(M), std::vector<double>(static_cast<std::size_t>(K)));
  for (int m = 0; m < M; ++m)
    for (int k = 0; k < K; ++k)
      mac.uplink_sq[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] =
          std::norm(real.scalar_gain(g, m, M + k));

  mac.relay_of_use.resize(static_cast<std::size_t>(L));
  std::vector<double> alpha(static_cast<std::size_t>(L));
  std::vector<Cx> gd(static_cast<std::size_t>(L));
  for (int i = 1; i <= L; ++i) {
    const int k = ((i - 1) % K) + 1;
    mac.relay_of_use[static_cast<std::size_t>(i - 1)] = k;
    gd[static_cast<std::size_t>(i - 1)] = real.scalar_gain(g, M + k - 1, sink);
    double c = 0.0;
    for (int m = 0; m < M; ++m)
      c += mac.uplink_sq[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - 1)];
    if (i >= 2) {
      const int kp = mac.relay_of_use[static_cast<std::size_t>(i - 2)];
      if (g.has_edge(M + kp - 1, M + k - 1))
        c += std::norm(real.scalar_gain(g, M + kp - 1, M + k - 1));
    }
    alpha[static_cast<std::size_t>(i - 1)] = amp_coefficient(c, power, 1.0, opts.clip);
  }

  MatrixC f = MatrixC::Identity(L, L);
  for (int i = 2; i <= L; ++i) {
    const int kp = mac.relay_of_use[static_cast<std::size_t>(i - 2)];
    const int k = mac.relay_of_use[static_cast<std::size_t>(i - 1)];
    if (!g.has_edge(M + kp - 1, M + k - 1)) continue;
    const Cx ig = real.scalar_gain(g, M + kp - 1, M + k - 1);
    for (int i2 = 1; i2 < i; ++i2)
      f(i - 1, i2 - 1) = ig * alpha[static_cast<std::size_t>(i - 2)] * f(i - 2, i2 - 1);
  }

  mac.A = MatrixC::Zero(L, L);
  for (int i = 0; i < L; ++i)
    for (int i2 = 0; i2 <= i; ++i2)
      mac.A(i, i2) = gd[static_cast<std::size_t>(i)] * alpha[static_cast<std::size_t>(i)] * f(i, i2);
  mac.P_n = MatrixC::Identity(L, L) + mac.A * mac.A.adjoint();
  return mac;
}

std::string dump_realization(const NetworkTopology& g, const ChannelRealization& real) {
  std::ostringstream out;
  out.precision(17);
  auto emit = [&out](int from, int to, const MatrixC& m) {
    out << from << "-" << to << ":";
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) {
        const Cx v = m(r, c);
        out << " " << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i";
      }
    out << "\n";
  };
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    emit(g.edges[e].a, g.edges[e].b, real.toward_high[e]);
  if (!real.reciprocal)
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      emit(g.edges[e].b, g.edges[e].a, real.toward_low[e]);
  return out.str();
}

namespace {

Cx parse_complex(const std::string& tok, int line) {
  // re+imi / re-imi, exponents allowed inside either part.
  if (tok.empty() || tok.back() != 'i') throw ParseError(line, "bad complex entry");
  const std::string body = tok.substr(0, tok.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t p = 1; p < body.size(); ++p) {
    const char c = body[p];
    if ((c == '+' || c == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') split = p;
  }
  if (split == std::string::npos) throw ParseError(line, "bad complex entry");
  std::size_t used = 0;
  double re = 0.0, im = 0.0;
  try {
    re = std::stod(body.substr(0, split), &used);
    if (used != split) throw std::invalid_argument("");
    im = std::stod(body.substr(split), &used);
    if (used != body.size() - split) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ParseError(line, "bad complex entry");
  }
  return {re, im};
}

}  // namespace

ChannelRealization load_realization(const NetworkTopology& g, const std::string& text) {
  ChannelRealization real;
  const std::size_t ne = g.edges.size();
  real.toward_high.resize(ne);
  std::vector<bool> have_high(ne, false), have_low(ne, false);
  std::vector<MatrixC> low(ne);
  bool any_low = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    std::string lin = (hash == std::string::npos) ? raw : raw.substr(0, hash);
    if (lin.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::size_t colon = lin.find(':');
    if (colon == std::string::npos) throw ParseError(line_no, "missing ':'");
    std::istringstream head(lin.substr(0, colon));
    int from = -1, to = -1;
    char dash = 0;
    if (!(head >> from >> dash >> to) || dash != '-')
      throw ParseError(line_no, "bad edge label");
    const int idx = g.edge_index(from, to);
    if (idx < 0) throw ParseError(line_no, "unknown edge");
    const bool high = from < to;
    const int rows = g.antennas[static_cast<std::size_t>(to)];
    const int colsn = g.antennas[static_cast<std::size_t>(from)];
    MatrixC m(rows, colsn);
    std::istringstream vals(lin.substr(colon + 1));
    std::string tok;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < colsn; ++c) {
        if (!(vals >> tok)) throw ParseError(line_no, "too few entries");
        m(r, c) = parse_complex(tok, line_no);
      }
    if (vals >> tok) throw ParseError(line_no, "too many entries");
    auto& seen = high ? have_high : have_low;
    if (seen[static_cast<std::size_t>(idx)]) throw ParseError(line_no, "duplicate edge line");
    seen[static_cast<std::size_t>(idx)] = true;
    if (high) {
      real.toward_high[static_cast<std::size_t>(idx)] = std::move(m);
    } else {
      low[static_cast<std::size_t>(idx)] = std::move(m);
      any_low = true;
    }
  }
  for (std::size_t e = 0; e < ne; ++e)
    if (!have_high[e]) throw ParseError(0, "missing edge line");
  real.reciprocal = !any_low;
  if (any_low) {
    for (std::size_t e = 0; e < ne; ++e)
      if (!have_low[e]) throw ParseError(0, "missing reverse edge line");
    real.toward_low = std::move(low);
  }
  return real;
}

}  // namespace relaydmt
