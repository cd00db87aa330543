#include "relaydmt/topology.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <sstream>

namespace relaydmt {

bool NetworkTopology::has_edge(int u, int v) const { return edge_index(u, v) >= 0; }

int NetworkTopology::edge_index(int u, int v) const {
  if (u == v) return -1;
  const Edge e = make_edge(u, v);
  const auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || !(*it == e)) return -1;
  return static_cast<int>(it - edges.begin());
}

bool NetworkTopology::is_source(int v) const {
  return std::find(sources.begin(), sources.end(), v) != sources.end();
}

std::vector<int> NetworkTopology::neighbors(int v) const {
  std::vector<int> out;
  for (const auto& e : edges) {
    if (e.a == v) out.push_back(e.b);
    if (e.b == v) out.push_back(e.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void NetworkTopology::check() const {
  if (node_count < 2) throw std::invalid_argument("topology needs at least two nodes");
  if (static_cast<int>(antennas.size()) != node_count)
    throw std::invalid_argument("antenna list size mismatch");
  for (int n : antennas)
    if (n < 1) throw std::invalid_argument("antenna counts must be positive");
  if (!std::is_sorted(edges.begin(), edges.end()))
    throw std::invalid_argument("edges must be sorted");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.a < 0 || e.b >= node_count || e.a >= e.b)
      throw std::invalid_argument("edge endpoints out of range");
    if (i > 0 && edges[i - 1] == e) throw std::invalid_argument("duplicate edge");
  }
  if (sources.empty()) throw std::invalid_argument("no sources");
  for (int s : sources) {
    if (s < 0 || s >= node_count) throw std::invalid_argument("source label out of range");
    if (s == sink) throw std::invalid_argument("sink listed as source");
  }
  if (sink < 0 || sink >= node_count) throw std::invalid_argument("sink label out of range");
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Tok {
  std::string text;
  int line;
};

std::vector<std::vector<Tok>> split_statements(const std::string& text) {
  std::vector<std::vector<Tok>> stmts(1);
  int line = 1;
  std::string cur;
  int cur_line = 1;
  bool in_comment = false;
  auto flush_tok = [&] {
    if (!cur.empty()) {
      stmts.back().push_back({cur, cur_line});
      cur.clear();
    }
  };
  for (char c : text) {
    if (c == '\n') {
      flush_tok();
      ++line;
      in_comment = false;
      continue;
    }
    if (in_comment) continue;
    if (c == '#') {
      flush_tok();
      in_comment = true;
      continue;
    }
    if (c == ';') {
      flush_tok();
      stmts.emplace_back();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush_tok();
      continue;
    }
    if (cur.empty()) cur_line = line;
    cur.push_back(c);
  }
  flush_tok();
  return stmts;
}

int parse_int(const Tok& t, const std::string& what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(t.text, &pos);
  } catch (...) {
    throw ParseError(t.line, "expected " + what + ", got '" + t.text + "'");
  }
  if (pos != t.text.size())
    throw ParseError(t.line, "expected " + what + ", got '" + t.text + "'");
  return v;
}

int parse_int_str(const std::string& s, int line, const std::string& what) {
  return parse_int(Tok{s, line}, what);
}

}  // namespace

NetworkTopology parse_topology(const std::string& text) {
  NetworkTopology g;
  bool saw_nodes = false, saw_src = false, saw_sink = false;
  std::vector<std::pair<Tok, Tok>> pending_edges;          // endpoint tokens
  std::vector<std::pair<Tok, int>> pending_ants;           // id token, count
  std::vector<Tok> pending_srcs;
  Tok sink_tok{"", 0};

  for (const auto& stmt : split_statements(text)) {
    if (stmt.empty()) continue;
    const Tok& kw = stmt[0];
    if (kw.text == "nodes") {
      if (saw_nodes) throw ParseError(kw.line, "duplicate nodes section");
      if (stmt.size() != 2) throw ParseError(kw.line, "nodes takes one count");
      g.node_count = parse_int(stmt[1], "node count");
      if (g.node_count < 2) throw ParseError(stmt[1].line, "need at least two nodes");
      saw_nodes = true;
    } else if (kw.text == "ant") {
      for (std::size_t i = 1; i < stmt.size(); ++i) {
        const auto colon = stmt[i].text.find(':');
        if (colon == std::string::npos)
          throw ParseError(stmt[i].line, "antenna entry must look like id:count");
        pending_ants.emplace_back(
            Tok{stmt[i].text.substr(0, colon), stmt[i].line},
            parse_int_str(stmt[i].text.substr(colon + 1), stmt[i].line, "antenna count"));
      }
    } else if (kw.text == "edges") {
      for (std::size_t i = 1; i < stmt.size(); ++i) {
        const auto dash = stmt[i].text.find('-');
        if (dash == std::string::npos)
          throw ParseError(stmt[i].line, "edge must look like a-b");
        pending_edges.emplace_back(Tok{stmt[i].text.substr(0, dash), stmt[i].line},
                                   Tok{stmt[i].text.substr(dash + 1), stmt[i].line});
      }
    } else if (kw.text == "src") {
      if (stmt.size() < 2) throw ParseError(kw.line, "src needs at least one label");
      std::string joined;
      int jline = stmt[1].line;
      for (std::size_t i = 1; i < stmt.size(); ++i) joined += stmt[i].text;
      std::stringstream ss(joined);
      std::string part;
      while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        pending_srcs.push_back({part, jline});
      }
      if (pending_srcs.empty()) throw ParseError(kw.line, "src needs at least one label");
      saw_src = true;
    } else if (kw.text == "sink") {
      if (stmt.size() != 2) throw ParseError(kw.line, "sink takes one label");
      sink_tok = stmt[1];
      saw_sink = true;
    } else if (kw.text == "full_duplex") {
      if (stmt.size() != 1) throw ParseError(kw.line, "full_duplex takes no arguments");
      g.full_duplex = true;
    } else {
      throw ParseError(kw.line, "unknown section '" + kw.text + "'");
    }
  }

  if (!saw_nodes) throw ParseError(1, "missing nodes section");
  if (!saw_src) throw ParseError(1, "missing src section");
  if (!saw_sink) throw ParseError(1, "missing sink section");

  auto node_of = [&](const Tok& t) {
    const int v = parse_int(t, "node label");
    if (v < 0 || v >= g.node_count)
      throw ParseError(t.line, "dangling node label " + std::to_string(v));
    return v;
  };

  g.antennas.assign(g.node_count, 1);
  for (const auto& [tok, n] : pending_ants) {
    const int v = node_of(tok);
    if (n < 1) throw ParseError(tok.line, "antenna count must be positive");
    g.antennas[v] = n;
  }

  for (const auto& [ta, tb] : pending_edges) {
    const int a = node_of(ta), b = node_of(tb);
    if (a == b) throw ParseError(ta.line, "self loop " + ta.text + "-" + tb.text);
    const Edge e = make_edge(a, b);
    if (std::find(g.edges.begin(), g.edges.end(), e) != g.edges.end())
      throw ParseError(ta.line,
                       "duplicate edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
    g.edges.push_back(e);
  }
  std::sort(g.edges.begin(), g.edges.end());

  g.sink = node_of(sink_tok);
  for (const auto& t : pending_srcs) {
    const int v = node_of(t);
    if (v == g.sink) throw ParseError(t.line, "sink listed as source");
    if (std::find(g.sources.begin(), g.sources.end(), v) != g.sources.end())
      throw ParseError(t.line, "duplicate source " + t.text);
    g.sources.push_back(v);
  }
  std::sort(g.sources.begin(), g.sources.end());
  g.check();
  return g;
}

std::string serialize_topology(const NetworkTopology& g) {
  std::ostringstream os;
  os << "nodes " << g.node_count << "; ant";
  for (int v = 0; v < g.node_count; ++v) os << ' ' << v << ':' << g.antennas[v];
  os << "; edges";
  for (const auto& e : g.edges) os << ' ' << e.a << '-' << e.b;
  os << "; src ";
  for (std::size_t i = 0; i < g.sources.size(); ++i)
    os << (i ? "," : "") << g.sources[i];
  os << "; sink " << g.sink;
  if (g.full_duplex) os << "; full_duplex";
  os << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// cuts and flows

long long cut_weight(const NetworkTopology& g, const CutSet& cut) {
  g.check();
  std::vector<char> in(g.node_count, 0);
  for (int v : cut.members) {
    if (v < 0 || v >= g.node_count) throw std::invalid_argument("cut member out of range");
    in[v] = 1;
  }
  for (int s : g.sources)
    if (!in[s]) throw std::invalid_argument("cut must contain every source");
  if (in[g.sink]) throw std::invalid_argument("cut must exclude the sink");
  long long w = 0;
  for (const auto& e : g.edges)
    if (in[e.a] != in[e.b]) w += g.edge_weight(e);
  return w;
}

namespace {

// Undirected max-flow on the antenna-weighted graph. Each edge becomes a pair
// of mutually-reverse arcs with capacity N_a*N_b; pushing on one side refunds
// the other, so opposite traversals cancel and |net flow| <= weight holds per
// edge without extra bookkeeping.
struct FlowNetwork {
  static constexpr long long kInf = 1LL << 40;
  int n = 0;
  std::vector<int> head, nxt, dest;
  std::vector<long long> cap;
  std::vector<long long> init_cap;

  explicit FlowNetwork(int nodes) : n(nodes), head(nodes, -1) {}

  void add_pair(int u, int v, long long cuv, long long cvu) {
    dest.push_back(v);
    cap.push_back(cuv);
    nxt.push_back(head[u]);
    head[u] = static_cast<int>(dest.size()) - 1;
    dest.push_back(u);
    cap.push_back(cvu);
    nxt.push_back(head[v]);
    head[v] = static_cast<int>(dest.size()) - 1;
  }

};

bool reaches(const FlowNetwork& net, const std::vector<long long>& c, int from, int t,
             const std::vector<char>& blocked) {
  if (blocked[from]) return false;
  std::vector<char> seen(net.n, 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (u == t) return true;
    for (int a = net.head[u]; a >= 0; a = net.nxt[a]) {
      const int v = net.dest[a];
      if (c[a] <= 0 || seen[v] || blocked[v]) continue;
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  return false;
}

// Lexicographically smallest simple path by node sequence over arcs with
// positive c: grow greedily, committing to the smallest next node from which
// the target stays reachable. Returns arc indices, empty when unreachable.
std::vector<int> lex_path_arcs(const FlowNetwork& net, const std::vector<long long>& c, int s,
                               int t, bool& found) {
  std::vector<char> visited(net.n, 0);
  std::vector<int> arcs;
  found = false;
  if (!reaches(net, c, s, t, visited)) return arcs;
  int u = s;
  visited[s] = 1;
  while (u != t) {
    std::vector<std::pair<int, int>> cand;  // (dest, arc)
    for (int a = net.head[u]; a >= 0; a = net.nxt[a])
      if (c[a] > 0 && !visited[net.dest[a]]) cand.emplace_back(net.dest[a], a);
    std::sort(cand.begin(), cand.end());
    int chosen = -1;
    for (const auto& [v, a] : cand) {
      if (v == t || reaches(net, c, v, t, visited)) {
        chosen = a;
        break;
      }
    }
    if (chosen < 0) {
      arcs.clear();
      return arcs;  // cannot happen: reachability held when u was committed
    }
    u = net.dest[chosen];
    visited[u] = 1;
    arcs.push_back(chosen);
  }
  found = true;
  return arcs;
}

struct SolvedFlow {
  FlowNetwork net;
  long long value = 0;
  int super_source = -1;  // == sources[0] when single source
  std::vector<int> edge_arc0;  // arc index (a->b direction) per topology edge
};

SolvedFlow solve_max_flow(const NetworkTopology& g) {
  g.check();
  const bool multi = g.sources.size() > 1;
  const int n = g.node_count + (multi ? 1 : 0);
  SolvedFlow sf{FlowNetwork(n)};
  for (const auto& e : g.edges) {
    sf.edge_arc0.push_back(static_cast<int>(sf.net.dest.size()));
    const long long w = g.edge_weight(e);
    sf.net.add_pair(e.a, e.b, w, w);
  }
  int s = g.sources[0];
  if (multi) {
    s = g.node_count;
    for (int src : g.sources) sf.net.add_pair(s, src, FlowNetwork::kInf, 0);
  }
  sf.super_source = s;
  sf.net.init_cap = sf.net.cap;

  while (true) {
    bool found = false;
    const std::vector<int> arcs = lex_path_arcs(sf.net, sf.net.cap, s, g.sink, found);
    if (!found) break;
    long long push = FlowNetwork::kInf;
    for (int a : arcs) push = std::min(push, sf.net.cap[a]);
    for (int a : arcs) {
      sf.net.cap[a] -= push;
      sf.net.cap[a ^ 1] += push;
    }
    sf.value += push;
  }
  return sf;
}

}  // namespace

MinCutResult min_cut(const NetworkTopology& g) {
  SolvedFlow sf = solve_max_flow(g);
  // residual-reachable side of the cut
  std::vector<char> reach(sf.net.n, 0);
  std::vector<int> stack{sf.super_source};
  reach[sf.super_source] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int a = sf.net.head[u]; a >= 0; a = sf.net.nxt[a])
      if (sf.net.cap[a] > 0 && !reach[sf.net.dest[a]]) {
        reach[sf.net.dest[a]] = 1;
        stack.push_back(sf.net.dest[a]);
      }
  }
  MinCutResult res;
  res.weight = sf.value;
  for (int v = 0; v < g.node_count; ++v)
    if (reach[v]) res.witness.members.push_back(v);
  return res;
}

MinCutResult min_cut_exhaustive(const NetworkTopology& g) {
  g.check();
  if (g.node_count > 16) throw std::invalid_argument("exhaustive min-cut limited to 16 nodes");
  std::vector<int> free_nodes;
  for (int v = 0; v < g.node_count; ++v)
    if (v != g.sink && !g.is_source(v)) free_nodes.push_back(v);
  MinCutResult best;
  best.weight = -1;
  const int m = static_cast<int>(free_nodes.size());
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    CutSet cut;
    cut.members = g.sources;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) cut.members.push_back(free_nodes[i]);
    std::sort(cut.members.begin(), cut.members.end());
    const long long w = cut_weight(g, cut);
    if (best.weight < 0 || w < best.weight) {
      best.weight = w;
      best.witness = cut;
    }
  }
  return best;
}

std::vector<Path> max_flow_path_decomposition(const NetworkTopology& g) {
  SolvedFlow sf = solve_max_flow(g);
  if (sf.value == 0) throw std::invalid_argument("sink unreachable from the sources");

  // net positive flow per directed arc of the undirected pair
  std::vector<long long> units(sf.net.dest.size(), 0);
  for (std::size_t i = 0; i < sf.edge_arc0.size(); ++i) {
    const int a0 = sf.edge_arc0[i];
    const long long w = g.edge_weight(g.edges[i]);
    const long long net_ab = w - sf.net.cap[a0];
    if (net_ab > 0)
      units[a0] = net_ab;
    else
      units[a0 ^ 1] = -net_ab;
  }

  std::vector<Path> paths;
  for (long long k = 0; k < sf.value; ++k) {
    // lexicographically smallest simple source->sink walk on remaining units
    bool found = false;
    std::vector<int> arcs;
    int start = -1;
    for (int s : g.sources) {
      arcs = lex_path_arcs(sf.net, units, s, g.sink, found);
      if (found) {
        start = s;
        break;
      }
    }
    if (!found) throw std::runtime_error("flow decomposition failed");  // unreachable
    Path nodes{start};
    for (int a : arcs) {
      --units[a];
      nodes.push_back(sf.net.dest[a]);
    }
    paths.push_back(nodes);
  }
  return paths;
}

DualFlowReport verify_dual_flow(const NetworkTopology& g, const std::vector<Path>& paths) {
  g.check();
  DualFlowReport rep;
  rep.slack.assign(g.edges.size(), 0);
  for (std::size_t i = 0; i < g.edges.size(); ++i) rep.slack[i] = g.edge_weight(g.edges[i]);
  for (const auto& p : paths) {
    if (p.size() < 2 || !g.is_source(p.front()) || p.back() != g.sink)
      throw std::invalid_argument("path must run from a source to the sink");
    std::set<int> seen(p.begin(), p.end());
    if (seen.size() != p.size()) throw std::invalid_argument("path revisits a node");
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
      const int idx = g.edge_index(p[j], p[j + 1]);
      if (idx < 0) throw std::invalid_argument("path uses a missing edge");
      --rep.slack[idx];
    }
  }
  rep.feasible = true;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (rep.slack[i] < 0) {
      rep.feasible = false;
      rep.violations.push_back(g.edges[i]);
    }
  return rep;
}

int max_path_length(const NetworkTopology& g) {
  g.check();
  if (g.node_count > 16) throw std::invalid_argument("max_path_length limited to 16 nodes");
  int best = -1;
  std::vector<char> visited(g.node_count, 0);
  auto dfs = [&](auto&& self, int u, int len) -> void {
    if (u == g.sink) {
      best = std::max(best, len);
      return;
    }
    for (int v : g.neighbors(u)) {
      if (visited[v]) continue;
      visited[v] = 1;
      self(self, v, len + 1);
      visited[v] = 0;
    }
  };
  for (int s : g.sources) {
    std::fill(visited.begin(), visited.end(), 0);
    visited[s] = 1;
    dfs(dfs, s, 0);
  }
  if (best < 0) throw std::invalid_argument("sink unreachable from the sources");
  return best;
}

HamiltonianCycleResult has_hamiltonian_complement_cycle(const NetworkTopology& g) {
  g.check();
  std::vector<int> relays;
  for (int v = 0; v < g.node_count; ++v)
    if (v != g.sink && !g.is_source(v)) relays.push_back(v);
  const int k = static_cast<int>(relays.size());
  if (k > 12) throw std::invalid_argument("relay count limited to 12");
  if (k == 0) return {};
  if (k == 1) return {true, {relays[0]}};
  auto comp = [&](int i, int j) { return !g.has_edge(relays[i], relays[j]); };
  if (k == 2) {
    if (comp(0, 1)) return {true, {relays[0], relays[1]}};
    return {};
  }

  // Held-Karp over the complement graph, cycles anchored at relay index 0
  const int full = (1 << k) - 1;
  std::vector<std::vector<int>> parent(1 << k, std::vector<int>(k, -1));
  std::vector<std::vector<char>> dp(1 << k, std::vector<char>(k, 0));
  dp[1][0] = 1;
  for (int mask = 1; mask <= full; ++mask) {
    if (!(mask & 1)) continue;
    for (int j = 0; j < k; ++j) {
      if (!dp[mask][j]) continue;
      for (int v = 1; v < k; ++v) {
        if (mask & (1 << v)) continue;
        if (!comp(j, v)) continue;
        const int nm = mask | (1 << v);
        if (!dp[nm][v]) {
          dp[nm][v] = 1;
          parent[nm][v] = j;
        }
      }
    }
  }
  for (int j = 1; j < k; ++j) {
    if (!dp[full][j] || !comp(j, 0)) continue;
    std::vector<int> order;
    int mask = full, cur = j;
    while (cur != -1) {
      order.push_back(relays[cur]);
      const int p = parent[mask][cur];
      mask ^= (1 << cur);
      cur = p;
    }
    std::reverse(order.begin(), order.end());
    return {true, order};
  }
  return {};
}

}  // namespace relaydmt
