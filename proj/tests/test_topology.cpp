#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "relaydmt/topology.hpp"
#include "test_util.hpp"

using namespace relaydmt;

namespace {

int parse_fail_line(const std::string& text) {
  try {
    parse_topology(text);
  } catch (const ParseError& e) {
    return e.line;
  }
  return -1;
}

void check_equal(const NetworkTopology& a, const NetworkTopology& b) {
  CHECK(a.node_count == b.node_count);
  CHECK(a.antennas == b.antennas);
  CHECK(a.edges == b.edges);
  CHECK(a.sources == b.sources);
  CHECK(a.sink == b.sink);
  CHECK(a.full_duplex == b.full_duplex);
}

bool valid_source_sink_path(const NetworkTopology& g, const Path& p) {
  if (p.size() < 2 || !g.is_source(p.front()) || p.back() != g.sink) return false;
  if (std::set<int>(p.begin(), p.end()).size() != p.size()) return false;
  for (std::size_t j = 0; j + 1 < p.size(); ++j)
    if (!g.has_edge(p[j], p[j + 1])) return false;
  return true;
}

}  // namespace

TEST_CASE("parses the basic sections with defaults") {
  const NetworkTopology g = testutil::load_topo("twohop2.topo");
  CHECK(g.node_count == 4);
  CHECK(g.antennas == std::vector<int>{1, 1, 1, 1});
  CHECK(g.edges == std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  CHECK(g.sources == std::vector<int>{0});
  CHECK(g.sink == 3);
  CHECK_FALSE(g.full_duplex);
  CHECK(g.relay_count() == 2);
}

TEST_CASE("parses antenna counts, multiple sources and the duplex flag") {
  const NetworkTopology ma = testutil::load_topo("threehop8_ma.topo");
  CHECK(ma.antennas == std::vector<int>{2, 1, 1, 1, 1, 2});
  CHECK(ma.edge_weight(Edge{0, 1}) == 2);
  CHECK(ma.edge_weight(Edge{1, 3}) == 1);

  const NetworkTopology mac = testutil::load_topo("mac2.topo");
  CHECK(mac.sources == std::vector<int>{0, 1});

  const NetworkTopology fd = testutil::load_topo("fdtriangle3.topo");
  CHECK(fd.full_duplex);
}

TEST_CASE("serialization round-trips every fixture") {
  for (const char* name : {"twohop2.topo", "twohop2_ir.topo", "star3.topo", "threehop10.topo",
                           "threehop8_ma.topo", "singlerelay_ma.topo", "mac2.topo",
                           "fdtriangle3.topo"}) {
    CAPTURE(name);
    const NetworkTopology g = testutil::load_topo(name);
    check_equal(g, parse_topology(serialize_topology(g)));
  }
}

TEST_CASE("parse errors carry the offending line number") {
  CHECK(parse_fail_line("nodes 4; edges 0-1\n0-5; src 0; sink 3\n") == 2);  // label out of range
  CHECK(parse_fail_line("nodes 4; edges 0-1\n\n1-1; src 0; sink 3\n") == 3);  // self loop
  CHECK(parse_fail_line("nodes 4; edges 0-1 1-0; src 0; sink 3\n") == 1);  // duplicate edge
  CHECK(parse_fail_line("nodes 4; edges 01; src 0; sink 3\n") == 1);       // missing dash
  CHECK(parse_fail_line("nodes 4; edges 0-3;\n\nsrc 0; sink 0\n") == 3);   // sink as source
  CHECK(parse_fail_line("nodes 4; ant\n1; edges 0-1; src 0; sink 3\n") == 2);
  CHECK(parse_fail_line("nodes 4; ant\n1:0; edges 0-1; src 0; sink 3\n") == 2);
  CHECK(parse_fail_line("nodes 4; edges 0-1; src 0; sink 3;\n\n\n\nbogus x\n") == 5);
  CHECK(parse_fail_line("nodes 1; src 0; sink 0\n") == 1);
  CHECK(parse_fail_line("edges 0-1; src 0; sink 1\n") == 1);   // missing nodes
  CHECK(parse_fail_line("nodes 2; edges 0-1; sink 1\n") == 1); // missing src
  CHECK(parse_fail_line("nodes 2; edges 0-1; src 0\n") == 1);  // missing sink
  CHECK(parse_fail_line("nodes 4; edges 0-1; src 0; sink 3;\n\n\n\nfull_duplex on\n") == 5);
  CHECK(parse_fail_line("nodes 4;\nnodes 4; edges 0-1; src 0; sink 3\n") == 2);
}

TEST_CASE("comments and blank lines are ignored") {
  const NetworkTopology g = parse_topology(
      "# relay diamond\nnodes 4; # four nodes\n\nedges 0-1 0-2 1-3 2-3;\nsrc 0;\nsink 3\n");
  check_equal(g, testutil::load_topo("twohop2.topo"));
}

TEST_CASE("edge lookup and neighbor lists") {
  const NetworkTopology g = testutil::load_topo("twohop2.topo");
  CHECK(g.has_edge(1, 0));
  CHECK(g.edge_index(3, 1) == 2);
  CHECK(g.edge_index(1, 2) == -1);
  CHECK(g.edge_index(2, 2) == -1);
  CHECK(g.neighbors(0) == std::vector<int>{1, 2});
  CHECK(g.neighbors(3) == std::vector<int>{1, 2});
}

TEST_CASE("cut weight sums antenna products across the boundary") {
  const NetworkTopology g = testutil::load_topo("threehop8_ma.topo");
  CHECK(cut_weight(g, {{0}}) == 4);
  CHECK(cut_weight(g, {{0, 1, 2}}) == 4);
  CHECK(cut_weight(g, {{0, 1}}) == 4);  // 0-2 (2) + 1-3 + 1-4
  CHECK_THROWS_AS(cut_weight(g, {{1}}), std::invalid_argument);         // omits the source
  CHECK_THROWS_AS(cut_weight(g, {{0, 5}}), std::invalid_argument);      // contains the sink
  const NetworkTopology mac = testutil::load_topo("mac2.topo");
  CHECK_THROWS_AS(cut_weight(mac, {{0}}), std::invalid_argument);       // omits source 1
  CHECK(cut_weight(mac, {{0, 1}}) == 4);
  CHECK(cut_weight(mac, {{0, 1, 2, 3}}) == 2);
}

TEST_CASE("min cut on the reference networks") {
  CHECK(min_cut(testutil::load_topo("twohop2.topo")).weight == 2);
  CHECK(min_cut(testutil::load_topo("star3.topo")).weight == 3);
  CHECK(min_cut(testutil::load_topo("threehop10.topo")).weight == 2);
  CHECK(min_cut(testutil::load_topo("threehop8_ma.topo")).weight == 4);
  CHECK(min_cut(testutil::load_topo("singlerelay_ma.topo")).weight == 2);
  CHECK(min_cut(testutil::load_topo("mac2.topo")).weight == 2);
  for (int k = 1; k <= 6; ++k) CHECK(min_cut(testutil::make_star(k)).weight == k);
}

TEST_CASE("min cut witness is an admissible cut achieving the weight") {
  for (const char* name : {"twohop2.topo", "star3.topo", "threehop8_ma.topo", "mac2.topo"}) {
    CAPTURE(name);
    const NetworkTopology g = testutil::load_topo(name);
    const MinCutResult res = min_cut(g);
    CHECK(cut_weight(g, res.witness) == res.weight);
  }
}

TEST_CASE("separated source and sink give a zero cut and no decomposition") {
  const NetworkTopology g = parse_topology("nodes 4; edges 0-1; src 0; sink 3\n");
  CHECK(min_cut(g).weight == 0);
  CHECK(min_cut_exhaustive(g).weight == 0);
  CHECK_THROWS_AS(max_flow_path_decomposition(g), std::invalid_argument);
  CHECK_THROWS_AS(max_path_length(g), std::invalid_argument);
}

TEST_CASE("min cut agrees with exhaustive search on random graphs") {
  RandomStream rng(2024, 0, 0);
  for (int iter = 0; iter < 200; ++iter) {
    CAPTURE(iter);
    const NetworkTopology g = testutil::random_graph(rng, 10, 12, 3);
    const MinCutResult fast = min_cut(g);
    const MinCutResult brute = min_cut_exhaustive(g);
    REQUIRE(fast.weight == brute.weight);
    CHECK(cut_weight(g, fast.witness) == fast.weight);
    CHECK(cut_weight(g, brute.witness) == brute.weight);
  }
}

TEST_CASE("flow decomposition is deterministic, feasible and cut-sized") {
  RandomStream rng(77, 0, 0);
  for (int iter = 0; iter < 120; ++iter) {
    CAPTURE(iter);
    const NetworkTopology g = testutil::random_graph(rng, 9, 10, 2);
    const MinCutResult cut = min_cut(g);
    if (cut.weight == 0) continue;
    const std::vector<Path> paths = max_flow_path_decomposition(g);
    REQUIRE(static_cast<long long>(paths.size()) == cut.weight);
    for (const Path& p : paths) CHECK(valid_source_sink_path(g, p));
    CHECK(std::is_sorted(paths.begin(), paths.end()));
    CHECK(max_flow_path_decomposition(g) == paths);
    const DualFlowReport dual = verify_dual_flow(g, paths);
    CHECK(dual.feasible);
    CHECK(dual.violations.empty());
  }
}

TEST_CASE("decomposition prefers lexicographically smallest routes") {
  const NetworkTopology g = testutil::load_topo("threehop8_ma.topo");
  const std::vector<Path> expect = {{0, 1, 3, 5}, {0, 1, 4, 5}, {0, 2, 3, 5}, {0, 2, 4, 5}};
  CHECK(max_flow_path_decomposition(g) == expect);
  const NetworkTopology star = testutil::load_topo("star3.topo");
  const std::vector<Path> star_expect = {{0, 1, 4}, {0, 2, 4}, {0, 3, 4}};
  CHECK(max_flow_path_decomposition(star) == star_expect);
}

TEST_CASE("dual check reports the overloaded edge") {
  const NetworkTopology g = testutil::load_topo("twohop2.topo");
  const std::vector<Path> ok = {{0, 1, 3}, {0, 2, 3}};
  CHECK(verify_dual_flow(g, ok).feasible);
  const std::vector<Path> bad = {{0, 1, 3}, {0, 1, 3}};
  const DualFlowReport rep = verify_dual_flow(g, bad);
  CHECK_FALSE(rep.feasible);
  REQUIRE(rep.violations.size() == 2);
  CHECK(rep.violations[0] == Edge{0, 1});
  CHECK(rep.violations[1] == Edge{1, 3});
  CHECK(rep.slack[g.edge_index(0, 1)] == -1);
  CHECK(rep.slack[g.edge_index(0, 2)] == 1);
  CHECK_THROWS_AS(verify_dual_flow(g, {{0, 3}}), std::invalid_argument);   // absent edge
  CHECK_THROWS_AS(verify_dual_flow(g, {{1, 3}}), std::invalid_argument);   // not a source
  CHECK_THROWS_AS(verify_dual_flow(g, {{0, 1, 0, 1, 3}}), std::invalid_argument);
}

TEST_CASE("longest route length") {
  CHECK(max_path_length(testutil::load_topo("twohop2.topo")) == 2);
  CHECK(max_path_length(testutil::load_topo("star3.topo")) == 2);
  CHECK(max_path_length(testutil::load_topo("threehop10.topo")) == 5);
  CHECK(max_path_length(testutil::load_topo("threehop8_ma.topo")) == 5);
  CHECK(max_path_length(testutil::load_topo("singlerelay_ma.topo")) == 2);
}

TEST_CASE("relay orderings with non-adjacent consecutive relays") {
  const HamiltonianCycleResult two = has_hamiltonian_complement_cycle(testutil::load_topo("twohop2.topo"));
  CHECK(two.exists);
  CHECK(two.ordering == std::vector<int>{1, 2});
  CHECK_FALSE(has_hamiltonian_complement_cycle(testutil::load_topo("twohop2_ir.topo")).exists);

  const NetworkTopology star = testutil::load_topo("star3.topo");
  const HamiltonianCycleResult res = has_hamiltonian_complement_cycle(star);
  REQUIRE(res.exists);
  REQUIRE(res.ordering.size() == 3);
  for (std::size_t i = 0; i < res.ordering.size(); ++i) {
    const int a = res.ordering[i];
    const int b = res.ordering[(i + 1) % res.ordering.size()];
    CHECK_FALSE(star.has_edge(a, b));
  }

  // fully connected relay layer: no admissible ordering
  CHECK_FALSE(has_hamiltonian_complement_cycle(testutil::load_topo("threehop10.topo")).exists);

  const NetworkTopology single = testutil::load_topo("singlerelay_ma.topo");
  const HamiltonianCycleResult one = has_hamiltonian_complement_cycle(single);
  CHECK(one.exists);
  CHECK(one.ordering == std::vector<int>{1});
}

TEST_CASE("structural checks reject malformed graphs") {
  NetworkTopology g = testutil::load_topo("twohop2.topo");
  g.antennas[1] = 0;
  CHECK_THROWS_AS(g.check(), std::invalid_argument);
  g = testutil::load_topo("twohop2.topo");
  std::swap(g.edges[0], g.edges[1]);
  CHECK_THROWS_AS(g.check(), std::invalid_argument);
  g = testutil::load_topo("twohop2.topo");
  g.sources = {3};
  CHECK_THROWS_AS(g.check(), std::invalid_argument);
  g = testutil::load_topo("twohop2.topo");
  g.sources.clear();
  CHECK_THROWS_AS(g.check(), std::invalid_argument);
}
