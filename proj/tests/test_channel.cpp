#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "relaydmt/channel.hpp"
#include "relaydmt/propagation.hpp"
#include "test_util.hpp"

using namespace relaydmt;

namespace {

double max_abs_diff(const MatrixC& a, const MatrixC& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

void check_equivalent(const EquivalentChannel& a, const EquivalentChannel& b, double tol) {
  CHECK(max_abs_diff(a.H_T, b.H_T) <= tol);
  CHECK(max_abs_diff(a.Q, b.Q) <= tol);
  CHECK(max_abs_diff(a.P_n, b.P_n) <= tol);
  REQUIRE(a.alphas.size() == b.alphas.size());
  for (const auto& [key, val] : a.alphas) {
    REQUIRE(b.alphas.count(key) == 1);
    CHECK(std::abs(val - b.alphas.at(key)) <= tol);
  }
}

}  // namespace

TEST_CASE("random stream is reproducible and keyed") {
  RandomStream a(42, 3, 7), b(42, 3, 7), c(42, 3, 8), d(43, 3, 7);
  bool all_equal = true, differs_lo = false, differs_seed = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next();
    all_equal = all_equal && (va == b.next());
    differs_lo = differs_lo || (va != c.next());
    differs_seed = differs_seed || (va != d.next());
  }
  CHECK(all_equal);
  CHECK(differs_lo);
  CHECK(differs_seed);
}

TEST_CASE("distribution moments of the stream") {
  RandomStream rng(7, 0, 0);
  const int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0, sc2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sc2 += std::norm(rng.complex_normal());
  }
  CHECK(std::abs(su / n - 0.5) < 0.005);
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(std::abs(sn2 / n - 1.0) < 0.02);
  CHECK(std::abs(sc2 / n - 1.0) < 0.02);  // unit average power
}

TEST_CASE("rotation samples are unitary") {
  RandomStream rng(11, 0, 0);
  for (int n = 1; n <= 4; ++n)
    for (int rep = 0; rep < 50; ++rep) {
      const MatrixC u = sample_haar_unitary(n, rng);
      const double err =
          (u * u.adjoint() - MatrixC::Identity(n, n)).cwiseAbs().maxCoeff();
      CHECK(err <= 1e-10);
    }
  CHECK_THROWS_AS(sample_haar_unitary(0, rng), std::invalid_argument);
}

TEST_CASE("rotation corner entry follows the expected law") {
  // |u11|^2 of a uniformly distributed 3x3 rotation has CDF 1 - (1-x)^2;
  // a biased QR convention would fail this comparison.
  RandomStream rng(13, 0, 0);
  const int n = 2000;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = std::norm(sample_haar_unitary(3, rng)(0, 0));
  std::sort(v.begin(), v.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = v[static_cast<std::size_t>(i)];
    const double cdf = 1.0 - (1.0 - x) * (1.0 - x);
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i + 1) / n));
  }
  CHECK(ks < 0.04);  // 1% critical value is about 0.036 at this sample size
}

TEST_CASE("amplification coefficient") {
  CHECK(amp_coefficient(0.0, 4.0) == doctest::Approx(1.0));          // capped
  CHECK(amp_coefficient(0.0, 4.0, 1.0, false) == doctest::Approx(2.0));
  CHECK(amp_coefficient(1.0, 4.0) == doctest::Approx(std::sqrt(0.8)));
  CHECK(amp_coefficient(3.0, 4.0, 2.0) == doctest::Approx(std::sqrt(4.0 / 14.0)));
  CHECK(amp_coefficient(100.0, 4.0, 1.0, false) ==
        doctest::Approx(std::sqrt(4.0 / 401.0)));
  CHECK_THROWS_AS(amp_coefficient(-1.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(amp_coefficient(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(amp_coefficient(1.0, 4.0, 0.0), std::invalid_argument);
}

TEST_CASE("fading blocks are drawn in edge order") {
  const NetworkTopology g = testutil::load_topo("threehop8_ma.topo");
  RandomStream rng(9, 0, 0);
  const ChannelRealization real = sample_realization(g, rng);
  RandomStream follow(9, 0, 0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const MatrixC& m = real.toward_high[e];
    REQUIRE(m.rows() == g.antennas[static_cast<std::size_t>(g.edges[e].b)]);
    REQUIRE(m.cols() == g.antennas[static_cast<std::size_t>(g.edges[e].a)]);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) CHECK(m(r, c) == follow.complex_normal());
  }
}

TEST_CASE("reciprocal gains transpose, directed gains do not") {
  const NetworkTopology g = testutil::load_topo("singlerelay_ma.topo");
  RandomStream rng(21, 0, 0);
  const ChannelRealization rec = sample_realization(g, rng);
  CHECK(max_abs_diff(rec.gain(g, 1, 0), rec.gain(g, 0, 1).transpose()) == 0.0);
  CHECK_THROWS_AS(rec.gain(g, 0, 2), std::invalid_argument);  // absent edge
  CHECK_THROWS_AS(rec.scalar_gain(g, 0, 1), std::invalid_argument);  // 2x1 block

  RandomStream rng2(21, 0, 0);
  const ChannelRealization dir = sample_realization(g, rng2, false);
  CHECK_FALSE(dir.reciprocal);
  CHECK(max_abs_diff(dir.gain(g, 0, 1), rec.gain(g, 0, 1)) == 0.0);  // same draws
  CHECK(max_abs_diff(dir.gain(g, 1, 0), dir.gain(g, 0, 1).transpose()) > 1e-6);
}

TEST_CASE("gain dump round-trips exactly") {
  const NetworkTopology g = testutil::load_topo("threehop8_ma.topo");
  RandomStream rng(33, 0, 0);
  for (bool reciprocal : {true, false}) {
    CAPTURE(reciprocal);
    const ChannelRealization real = sample_realization(g, rng, reciprocal);
    const ChannelRealization back = load_realization(g, dump_realization(g, real));
    CHECK(back.reciprocal == reciprocal);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      CHECK(max_abs_diff(back.toward_high[e], real.toward_high[e]) == 0.0);
      if (!reciprocal) CHECK(max_abs_diff(back.toward_low[e], real.toward_low[e]) == 0.0);
    }
  }
}

TEST_CASE("gain text errors carry line numbers") {
  const NetworkTopology g = testutil::load_topo("twohop2.topo");
  auto fail_line = [&](const std::string& text) {
    try {
      load_realization(g, text);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };
  const std::string ok =
      "0-1: 1+0i\n0-2: 1+0i\n1-3: 1+0i\n2-3: 1+0i\n";
  CHECK(load_realization(g, ok).reciprocal);
  CHECK(fail_line("0-1 1+0i\n") == 1);                       // missing colon
  CHECK(fail_line("0-3: 1+0i\n") == 1);                      // unknown edge
  CHECK(fail_line("0-1: 1+0i 2+0i\n") == 1);                 // too many entries
  CHECK(fail_line("0-1: \n") == 1);                          // too few entries
  CHECK(fail_line("0-1: 1\n") == 1);                         // not complex
  CHECK(fail_line("0-1: 1+0i\n0-1: 2+0i\n") == 2);           // duplicate
  CHECK(fail_line("0-1: 1+0i\n") == 0);                      // remaining edges missing
  CHECK(fail_line(ok + "1-0: 1+0i\n") == 0);                 // reverse set incomplete
}

TEST_CASE("single-use chain matches the hand formula") {
  const NetworkTopology g = testutil::make_star(1);
  const ChannelRealization real = load_realization(g, "0-1: 0.6+0.8i\n1-2: 2-1i\n");
  const double p = 4.0;
  const Cx h(0.6, 0.8), gd(2.0, -1.0);
  const double alpha = std::sqrt(p / (p * 1.0 + 1.0));  // |h|^2 = 1, below the cap

  const EquivalentChannel closed = two_hop_equivalent_channel(1, 1, g, real, p);
  const Schedule s = build_two_hop_schedule(1, 1);
  const EquivalentChannel imp =
      build_equivalent_channel(g, s, real, UnitaryAssignment::identity(g, s), p);

  for (const EquivalentChannel* eq : {&closed, &imp}) {
    REQUIRE(eq->H_T.rows() == 1);
    CHECK(std::abs(eq->H_T(0, 0) - gd * alpha * h) <= 1e-14);
    CHECK(std::abs(eq->Q(0, 0) - gd * alpha) <= 1e-14);
    CHECK(std::abs(eq->Q(0, 1) - Cx(1.0, 0.0)) <= 1e-14);
    CHECK(std::abs(eq->P_n(0, 0) - Cx(1.0 + std::norm(gd) * alpha * alpha, 0.0)) <= 1e-14);
    CHECK(eq->alphas.at({1, 1}) == doctest::Approx(alpha).epsilon(1e-14));
    CHECK(eq->alphas.at({1, 2}) == 1.0);
  }
}

TEST_CASE("closed form matches impulse propagation on round-robin schedules") {
  RandomStream rng(101, 0, 0);
  for (int K = 1; K <= 4; ++K)
    for (int B = 1; B <= 3; ++B)
      for (bool ring : {false, true})
        for (bool clip : {true, false}) {
          CAPTURE(K);
          CAPTURE(B);
          CAPTURE(ring);
          CAPTURE(clip);
          const NetworkTopology g = testutil::make_star(K, ring);
          const Schedule s = build_two_hop_schedule(K, B);
          const UnitaryAssignment ident = UnitaryAssignment::identity(g, s);
          BuildOptions opts;
          opts.clip = clip;
          for (int rep = 0; rep < 10; ++rep) {
            const ChannelRealization real = sample_realization(g, rng);
            // unclipped amplification scales with sqrt(P); keep P small there
            // so the two evaluation orders stay within absolute tolerance
            const double p = clip ? ((rep % 2 == 0) ? 10.0 : 1000.0) : 2.0;
            const EquivalentChannel a = two_hop_equivalent_channel(K, B, g, real, p, opts);
            const EquivalentChannel b = build_equivalent_channel(g, s, real, ident, p, opts);
            check_equivalent(a, b, 1e-11);
          }
        }
}

TEST_CASE("closed form rejects graphs that are not a relay star") {
  RandomStream rng(5, 0, 0);
  const NetworkTopology direct =
      parse_topology("nodes 4; edges 0-1 0-2 0-3 1-3 2-3; src 0; sink 3\n");
  const ChannelRealization real = sample_realization(direct, rng);
  CHECK_THROWS_AS(two_hop_equivalent_channel(2, 1, direct, real, 10.0), std::invalid_argument);
  const NetworkTopology ma = testutil::load_topo("singlerelay_ma.topo");
  const ChannelRealization real_ma = sample_realization(ma, rng);
  CHECK_THROWS_AS(two_hop_equivalent_channel(1, 1, ma, real_ma, 10.0), std::invalid_argument);
}

TEST_CASE("shared-relay accounting matches the single-user closed form") {
  for (const char* name : {"twohop2.topo", "twohop2_ir.topo"}) {
    CAPTURE(name);
    const NetworkTopology g = testutil::load_topo(name);
    RandomStream rng(55, 0, 0);
    for (int B = 1; B <= 3; ++B)
      for (int rep = 0; rep < 5; ++rep) {
        const ChannelRealization real = sample_realization(g, rng);
        const double p = 50.0;
        const TwoHopMacChannel mac = two_hop_mac_channel(2, B, g, real, p);
        const EquivalentChannel eq = two_hop_equivalent_channel(2, B, g, real, p);
        const int L = 2 * B;
        MatrixC h_diag = MatrixC::Zero(L, L);
        for (int i = 0; i < L; ++i)
          h_diag(i, i) = real.scalar_gain(g, 0, mac.relay_of_use[static_cast<std::size_t>(i)]);
        CHECK(max_abs_diff(mac.A * h_diag, eq.H_T) <= 1e-12);
        CHECK(max_abs_diff(mac.P_n, eq.P_n) <= 1e-12);
        for (int k = 1; k <= 2; ++k)
          CHECK(mac.uplink_sq[0][static_cast<std::size_t>(k - 1)] ==
                doctest::Approx(std::norm(real.scalar_gain(g, 0, k))).epsilon(1e-14));
      }
  }
}

TEST_CASE("multi-antenna endpoints produce the rank-one relay map") {
  const NetworkTopology g = testutil::load_topo("singlerelay_ma.topo");
  RandomStream rng(77, 0, 0);
  const ChannelRealization real = sample_realization(g, rng);
  Schedule s;
  s.paths = {{0, 1, 2}};
  s.timing = {{1, 2}};
  s.slot_count = 2;
  const double p = 16.0;
  const EquivalentChannel eq =
      build_equivalent_channel(g, s, real, UnitaryAssignment::identity(g, s), p);
  const MatrixC h = real.gain(g, 0, 1);   // 1x2
  const MatrixC gd = real.gain(g, 1, 2);  // 2x1
  const double alpha = amp_coefficient(h.squaredNorm(), p, 1.0);
  REQUIRE(eq.H_T.rows() == 2);
  REQUIRE(eq.H_T.cols() == 2);
  CHECK(max_abs_diff(eq.H_T, MatrixC(alpha * (gd * h))) <= 1e-13);
  CHECK(max_abs_diff(eq.Q.leftCols(1), MatrixC(alpha * gd)) <= 1e-13);
  CHECK(max_abs_diff(eq.Q.rightCols(2), MatrixC(MatrixC::Identity(2, 2))) == 0.0);
  CHECK(eq.alphas.at({1, 1}) == doctest::Approx(alpha).epsilon(1e-14));
}

TEST_CASE("relay rotations leave the noise floor intact") {
  const NetworkTopology g = testutil::load_topo("threehop8_ma.topo");
  const Schedule s = build_sequential_maxflow_schedule(g, 1);
  RandomStream rng(202, 0, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const ChannelRealization real = sample_realization(g, rng);
    const UnitaryAssignment unis = UnitaryAssignment::sample(g, s, rng);
    const EquivalentChannel eq = build_equivalent_channel(g, s, real, unis, 25.0);
    Eigen::SelfAdjointEigenSolver<MatrixC> es(eq.P_n);
    CHECK(es.eigenvalues().minCoeff() >= 1.0 - 1e-10);
    for (const auto& [key, val] : eq.alphas) {
      CHECK(val > 0.0);
      CHECK(val <= 1.0);
    }
  }
}

TEST_CASE("forward schedules assemble block lower-triangular transfer matrices") {
  const NetworkTopology g = testutil::load_topo("twohop2_ir.topo");
  const Schedule s = build_two_hop_schedule(2, 2);
  RandomStream rng(303, 0, 0);
  const ChannelRealization real = sample_realization(g, rng);
  const EquivalentChannel eq =
      build_equivalent_channel(g, s, real, UnitaryAssignment::identity(g, s), 10.0);
  for (int r = 0; r < eq.H_T.rows(); ++r)
    for (int c = r + 1; c < eq.H_T.cols(); ++c) CHECK(std::abs(eq.H_T(r, c)) == 0.0);
}

TEST_CASE("reversed-causality schedules become triangular after the block flip") {
  const NetworkTopology g = testutil::load_topo("fdtriangle3.topo");
  const Schedule s = build_pipelined_schedule(g, 2);
  REQUIRE(s.reversed_causality());
  RandomStream rng(404, 0, 0);
  const ChannelRealization real = sample_realization(g, rng);
  const EquivalentChannel eq =
      build_equivalent_channel(g, s, real, UnitaryAssignment::identity(g, s), 10.0);
  REQUIRE(eq.out_block == std::vector<int>{3, 2, 1, 0});  // assembled order is flipped
  for (int r = 0; r < eq.H_T.rows(); ++r)
    for (int c = r + 1; c < eq.H_T.cols(); ++c) CHECK(std::abs(eq.H_T(r, c)) == 0.0);
  // the late paths never hear the early ones, only the reverse
  bool any_lower = false;
  for (int r = 0; r < eq.H_T.rows(); ++r)
    for (int c = 0; c < r; ++c) any_lower = any_lower || std::abs(eq.H_T(r, c)) > 1e-12;
  CHECK(any_lower);
}
