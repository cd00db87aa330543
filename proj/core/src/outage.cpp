#include "relaydmt/outage.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "relaydmt/rng.hpp"

namespace relaydmt {

namespace {

constexpr double kLog2e = 1.4426950408889634;  // 1/ln(2)

double log2_1p(double x) { return std::log1p(x) * kLog2e; }

}  // namespace

double logdet2_cholesky(const MatrixC& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("logdet of a non-square matrix");
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, scale))
    throw std::runtime_error("matrix is not Hermitian");
  Eigen::LLT<MatrixC> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("matrix is not positive definite");
  const auto& l = llt.matrixLLT();
  double acc = 0.0;
  for (int i = 0; i < m.rows(); ++i) acc += std::log(l(i, i).real());
  return 2.0 * acc * kLog2e;
}

double mutual_information(const EquivalentChannel& eq, double power) {
  if (power <= 0.0) throw std::invalid_argument("power must be positive");
  const MatrixC signal = eq.P_n + power * (eq.H_T * eq.H_T.adjoint());
  const double mi = logdet2_cholesky(signal) - logdet2_cholesky(eq.P_n);
  return std::max(0.0, mi);
}

double rate_ni(const NetworkTopology& g, const Schedule& s, const ChannelRealization& real,
               double power) {
  if (!is_non_interfering(g, s))
    throw std::invalid_argument("rate_ni requires a non-interfering schedule");
  const PropagationPlan plan(g, s);
  const UnitaryAssignment unis = UnitaryAssignment::identity(g, s);
  BuildOptions opts;
  opts.clip = false;
  const EquivalentChannel eq = propagate(plan, real, unis, power, opts);
  return mutual_information(eq, power) / static_cast<double>(s.slot_count);
}

WilsonInterval wilson_interval(std::int64_t events, std::int64_t trials, double z) {
  if (trials <= 0 || events < 0 || events > trials)
    throw std::invalid_argument("wilson_interval counts out of range");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(events) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double center = (p + z2n / 2.0) / denom;
  const double half = (z / denom) * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n));
  WilsonInterval w;
  // exact endpoints when the count is degenerate; rounding otherwise leaves
  // a stray ~1e-19 above zero
  w.lo = events == 0 ? 0.0 : std::max(0.0, center - half);
  w.hi = events == trials ? 1.0 : std::min(1.0, center + half);
  return w;
}

double RateSpec::sum() const {
  double s = 0.0;
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("rates must be nonnegative");
    s += v;
  }
  return s;
}

double rate_bits_per_use(const RateSpec& rate, double rate_sum, double power) {
  if (rate.fixed) return rate_sum;
  return rate_sum * std::log2(power);
}

std::vector<double> SnrGridSpec::points_db() const {
  if (hi_db < lo_db) throw std::invalid_argument("snr grid upper end below lower end");
  if (hi_db > lo_db && step_db <= 0.0) throw std::invalid_argument("snr grid step must be positive");
  std::vector<double> pts;
  if (hi_db == lo_db) {
    pts.push_back(lo_db);
    return pts;
  }
  for (double v = lo_db; v <= hi_db + 1e-9; v += step_db) pts.push_back(v);
  return pts;
}

DiversityEstimate estimate_diversity(const std::vector<OutageRecord>& records,
                                     std::int64_t target_events) {
  DiversityEstimate est;
  std::vector<double> x, y;
  bool all_censored = !records.empty();
  for (const OutageRecord& r : records) {
    if (!r.censored) all_censored = false;
    if (r.censored || r.outage_count < target_events || r.p_hat <= 0.0) continue;
    x.push_back(std::log10(r.power));
    y.push_back(-std::log10(r.p_hat));
    if (est.points_used == 0) {
      est.window_lo_db = r.snr_db;
      est.window_hi_db = r.snr_db;
    } else {
      est.window_lo_db = std::min(est.window_lo_db, r.snr_db);
      est.window_hi_db = std::max(est.window_hi_db, r.snr_db);
    }
    ++est.points_used;
  }
  if (est.points_used < 3) {
    est.ok = false;
    std::ostringstream msg;
    msg << "insufficient points for fit: " << est.points_used << " eligible, need 3";
    if (all_censored) msg << " (all points censored)";
    est.note = msg.str();
    return est;
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) {
    est.ok = false;
    est.note = "fit window has no power spread";
    return est;
  }
  est.slope = sxy / sxx;
  est.intercept = my - est.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double res = y[i] - (est.intercept + est.slope * x[i]);
    ss_res += res * res;
  }
  est.std_error = (x.size() > 2) ? std::sqrt(ss_res / (n - 2.0) / sxx) : 0.0;
  est.ok = true;
  return est;
}

namespace {

void check_policy(const TrialPolicy& pol) {
  if (pol.min_trials < 1 || pol.max_trials < pol.min_trials)
    throw std::invalid_argument("trial bounds out of order");
  if (pol.target_events < 1) throw std::invalid_argument("target_events must be positive");
  if (pol.batch < 1) throw std::invalid_argument("batch must be positive");
  if (pol.workers < 1) throw std::invalid_argument("workers must be positive");
}

// Runs trials in fixed-size batches; the stop decision looks only at counts
// aggregated at batch boundaries, so results do not depend on worker count.
template <typename TrialFn>
std::pair<std::int64_t, std::int64_t> run_point_trials(const TrialPolicy& pol, const TrialFn& fn) {
  check_policy(pol);
  std::int64_t done = 0;
  std::int64_t events = 0;
  while (done < pol.max_trials) {
    const std::int64_t want = std::min<std::int64_t>(pol.batch, pol.max_trials - done);
    std::int64_t batch_events = 0;
    if (pol.workers <= 1) {
      for (std::int64_t t = 0; t < want; ++t)
        if (fn(static_cast<std::uint64_t>(done + t))) ++batch_events;
    } else {
      const int ws = pol.workers;
      std::vector<std::int64_t> part(static_cast<std::size_t>(ws), 0);
      std::vector<std::exception_ptr> errs(static_cast<std::size_t>(ws));
      auto lane = [&](int w) {
        try {
          std::int64_t local = 0;
          for (std::int64_t t = w; t < want; t += ws)
            if (fn(static_cast<std::uint64_t>(done + t))) ++local;
          part[static_cast<std::size_t>(w)] = local;
        } catch (...) {
          errs[static_cast<std::size_t>(w)] = std::current_exception();
        }
      };
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(ws - 1));
      for (int w = 1; w < ws; ++w) pool.emplace_back(lane, w);
      lane(0);
      for (std::thread& th : pool) th.join();
      for (const std::exception_ptr& e : errs)
        if (e) std::rethrow_exception(e);
      for (std::int64_t c : part) batch_events += c;
    }
    done += want;
    events += batch_events;
    if (done >= pol.min_trials && events >= pol.target_events) break;
  }
  return {done, events};
}

OutageRecord make_record(double snr_db, double power, double threshold_bits,
                         std::pair<std::int64_t, std::int64_t> counts, const TrialPolicy& pol) {
  OutageRecord rec;
  rec.snr_db = snr_db;
  rec.power = power;
  rec.threshold_bits = threshold_bits;
  rec.trials = counts.first;
  rec.outage_count = counts.second;
  rec.p_hat = static_cast<double>(counts.second) / static_cast<double>(counts.first);
  const WilsonInterval ci = wilson_interval(counts.second, counts.first);
  rec.ci_lo = ci.lo;
  rec.ci_hi = ci.hi;
  rec.censored = (counts.second == 0 && counts.first >= pol.max_trials);
  return rec;
}

std::uint64_t stream_hi(const TrialPolicy& pol, int snr_index) {
  return pol.crn ? 0 : static_cast<std::uint64_t>(snr_index) + 1;
}

bool schedule_needs_unitaries(const NetworkTopology& g, const Schedule& s) {
  for (int i = 0; i < s.path_count(); ++i)
    for (int j = 1; j < s.hops(i); ++j) {
      const int relay = s.paths[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (g.antennas[static_cast<std::size_t>(relay)] > 1) return true;
    }
  return false;
}

}  // namespace

OutageRecord estimate_outage(const PropagationPlan& plan, double snr_db, const RateSpec& rate,
                             const TrialPolicy& policy, int snr_index, bool reciprocal) {
  if (rate.values.size() != 1)
    throw std::invalid_argument("point-to-point mode takes exactly one rate");
  const double power = std::pow(10.0, snr_db / 10.0);
  const double threshold =
      static_cast<double>(plan.sched.slot_count) * rate_bits_per_use(rate, rate.sum(), power);
  // With single-antenna relay stages the random rotations are scalar phases
  // and cancel in the mutual information, so trials skip drawing them.
  const bool want_unis = schedule_needs_unitaries(plan.topo, plan.sched);
  const UnitaryAssignment ident = UnitaryAssignment::identity(plan.topo, plan.sched);
  const std::uint64_t hi = stream_hi(policy, snr_index);
  const auto counts = run_point_trials(policy, [&](std::uint64_t t) {
    RandomStream rng(policy.seed, hi, t);
    const ChannelRealization real = sample_realization(plan.topo, rng, reciprocal);
    const EquivalentChannel eq =
        want_unis ? propagate(plan, real, UnitaryAssignment::sample(plan.topo, plan.sched, rng),
                              power)
                  : propagate(plan, real, ident, power);
    return mutual_information(eq, power) <= threshold;
  });
  return make_record(snr_db, power, threshold, counts, policy);
}

OutageRecord estimate_outage_mac(const NetworkTopology& g, int K, int B, double snr_db,
                                 const RateSpec& rate, const TrialPolicy& policy, int snr_index,
                                 bool reciprocal) {
  const int m_users = static_cast<int>(g.sources.size());
  if (m_users > 8) throw std::invalid_argument("more than 8 sources");
  if (static_cast<int>(rate.values.size()) != m_users)
    throw std::invalid_argument("one rate per source required");
  const double power = std::pow(10.0, snr_db / 10.0);
  const int slots = B * K + 1;
  const int L = B * K;
  const unsigned full = (1u << m_users) - 1u;

  std::vector<double> thr(full + 1, 0.0);
  for (unsigned mask = 1; mask <= full; ++mask) {
    double rsum = 0.0;
    for (int m = 0; m < m_users; ++m)
      if (mask & (1u << m)) rsum += rate.values[static_cast<std::size_t>(m)];
    thr[mask] = static_cast<double>(slots) * rate_bits_per_use(rate, rsum, power);
  }

  const std::uint64_t hi = stream_hi(policy, snr_index);
  const auto counts = run_point_trials(policy, [&](std::uint64_t t) {
    RandomStream rng(policy.seed, hi, t);
    const ChannelRealization real = sample_realization(g, rng, reciprocal);
    const TwoHopMacChannel mac = two_hop_mac_channel(K, B, g, real, power);
    const double ld_pn = logdet2_cholesky(mac.P_n);
    Eigen::VectorXd d(L);
    for (unsigned mask = 1; mask <= full; ++mask) {
      for (int i = 0; i < L; ++i) {
        const int k = mac.relay_of_use[static_cast<std::size_t>(i)];
        double s2 = 0.0;
        for (int m = 0; m < m_users; ++m)
          if (mask & (1u << m))
            s2 += mac.uplink_sq[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - 1)];
        d(i) = s2;
      }
      const MatrixC sig = mac.P_n + power * (mac.A * d.asDiagonal() * mac.A.adjoint());
      const double mi = std::max(0.0, logdet2_cholesky(sig) - ld_pn);
      if (mi <= thr[mask]) return true;
    }
    return false;
  });
  const double rsum_all = rate.sum();
  return make_record(snr_db, power,
                     static_cast<double>(slots) * rate_bits_per_use(rate, rsum_all, power), counts,
                     policy);
}

namespace {

struct StarDraw {
  std::vector<double> h_sq;
  double g_sq = 0.0;
};

// Gain draw order matches the star topology's edge order: uplinks by source
// index, then the relay-sink link.
StarDraw draw_star(RandomStream& rng, int sources) {
  StarDraw d;
  d.h_sq.resize(static_cast<std::size_t>(sources));
  for (int m = 0; m < sources; ++m) d.h_sq[static_cast<std::size_t>(m)] = std::norm(rng.complex_normal());
  d.g_sq = std::norm(rng.complex_normal());
  return d;
}

void check_mac_args(int sources, const RateSpec& rate) {
  if (sources < 1 || sources > 8) throw std::invalid_argument("sources must be in 1..8");
  if (static_cast<int>(rate.values.size()) != sources)
    throw std::invalid_argument("one rate per source required");
}

}  // namespace

OutageRecord simulate_af_mac_single_relay(int sources, double snr_db, const RateSpec& rate,
                                          const TrialPolicy& policy, int snr_index) {
  check_mac_args(sources, rate);
  const double power = std::pow(10.0, snr_db / 10.0);
  const unsigned full = (1u << sources) - 1u;
  std::vector<double> thr(full + 1, 0.0);
  for (unsigned mask = 1; mask <= full; ++mask) {
    double rsum = 0.0;
    for (int m = 0; m < sources; ++m)
      if (mask & (1u << m)) rsum += rate.values[static_cast<std::size_t>(m)];
    thr[mask] = 2.0 * rate_bits_per_use(rate, rsum, power);
  }
  const std::uint64_t hi = stream_hi(policy, snr_index);
  const auto counts = run_point_trials(policy, [&](std::uint64_t t) {
    RandomStream rng(policy.seed, hi, t);
    const StarDraw d = draw_star(rng, sources);
    double h_all = 0.0;
    for (double v : d.h_sq) h_all += v;
    const double a_sq = power / (power * h_all + 1.0);
    const double geff = d.g_sq * a_sq / (1.0 + d.g_sq * a_sq);
    for (unsigned mask = 1; mask <= full; ++mask) {
      double h_s = 0.0;
      for (int m = 0; m < sources; ++m)
        if (mask & (1u << m)) h_s += d.h_sq[static_cast<std::size_t>(m)];
      if (log2_1p(power * h_s * geff) <= thr[mask]) return true;
    }
    return false;
  });
  return make_record(snr_db, power, 2.0 * rate_bits_per_use(rate, rate.sum(), power), counts,
                     policy);
}

OutageRecord simulate_ddf_mac_single_relay(int sources, double snr_db, const RateSpec& rate,
                                           const TrialPolicy& policy, int snr_index) {
  check_mac_args(sources, rate);
  const double power = std::pow(10.0, snr_db / 10.0);
  const unsigned full = (1u << sources) - 1u;
  std::vector<double> bits(full + 1, 0.0);
  for (unsigned mask = 1; mask <= full; ++mask) {
    double rsum = 0.0;
    for (int m = 0; m < sources; ++m)
      if (mask & (1u << m)) rsum += rate.values[static_cast<std::size_t>(m)];
    bits[mask] = rate_bits_per_use(rate, rsum, power);
  }
  const double bits_all = bits[full];
  const std::uint64_t hi = stream_hi(policy, snr_index);
  const auto counts = run_point_trials(policy, [&](std::uint64_t t) {
    RandomStream rng(policy.seed, hi, t);
    const StarDraw d = draw_star(rng, sources);
    // Listening fraction from the exact per-realization decoding constraints.
    double l = 0.0;
    for (unsigned mask = 1; mask <= full; ++mask) {
      double h_s = 0.0;
      for (int m = 0; m < sources; ++m)
        if (mask & (1u << m)) h_s += d.h_sq[static_cast<std::size_t>(m)];
      const double den = log2_1p(power * h_s);
      if (den <= 0.0) return bits[mask] > 0.0;
      l = std::max(l, bits[mask] / den);
    }
    l = std::min(1.0, l);
    return (1.0 - l) * log2_1p(power * d.g_sq) <= bits_all;
  });
  return make_record(snr_db, power, bits_all, counts, policy);
}

namespace {

template <typename PointFn>
SweepResult run_sweep(const SnrGridSpec& grid, const TrialPolicy& policy, bool want_fit,
                      const PointFn& point) {
  SweepResult sweep;
  const std::vector<double> pts = grid.points_db();
  sweep.records.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    sweep.records.push_back(point(pts[i], static_cast<int>(i)));
  sweep.fit_requested = want_fit;
  if (want_fit) sweep.fit = estimate_diversity(sweep.records, policy.target_events);
  return sweep;
}

}  // namespace

SweepResult run_p2p_sweep(const NetworkTopology& g, const Schedule& s, const SnrGridSpec& grid,
                          const RateSpec& rate, const TrialPolicy& policy, bool want_fit,
                          bool reciprocal) {
  const PropagationPlan plan(g, s);
  return run_sweep(grid, policy, want_fit, [&](double snr_db, int idx) {
    return estimate_outage(plan, snr_db, rate, policy, idx, reciprocal);
  });
}

SweepResult run_mac_rs_sweep(const NetworkTopology& g, int K, int B, const SnrGridSpec& grid,
                             const RateSpec& rate, const TrialPolicy& policy, bool want_fit,
                             bool reciprocal) {
  return run_sweep(grid, policy, want_fit, [&](double snr_db, int idx) {
    return estimate_outage_mac(g, K, B, snr_db, rate, policy, idx, reciprocal);
  });
}

SweepResult run_af_mac_sweep(int sources, const SnrGridSpec& grid, const RateSpec& rate,
                             const TrialPolicy& policy, bool want_fit) {
  return run_sweep(grid, policy, want_fit, [&](double snr_db, int idx) {
    return simulate_af_mac_single_relay(sources, snr_db, rate, policy, idx);
  });
}

SweepResult run_ddf_mac_sweep(int sources, const SnrGridSpec& grid, const RateSpec& rate,
                              const TrialPolicy& policy, bool want_fit) {
  return run_sweep(grid, policy, want_fit, [&](double snr_db, int idx) {
    return simulate_ddf_mac_single_relay(sources, snr_db, rate, policy, idx);
  });
}

std::string write_outage_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out.precision(12);
  out << "snr_db,P,threshold_bits,trials,outage_count,p_hat,ci_lo,ci_hi,censored\n";
  for (const OutageRecord& r : sweep.records) {
    out << r.snr_db << "," << r.power << "," << r.threshold_bits << "," << r.trials << ","
        << r.outage_count << "," << r.p_hat << "," << r.ci_lo << "," << r.ci_hi << ","
        << (r.censored ? 1 : 0) << "\n";
  }
  if (sweep.fit_requested) {
    if (sweep.fit.ok) {
      out << "# fit: d_hat=" << sweep.fit.slope << " intercept=" << sweep.fit.intercept
          << " std_error=" << sweep.fit.std_error << " points=" << sweep.fit.points_used
          << " window_db=" << sweep.fit.window_lo_db << ":" << sweep.fit.window_hi_db << "\n";
    } else {
      out << "# fit: unavailable (" << sweep.fit.note << ")\n";
    }
  }
  return out.str();
}

}  // namespace relaydmt
