#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaydmt/propagation.hpp"

namespace relaydmt {

// log2 det of a Hermitian positive definite matrix via Cholesky.
double logdet2_cholesky(const MatrixC& m);

// Bits per frame: log2 det(P_n + P H_T H_T^H) - log2 det(P_n).
double mutual_information(const EquivalentChannel& eq, double power);

// Achievable bits per slot of a non-interfering schedule, amplification
// unclipped. Throws if the schedule interferes.
double rate_ni(const NetworkTopology& g, const Schedule& s, const ChannelRealization& real,
               double power);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};
WilsonInterval wilson_interval(std::int64_t events, std::int64_t trials,
                               double z = 1.959963984540054);

struct RateSpec {
  bool fixed = false;           // fixed: values are bits per channel use
  std::vector<double> values;   // else multiplexing gains, rate_m = r_m log2(P)
  [[nodiscard]] double sum() const;
};

// Bits per channel use carried by a rate sum at a given power.
double rate_bits_per_use(const RateSpec& rate, double rate_sum, double power);

struct TrialPolicy {
  std::int64_t min_trials = 50000;
  std::int64_t max_trials = 20000000;
  std::int64_t target_events = 200;
  std::int64_t batch = 8192;  // stopping decided at batch boundaries only
  bool crn = true;            // common random numbers across the SNR grid
  std::uint64_t seed = 1;
  int workers = 1;
};

struct SnrGridSpec {
  double lo_db = 20.0;
  double hi_db = 40.0;
  double step_db = 5.0;
  [[nodiscard]] std::vector<double> points_db() const;  // strictly increasing
};

struct OutageRecord {
  double snr_db = 0.0;
  double power = 0.0;
  double threshold_bits = 0.0;
  std::int64_t trials = 0;
  std::int64_t outage_count = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool censored = false;  // zero events within the trial budget
};

struct DiversityEstimate {
  bool ok = false;
  double slope = 0.0;  // d-hat
  double intercept = 0.0;
  double std_error = 0.0;
  double window_lo_db = 0.0;
  double window_hi_db = 0.0;
  int points_used = 0;
  std::string note;
};

// Least-squares slope of -log10(p_hat) against log10(P) over records with at
// least target_events outage events; censored records never enter the fit.
DiversityEstimate estimate_diversity(const std::vector<OutageRecord>& records,
                                     std::int64_t target_events);

OutageRecord estimate_outage(const PropagationPlan& plan, double snr_db, const RateSpec& rate,
                             const TrialPolicy& policy, int snr_index = 0,
                             bool reciprocal = true);
OutageRecord estimate_outage_mac(const NetworkTopology& g, int K, int B, double snr_db,
                                 const RateSpec& rate, const TrialPolicy& policy,
                                 int snr_index = 0, bool reciprocal = true);
OutageRecord simulate_af_mac_single_relay(int sources, double snr_db, const RateSpec& rate,
                                          const TrialPolicy& policy, int snr_index = 0);
OutageRecord simulate_ddf_mac_single_relay(int sources, double snr_db, const RateSpec& rate,
                                           const TrialPolicy& policy, int snr_index = 0);

struct SweepResult {
  std::vector<OutageRecord> records;
  bool fit_requested = false;
  DiversityEstimate fit;
};

SweepResult run_p2p_sweep(const NetworkTopology& g, const Schedule& s, const SnrGridSpec& grid,
                          const RateSpec& rate, const TrialPolicy& policy, bool want_fit,
                          bool reciprocal = true);
SweepResult run_mac_rs_sweep(const NetworkTopology& g, int K, int B, const SnrGridSpec& grid,
                             const RateSpec& rate, const TrialPolicy& policy, bool want_fit,
                             bool reciprocal = true);
SweepResult run_af_mac_sweep(int sources, const SnrGridSpec& grid, const RateSpec& rate,
                             const TrialPolicy& policy, bool want_fit);
SweepResult run_ddf_mac_sweep(int sources, const SnrGridSpec& grid, const RateSpec& rate,
                              const TrialPolicy& policy, bool want_fit);

std::string write_outage_csv(const SweepResult& sweep);

}  // namespace relaydmt
