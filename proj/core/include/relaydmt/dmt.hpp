#pragma once

#include <functional>
#include <string>
#include <vector>

#include "relaydmt/schedule.hpp"

namespace relaydmt {

// Closed forms. Clamps to zero are applied after full-precision evaluation.
double dmt_two_hop(int K, int B, double r);
double dmt_mac_lower(int K, int B, const std::vector<double>& rates);
double dmt_mac_optimal(int K, const std::vector<double>& rates);
double dmt_af_mac(const std::vector<double>& rates);
double dmt_ddf_mac(const std::vector<double>& rates);
double miso_upper(int K, double r);

// Exact optimum of min sum(mu_e) over 0 <= mu <= 1 with
// sum_i max_j mu_edge(i,j) >= L - S r, by hop-assignment enumeration with a
// greedy inner step. Requires at most 12 paths and 1e6 assignments.
double dmt_rs_ni_exact(const NetworkTopology& g, const std::vector<Path>& paths, int slot_count,
                       double r);
double dmt_rs_ni_exact(const NetworkTopology& g, const Schedule& s, double r);

double dmt_rs_ni_upper(const NetworkTopology& g, double r);   // (1-r)+ * min cut
double dmt_rs_ni_lower(const NetworkTopology& g, double r);   // (1 - l_G r)+ * min cut
double dmt_rs_general_lower(const Schedule& s, double r);     // (L/max beta)(1 - (S/L) r)+

// Antenna-weighted min cut; zero when sources and sink are disconnected.
int max_diversity(const NetworkTopology& g);

struct CurvePoint {
  double r = 0.0;
  double d = 0.0;
};
struct DmtCurve {
  std::string label;
  std::vector<CurvePoint> points;
};

DmtCurve sample_curve(const std::string& label, const std::function<double(double)>& f,
                      double r_max = 1.05, double step = 0.01);

// Rows `r,d,label`, curves concatenated under one header.
std::string write_curve_csv(const std::vector<DmtCurve>& curves);

}  // namespace relaydmt
