#include "relaydmt/dmt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "relaydmt/topology.hpp"

namespace relaydmt {

namespace {

double clamp_pos(double v) { return v > 0.0 ? v : 0.0; }

double rate_sum(const std::vector<double>& rates) {
  double s = 0.0;
  for (double r : rates) {
    if (r < 0.0) throw std::invalid_argument("rates must be nonnegative");
    s += r;
  }
  return s;
}

}  // namespace

double dmt_two_hop(int K, int B, double r) {
  if (K < 1 || B < 1) throw std::invalid_argument("K and B must be positive");
  if (r < 0.0) throw std::invalid_argument("r must be nonnegative");
  return clamp_pos(K * (1.0 - r) - r / B);
}

double dmt_mac_lower(int K, int B, const std::vector<double>& rates) {
  if (K < 1 || B < 1) throw std::invalid_argument("K and B must be positive");
  const double rs = rate_sum(rates);
  return clamp_pos(K * (1.0 - rs) - rs / B);
}

double dmt_mac_optimal(int K, const std::vector<double>& rates) {
  if (K < 1) throw std::invalid_argument("K must be positive");
  return K * clamp_pos(1.0 - rate_sum(rates));
}

double dmt_af_mac(const std::vector<double>& rates) {
  return clamp_pos(1.0 - 2.0 * rate_sum(rates));
}

double dmt_ddf_mac(const std::vector<double>& rates) {
  const double rs = rate_sum(rates);
  if (rs >= 1.0) return 0.0;
  return clamp_pos(1.0 - rs / (1.0 - rs));
}

double miso_upper(int K, double r) {
  if (K < 0) throw std::invalid_argument("K must be nonnegative");
  return (K + 1) * clamp_pos(1.0 - r);
}

double dmt_rs_ni_exact(const NetworkTopology& g, const std::vector<Path>& paths, int slot_count,
                       double r) {
  if (r < 0.0) throw std::invalid_argument("r must be nonnegative");
  const int L = static_cast<int>(paths.size());
  if (L < 1) throw std::invalid_argument("at least one path required");
  if (L > 12) throw std::invalid_argument("more than 12 paths");
  if (slot_count < 1) throw std::invalid_argument("slot count must be positive");

  std::vector<std::vector<int>> edge_ids(static_cast<std::size_t>(L));
  double assignments = 1.0;
  for (int i = 0; i < L; ++i) {
    const Path& p = paths[static_cast<std::size_t>(i)];
    if (p.size() < 2) throw std::invalid_argument("path with no hops");
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
      const int id = g.edge_index(p[j], p[j + 1]);
      if (id < 0) throw std::invalid_argument("path uses an absent edge");
      edge_ids[static_cast<std::size_t>(i)].push_back(id);
    }
    assignments *= static_cast<double>(edge_ids[static_cast<std::size_t>(i)].size());
    if (assignments > 1e6) throw std::invalid_argument("hop-assignment space exceeds 1e6");
  }

  const double demand = L - slot_count * r;
  if (demand <= 0.0) return 0.0;

  std::vector<std::size_t> pick(static_cast<std::size_t>(L), 0);
  std::vector<int> chosen(static_cast<std::size_t>(L));
  std::vector<int> mult;
  double best = static_cast<double>(L);
  while (true) {
    for (int i = 0; i < L; ++i)
      chosen[static_cast<std::size_t>(i)] =
          edge_ids[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]];
    std::sort(chosen.begin(), chosen.end());
    mult.clear();
    for (std::size_t a = 0; a < chosen.size();) {
      std::size_t b = a;
      while (b < chosen.size() && chosen[b] == chosen[a]) ++b;
      mult.push_back(static_cast<int>(b - a));
      a = b;
    }
    // Greedy inner optimum: load edges by descending multiplicity, each unit
    // of mu on an edge of multiplicity m covers m units of demand.
    std::sort(mult.begin(), mult.end(), std::greater<int>());
    double rem = demand;
    double cost = 0.0;
    for (int m : mult) {
      const double delta = std::min(1.0, rem / m);
      cost += delta;
      rem -= delta * m;
      if (rem <= 0.0) break;
    }
    best = std::min(best, cost);

    int i = L - 1;
    while (i >= 0) {
      if (++pick[static_cast<std::size_t>(i)] < edge_ids[static_cast<std::size_t>(i)].size())
        break;
      pick[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return best;
}

double dmt_rs_ni_exact(const NetworkTopology& g, const Schedule& s, double r) {
  return dmt_rs_ni_exact(g, s.paths, s.slot_count, r);
}

double dmt_rs_ni_upper(const NetworkTopology& g, double r) {
  return clamp_pos(1.0 - r) * static_cast<double>(min_cut(g).weight);
}

double dmt_rs_ni_lower(const NetworkTopology& g, double r) {
  const int lg = max_path_length(g);
  return clamp_pos(1.0 - lg * r) * static_cast<double>(min_cut(g).weight);
}

double dmt_rs_general_lower(const Schedule& s, double r) {
  if (r < 0.0) throw std::invalid_argument("r must be nonnegative");
  const std::map<Edge, int> beta = beta_counts(s);
  int max_beta = 0;
  for (const auto& [e, c] : beta) max_beta = std::max(max_beta, c);
  if (max_beta == 0) throw std::invalid_argument("schedule has no hops");
  const double L = static_cast<double>(s.path_count());
  const double S = static_cast<double>(s.slot_count);
  return (L / max_beta) * clamp_pos(1.0 - (S / L) * r);
}

int max_diversity(const NetworkTopology& g) { return static_cast<int>(min_cut(g).weight); }

DmtCurve sample_curve(const std::string& label, const std::function<double(double)>& f,
                      double r_max, double step) {
  if (step <= 0.0 || r_max < 0.0) throw std::invalid_argument("bad curve grid");
  DmtCurve curve;
  curve.label = label;
  const int n = static_cast<int>(std::floor(r_max / step + 1e-9));
  curve.points.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double r = i * step;
    curve.points.push_back({r, f(r)});
  }
  return curve;
}

std::string write_curve_csv(const std::vector<DmtCurve>& curves) {
  std::ostringstream out;
  out.precision(12);
  out << "r,d,label\n";
  for (const DmtCurve& c : curves)
    for (const CurvePoint& p : c.points) out << p.r << "," << p.d << "," << c.label << "\n";
  return out.str();
}

}  // namespace relaydmt
