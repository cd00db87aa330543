#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaydmt/dmt.hpp"
#include "relaydmt/outage.hpp"

namespace fs = std::filesystem;
using namespace relaydmt;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kUsage = 2;
constexpr int kInput = 3;
constexpr int kFitUnavailable = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << content;
}

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> settings;
  std::vector<std::string> outputs;
  std::string started;

  void write(const fs::path& out_dir) const {
    std::ostringstream m;
    m << "command: " << command << "\n";
    m << "version: " << RELAY_DMT_VERSION << "\n";
    m << "started: " << started << "\n";
    m << "finished: " << now_utc() << "\n";
    for (const auto& [k, v] : settings) m << k << " = " << v << "\n";
    m << "outputs:";
    for (const std::string& o : outputs) m << " " << o;
    m << "\n";
    write_file(out_dir / "manifest.txt", m.str());
  }
};

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_on_off(const std::string& v, const std::string& key) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw InputError("bad boolean for " + key + ": " + v);
}

// Simulation settings assembled from defaults, then a config file, then flags.
struct SimSettings {
  std::string mode = "p2p";
  std::string topology_src;  // file path or "inline: ..."
  std::string schedule_src;
  fs::path base_dir = ".";
  RateSpec rate;
  bool have_rate = false;
  SnrGridSpec grid{20.0, 40.0, 5.0};
  TrialPolicy policy;
  bool seed_from_config = false;
  int K = 0;
  int B = 1;
  int M = 0;
  bool fit = false;
  bool reciprocal = true;
  std::string out_dir = ".";
  std::string stem = "outage";
};

SnrGridSpec parse_snr(const std::string& text) {
  SnrGridSpec g;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  try {
    if (parts.size() == 1) {
      g.lo_db = g.hi_db = std::stod(parts[0]);
      g.step_db = 1.0;
    } else if (parts.size() == 3) {
      g.lo_db = std::stod(parts[0]);
      g.hi_db = std::stod(parts[1]);
      g.step_db = std::stod(parts[2]);
    } else {
      throw std::invalid_argument("");
    }
  } catch (const std::exception&) {
    throw UsageError("bad snr grid '" + text + "', expected lo:hi:step or a single point");
  }
  return g;
}

RateSpec parse_rate_words(const std::string& kind, const std::string& list) {
  RateSpec r;
  if (kind == "fixed")
    r.fixed = true;
  else if (kind == "mux")
    r.fixed = false;
  else
    throw InputError("rate must be 'fixed <R>' or 'mux <r1,r2,...>'");
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      r.values.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InputError("bad rate value '" + tok + "'");
    }
  }
  if (r.values.empty()) throw InputError("rate list is empty");
  return r;
}

void apply_config_line(SimSettings& s, const std::string& key, const std::string& val) {
  try {
    if (key == "mode") {
      s.mode = val;
    } else if (key == "topology") {
      s.topology_src = val;
    } else if (key == "schedule") {
      s.schedule_src = val;
    } else if (key == "rate") {
      const std::size_t sp = val.find(' ');
      if (sp == std::string::npos) throw InputError("rate needs a kind and values");
      s.rate = parse_rate_words(trim(val.substr(0, sp)), trim(val.substr(sp + 1)));
      s.have_rate = true;
    } else if (key == "snr") {
      s.grid = parse_snr(val);
    } else if (key == "seed") {
      s.policy.seed = std::stoull(val);
      s.seed_from_config = true;
    } else if (key == "workers") {
      s.policy.workers = std::stoi(val);
    } else if (key == "trials_min") {
      s.policy.min_trials = std::stoll(val);
    } else if (key == "trials_max") {
      s.policy.max_trials = std::stoll(val);
    } else if (key == "events") {
      s.policy.target_events = std::stoll(val);
    } else if (key == "batch") {
      s.policy.batch = std::stoll(val);
    } else if (key == "crn") {
      s.policy.crn = parse_on_off(val, key);
    } else if (key == "reciprocal") {
      s.reciprocal = parse_on_off(val, key);
    } else if (key == "fit") {
      s.fit = parse_on_off(val, key);
    } else if (key == "K") {
      s.K = std::stoi(val);
    } else if (key == "B") {
      s.B = std::stoi(val);
    } else if (key == "M") {
      s.M = std::stoi(val);
    } else if (key == "out") {
      s.out_dir = val;
    } else if (key == "stem") {
      s.stem = val;
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("bad value for config key '" + key + "': " + val);
  }
}

void load_config(SimSettings& s, const fs::path& path) {
  const std::string text = read_file(path);
  s.base_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    apply_config_line(s, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

// Complete bipartite two-hop star: sources 0..M-1, relays M..M+K-1, sink M+K.
NetworkTopology make_star(int sources, int K) {
  NetworkTopology g;
  g.node_count = sources + K + 1;
  g.antennas.assign(static_cast<std::size_t>(g.node_count), 1);
  for (int m = 0; m < sources; ++m) {
    for (int k = 0; k < K; ++k) g.edges.push_back(make_edge(m, sources + k));
    g.sources.push_back(m);
  }
  for (int k = 0; k < K; ++k) g.edges.push_back(make_edge(sources + k, sources + K));
  std::sort(g.edges.begin(), g.edges.end());
  g.sink = sources + K;
  g.check();
  return g;
}

std::string inline_payload(const std::string& src) {
  std::string body = trim(src.substr(std::string("inline:").size()));
  return body;
}

NetworkTopology resolve_topology(const SimSettings& s, bool star_ok) {
  if (s.topology_src.empty()) {
    const int sources = (s.mode == "mac_rs") ? std::max(1, s.M) : 1;
    if (!star_ok || s.K < 1)
      throw UsageError("no topology given; supply --topology or --K for a two-hop star");
    return make_star(sources, s.K);
  }
  if (s.topology_src.rfind("inline:", 0) == 0)
    return parse_topology(inline_payload(s.topology_src));
  return parse_topology(read_file(s.base_dir / s.topology_src));
}

Schedule resolve_schedule(const SimSettings& s, const NetworkTopology& g) {
  if (s.schedule_src.empty()) {
    if (s.K < 1) throw UsageError("no schedule given; supply --schedule or --K/--B");
    return build_two_hop_schedule(s.K, s.B);
  }
  std::string text;
  if (s.schedule_src.rfind("inline:", 0) == 0) {
    text = inline_payload(s.schedule_src);
    for (char& c : text)
      if (c == '|') c = '\n';
  } else {
    text = read_file(s.base_dir / s.schedule_src);
  }
  return parse_schedule(text, g);
}

void settings_into_manifest(const SimSettings& s, Manifest& man) {
  std::ostringstream rate;
  if (s.have_rate) {
    rate << (s.rate.fixed ? "fixed" : "mux");
    for (std::size_t i = 0; i < s.rate.values.size(); ++i)
      rate << (i ? "," : " ") << s.rate.values[i];
  }
  std::ostringstream snr;
  snr << s.grid.lo_db << ":" << s.grid.hi_db << ":" << s.grid.step_db;
  man.settings = {
      {"mode", s.mode},
      {"topology", s.topology_src.empty() ? "(two-hop star)" : s.topology_src},
      {"schedule", s.schedule_src.empty() ? "(round-robin builder)" : s.schedule_src},
      {"rate", rate.str()},
      {"snr", snr.str()},
      {"seed", std::to_string(s.policy.seed)},
      {"workers", std::to_string(s.policy.workers)},
      {"trials_min", std::to_string(s.policy.min_trials)},
      {"trials_max", std::to_string(s.policy.max_trials)},
      {"events", std::to_string(s.policy.target_events)},
      {"batch", std::to_string(s.policy.batch)},
      {"crn", s.policy.crn ? "on" : "off"},
      {"reciprocal", s.reciprocal ? "on" : "off"},
      {"fit", s.fit ? "on" : "off"},
      {"K", std::to_string(s.K)},
      {"B", std::to_string(s.B)},
      {"M", std::to_string(s.M)},
  };
}

int cmd_simulate(SimSettings s) {
  if (s.mode != "p2p" && s.mode != "mac_rs" && s.mode != "af" && s.mode != "ddf")
    throw UsageError("unknown mode '" + s.mode + "'");
  if (!s.have_rate) throw UsageError("rate required: --R <bits> or --r <gains>");
  if (s.policy.target_events < 100) throw UsageError("events must be at least 100");
  for (double v : s.rate.values)
    if (v < 0.0) throw UsageError("rates must be nonnegative");

  Manifest man;
  man.command = "simulate";
  man.started = now_utc();

  SweepResult sweep;
  if (s.mode == "p2p") {
    if (s.rate.values.size() != 1) throw UsageError("p2p mode takes exactly one rate");
    const NetworkTopology g = resolve_topology(s, true);
    const Schedule sch = resolve_schedule(s, g);
    sweep = run_p2p_sweep(g, sch, s.grid, s.rate, s.policy, s.fit, s.reciprocal);
  } else if (s.mode == "mac_rs") {
    if (s.M < 1) s.M = static_cast<int>(s.rate.values.size());
    if (s.K < 1) throw UsageError("mac_rs mode requires --K");
    if (static_cast<int>(s.rate.values.size()) == 1 && s.M > 1)
      s.rate.values.assign(static_cast<std::size_t>(s.M), s.rate.values[0]);
    const NetworkTopology g = resolve_topology(s, true);
    sweep = run_mac_rs_sweep(g, s.K, s.B, s.grid, s.rate, s.policy, s.fit, s.reciprocal);
  } else {
    if (s.M < 1) s.M = static_cast<int>(s.rate.values.size());
    if (static_cast<int>(s.rate.values.size()) == 1 && s.M > 1)
      s.rate.values.assign(static_cast<std::size_t>(s.M), s.rate.values[0]);
    sweep = (s.mode == "af") ? run_af_mac_sweep(s.M, s.grid, s.rate, s.policy, s.fit)
                             : run_ddf_mac_sweep(s.M, s.grid, s.rate, s.policy, s.fit);
  }

  const fs::path out_dir(s.out_dir);
  const fs::path csv_path = out_dir / (s.stem + ".csv");
  write_file(csv_path, write_outage_csv(sweep));
  settings_into_manifest(s, man);
  man.outputs.push_back(s.stem + ".csv");
  man.write(out_dir);
  std::cout << "wrote " << csv_path.string() << "\n";
  if (s.fit) {
    if (!sweep.fit.ok) {
      std::cerr << "fit unavailable: " << sweep.fit.note << "\n";
      return kFitUnavailable;
    }
    std::cout << "d_hat = " << sweep.fit.slope << " (std_error " << sweep.fit.std_error << ", "
              << sweep.fit.points_used << " points, window " << sweep.fit.window_lo_db << "-"
              << sweep.fit.window_hi_db << " dB)\n";
  }
  return kOk;
}

struct AnalyzeOpts {
  std::string curve;
  int K = 2;
  int B = 1;
  int M = 2;
  double sym_r = -1.0;
  std::string topology;
  std::string schedule;
  double r_max = -1.0;
  double step = 0.01;
  std::string out_dir = ".";
  std::string stem;
};

int cmd_analyze(const AnalyzeOpts& o) {
  Manifest man;
  man.command = "analyze";
  man.started = now_utc();

  std::vector<DmtCurve> curves;
  std::function<double(double)> f;
  double default_rmax = 1.05;

  NetworkTopology g;
  Schedule sch;
  if (o.curve == "two_hop") {
    if (o.K < 1 || o.B < 1) throw UsageError("two_hop curve requires --K >= 1 and --B >= 1");
    f = [&o](double r) { return dmt_two_hop(o.K, o.B, r); };
  } else if (o.curve == "af_mac" || o.curve == "ddf_mac") {
    if (o.M < 1) throw UsageError("MAC curves require --M >= 1");
    const bool af = (o.curve == "af_mac");
    f = [&o, af](double r) {
      const std::vector<double> rates(static_cast<std::size_t>(o.M), r);
      return af ? dmt_af_mac(rates) : dmt_ddf_mac(rates);
    };
    default_rmax = 0.5;
  } else if (o.curve == "exact_ni") {
    if (o.topology.empty() || o.schedule.empty())
      throw UsageError("exact_ni requires --topology and --schedule");
    g = parse_topology(read_file(o.topology));
    sch = parse_schedule(read_file(o.schedule), g);
    f = [&g, &sch](double r) { return dmt_rs_ni_exact(g, sch, r); };
  } else if (o.curve == "bounds") {
    if (o.topology.empty()) throw UsageError("bounds requires --topology");
    g = parse_topology(read_file(o.topology));
    curves.push_back(sample_curve("ni_upper", [&g](double r) { return dmt_rs_ni_upper(g, r); },
                                  o.r_max > 0 ? o.r_max : default_rmax, o.step));
    curves.push_back(sample_curve("ni_lower", [&g](double r) { return dmt_rs_ni_lower(g, r); },
                                  o.r_max > 0 ? o.r_max : default_rmax, o.step));
  } else {
    throw UsageError("unknown curve '" + o.curve + "'");
  }

  std::ostringstream label;
  label << o.curve;
  if (o.curve == "two_hop") label << " K=" << o.K << " B=" << o.B;
  if (o.curve == "af_mac" || o.curve == "ddf_mac") label << " M=" << o.M << " sym";

  if (curves.empty()) {
    if (o.sym_r >= 0.0) {
      DmtCurve c;
      c.label = label.str();
      c.points.push_back({o.sym_r, f(o.sym_r)});
      curves.push_back(c);
      std::cout.precision(12);
      std::cout << "d = " << c.points[0].d << "\n";
    } else {
      curves.push_back(sample_curve(label.str(), f, o.r_max > 0 ? o.r_max : default_rmax, o.step));
    }
  }

  const std::string stem = o.stem.empty() ? o.curve : o.stem;
  const fs::path out_dir(o.out_dir);
  const fs::path csv_path = out_dir / (stem + ".csv");
  write_file(csv_path, write_curve_csv(curves));
  man.settings = {{"curve", o.curve},       {"K", std::to_string(o.K)},
                  {"B", std::to_string(o.B)}, {"M", std::to_string(o.M)},
                  {"topology", o.topology}, {"schedule", o.schedule}};
  man.outputs.push_back(stem + ".csv");
  man.write(out_dir);
  std::cout << "wrote " << csv_path.string() << "\n";
  return kOk;
}

int cmd_validate(const std::string& topo_path, const std::string& sched_path, bool require_ni,
                 const std::string& out_dir) {
  Manifest man;
  man.command = "validate";
  man.started = now_utc();
  man.settings = {{"topology", topo_path},
                  {"schedule", sched_path},
                  {"require_non_interfering", require_ni ? "on" : "off"}};

  const NetworkTopology g = parse_topology(read_file(topo_path));
  const Schedule s = parse_schedule(read_file(sched_path), g);
  const ValidationReport rep = validate_schedule(g, s);
  man.write(fs::path(out_dir));
  if (!rep.ok) {
    for (const Violation& v : rep.violations) {
      std::cout << "violation: property " << v.property;
      if (v.path > 0) std::cout << " path " << v.path;
      if (v.hop > 0) std::cout << " hop " << v.hop;
      if (v.slot > 0) std::cout << " slot " << v.slot;
      std::cout << ": " << v.message << "\n";
    }
    return kValidationFailed;
  }
  if (require_ni && !is_non_interfering(g, s)) {
    // Name the first simultaneous adjacent transmitter/receiver pair.
    for (int i = 0; i < s.path_count(); ++i)
      for (int j = 1; j <= s.hops(i); ++j)
        for (int i2 = 0; i2 < s.path_count(); ++i2) {
          if (i2 == i) continue;
          for (int j2 = 1; j2 <= s.hops(i2); ++j2) {
            if (s.slot(i, j) != s.slot(i2, j2)) continue;
            const int rx = s.paths[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const int tx = s.paths[static_cast<std::size_t>(i2)][static_cast<std::size_t>(j2 - 1)];
            if (!g.has_edge(tx, rx)) continue;
            std::cout << "interfering: slot " << s.slot(i, j) << ", path " << (i2 + 1) << " hop "
                      << j2 << " transmits from node " << tx << " into the reception of path "
                      << (i + 1) << " hop " << j << " at node " << rx << "\n";
            return kValidationFailed;
          }
        }
    std::cout << "interfering\n";
    return kValidationFailed;
  }
  std::cout << "ok\n";
  return kOk;
}

int cmd_maxdiv(const std::string& topo_path, const std::string& out_dir) {
  Manifest man;
  man.command = "maxdiv";
  man.started = now_utc();
  man.settings = {{"topology", topo_path}};

  const NetworkTopology g = parse_topology(read_file(topo_path));
  const MinCutResult mc = min_cut(g);
  std::cout << "d_G = " << mc.weight << "\n";
  std::cout << "cut:";
  for (int v : mc.witness.members) std::cout << " " << v;
  std::cout << "\n";
  const std::vector<Path> dec = max_flow_path_decomposition(g);
  std::cout << "decomposition (" << dec.size() << " paths):\n";
  std::map<Edge, int> mult;
  for (const Path& p : dec) {
    std::cout << "  (";
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::cout << (i ? "," : "") << p[i];
      if (i + 1 < p.size()) ++mult[make_edge(p[i], p[i + 1])];
    }
    std::cout << ")\n";
  }
  std::cout << "edge use:\n";
  for (const auto& [e, c] : mult)
    std::cout << "  " << e.a << "-" << e.b << ": " << c << " of " << g.edge_weight(e) << "\n";
  const DualFlowReport dual = verify_dual_flow(g, dec);
  std::cout << "dual feasible: " << (dual.feasible ? "yes" : "no") << "\n";
  man.write(fs::path(out_dir));
  return kOk;
}

int cmd_bundle(const std::string& out_dir) {
  Manifest man;
  man.command = "bundle";
  man.started = now_utc();

  std::vector<DmtCurve> wi;
  for (int K : {2, 3}) {
    for (int B : {1, 2}) {
      std::ostringstream lab;
      lab << "two_hop K=" << K << " B=" << B;
      wi.push_back(
          sample_curve(lab.str(), [K, B](double r) { return dmt_two_hop(K, B, r); }, 1.05, 0.01));
    }
    std::ostringstream lab;
    lab << "two_hop K=" << K << " B=inf";
    wi.push_back(sample_curve(
        lab.str(), [K](double r) { return K * std::max(0.0, 1.0 - r); }, 1.05, 0.01));
  }
  std::vector<DmtCurve> mac;
  mac.push_back(sample_curve(
      "af_mac M=2 sym", [](double r) { return dmt_af_mac({r, r}); }, 0.5, 0.01));
  mac.push_back(sample_curve(
      "ddf_mac M=2 sym", [](double r) { return dmt_ddf_mac({r, r}); }, 0.5, 0.01));

  const fs::path dir(out_dir);
  write_file(dir / "dm_wi.csv", write_curve_csv(wi));
  write_file(dir / "dm_mac.csv", write_curve_csv(mac));

  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set xlabel 'multiplexing gain r'\n"
     << "set ylabel 'diversity gain d'\n"
     << "set key outside\n"
     << "set terminal pngcairo size 960,640\n";
  auto plot_block = [&gp](const std::string& csv, const std::string& png,
                          const std::vector<std::string>& labels) {
    gp << "set output '" << png << "'\n"
       << "plot";
    for (std::size_t i = 0; i < labels.size(); ++i) {
      gp << (i ? ", \\\n     " : " ") << "'" << csv << "' every ::1 using 1:(strcol(3) eq '"
         << labels[i] << "' ? $2 : NaN) with lines title '" << labels[i] << "'";
    }
    gp << "\n";
  };
  std::vector<std::string> wi_labels;
  for (const DmtCurve& c : wi) wi_labels.push_back(c.label);
  std::vector<std::string> mac_labels;
  for (const DmtCurve& c : mac) mac_labels.push_back(c.label);
  plot_block("dm_wi.csv", "dm_wi.png", wi_labels);
  plot_block("dm_mac.csv", "dm_mac.png", mac_labels);
  write_file(dir / "bundle.gp", gp.str());

  man.outputs = {"dm_wi.csv", "dm_mac.csv", "bundle.gp"};
  man.write(dir);
  std::cout << "wrote " << (dir / "dm_wi.csv").string() << ", " << (dir / "dm_mac.csv").string()
            << ", " << (dir / "bundle.gp").string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relay network diversity-multiplexing analysis and simulation"};
  app.set_version_flag("--version", std::string(RELAY_DMT_VERSION));
  app.require_subcommand(1);

  AnalyzeOpts an;
  CLI::App* analyze = app.add_subcommand("analyze", "evaluate analytic DMT curves");
  analyze->add_option("--curve", an.curve, "two_hop | af_mac | ddf_mac | exact_ni | bounds")
      ->required();
  analyze->add_option("--K", an.K, "relay count");
  analyze->add_option("--B", an.B, "sub-block rounds");
  analyze->add_option("--M", an.M, "source count");
  analyze->add_option("--sym-r", an.sym_r, "evaluate a single symmetric rate point");
  analyze->add_option("--topology", an.topology, "topology file");
  analyze->add_option("--schedule", an.schedule, "schedule file");
  analyze->add_option("--rmax", an.r_max, "grid upper end");
  analyze->add_option("--step", an.step, "grid step");
  analyze->add_option("--out", an.out_dir, "output directory");
  analyze->add_option("--stem", an.stem, "output file stem");

  SimSettings sim;
  std::string cfg_path, mode_flag, topo_flag, sched_flag, snr_flag, r_flag;
  double fixed_rate_flag = -1.0;
  std::uint64_t seed_flag = 0;
  int workers_flag = 0, k_flag = 0, b_flag = 0, m_flag = 0;
  std::int64_t tmin_flag = 0, tmax_flag = 0, events_flag = 0, batch_flag = 0;
  bool fit_flag = false, directed_flag = false, no_crn_flag = false;
  std::string out_flag, stem_flag;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo outage sweeps");
  simulate->add_option("--config", cfg_path, "config file (key = value)");
  CLI::Option* o_mode = simulate->add_option("--mode", mode_flag, "p2p | mac_rs | af | ddf");
  CLI::Option* o_topo = simulate->add_option("--topology", topo_flag, "topology file or inline:");
  CLI::Option* o_sched = simulate->add_option("--schedule", sched_flag, "schedule file or inline:");
  CLI::Option* o_snr = simulate->add_option("--snr", snr_flag, "grid lo:hi:step in dB");
  CLI::Option* o_r = simulate->add_option("--r", r_flag, "multiplexing gains, comma separated");
  CLI::Option* o_R = simulate->add_option("--R", fixed_rate_flag, "fixed rate, bits per use");
  CLI::Option* o_seed = simulate->add_option("--seed", seed_flag, "RNG seed");
  CLI::Option* o_workers = simulate->add_option("--workers", workers_flag, "trial pool size");
  CLI::Option* o_k = simulate->add_option("--K", k_flag, "relay count");
  CLI::Option* o_b = simulate->add_option("--B", b_flag, "sub-block rounds");
  CLI::Option* o_m = simulate->add_option("--M", m_flag, "source count");
  CLI::Option* o_tmin = simulate->add_option("--trials-min", tmin_flag, "minimum trials per point");
  CLI::Option* o_tmax = simulate->add_option("--trials-max", tmax_flag, "maximum trials per point");
  CLI::Option* o_events = simulate->add_option("--events", events_flag, "target outage events");
  CLI::Option* o_batch = simulate->add_option("--batch", batch_flag, "stopping-check granularity");
  simulate->add_flag("--fit", fit_flag, "append a diversity fit");
  simulate->add_flag("--directed", directed_flag, "independent gains per direction");
  simulate->add_flag("--no-crn", no_crn_flag, "fresh randomness per SNR point");
  CLI::Option* o_out = simulate->add_option("--out", out_flag, "output directory");
  CLI::Option* o_stem = simulate->add_option("--stem", stem_flag, "output file stem");

  std::string v_topo, v_sched, v_out = ".";
  bool v_ni = false;
  CLI::App* validate = app.add_subcommand("validate", "check a schedule against a topology");
  validate->add_option("--topology", v_topo, "topology file")->required();
  validate->add_option("--schedule", v_sched, "schedule file")->required();
  validate->add_flag("--require-non-interfering", v_ni, "also demand zero interference");
  validate->add_option("--out", v_out, "manifest directory");

  std::string md_topo, md_out = ".";
  CLI::App* maxdiv = app.add_subcommand("maxdiv", "max diversity, witness cut, decomposition");
  maxdiv->add_option("--topology", md_topo, "topology file")->required();
  maxdiv->add_option("--out", md_out, "manifest directory");

  std::string bu_out = ".";
  CLI::App* bundle = app.add_subcommand("bundle", "emit the standard curve family CSVs");
  bundle->add_option("--out", bu_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return cmd_analyze(an);
    if (*simulate) {
      if (!cfg_path.empty()) load_config(sim, cfg_path);
      if (o_mode->count()) sim.mode = mode_flag;
      if (o_topo->count()) {
        sim.topology_src = topo_flag;
        sim.base_dir = ".";
      }
      if (o_sched->count()) sim.schedule_src = sched_flag;
      if (o_snr->count()) sim.grid = parse_snr(snr_flag);
      if (o_r->count()) {
        sim.rate = parse_rate_words("mux", r_flag);
        sim.have_rate = true;
      }
      if (o_R->count()) {
        sim.rate.fixed = true;
        sim.rate.values = {fixed_rate_flag};
        sim.have_rate = true;
      }
      if (o_seed->count()) {
        sim.policy.seed = seed_flag;
      } else if (!sim.seed_from_config) {
        if (const char* env = std::getenv("RELAY_DMT_SEED")) {
          try {
            sim.policy.seed = std::stoull(env);
          } catch (const std::exception&) {
            throw UsageError("RELAY_DMT_SEED is not a number");
          }
        }
      }
      if (o_workers->count()) sim.policy.workers = workers_flag;
      if (o_k->count()) sim.K = k_flag;
      if (o_b->count()) sim.B = b_flag;
      if (o_m->count()) sim.M = m_flag;
      if (o_tmin->count()) sim.policy.min_trials = tmin_flag;
      if (o_tmax->count()) sim.policy.max_trials = tmax_flag;
      if (o_events->count()) sim.policy.target_events = events_flag;
      if (o_batch->count()) sim.policy.batch = batch_flag;
      if (fit_flag) sim.fit = true;
      if (directed_flag) sim.reciprocal = false;
      if (no_crn_flag) sim.policy.crn = false;
      if (o_out->count()) sim.out_dir = out_flag;
      if (o_stem->count()) sim.stem = stem_flag;
      return cmd_simulate(sim);
    }
    if (*validate) return cmd_validate(v_topo, v_sched, v_ni, v_out);
    if (*maxdiv) return cmd_maxdiv(md_topo, md_out);
    if (*bundle) return cmd_bundle(bu_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "input error: line " << e.line << ": " << e.what() << "\n";
    return kInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}
