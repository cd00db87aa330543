#include "relaydmt/schedule.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace relaydmt {

namespace {

void check_paths(const NetworkTopology& g, const Schedule& s, ValidationReport& rep) {
  for (int i = 0; i < s.path_count(); ++i) {
    const Path& p = s.paths[i];
    auto bad = [&](const std::string& msg) {
      rep.violations.push_back({0, i + 1, 0, 0, msg});
    };
    if (p.size() < 2) {
      bad("path too short");
      continue;
    }
    bool in_range = true;
    for (int v : p)
      if (v < 0 || v >= g.node_count) {
        bad("path node out of range");
        in_range = false;
        break;
      }
    if (!in_range) continue;
    if (!g.is_source(p.front())) bad("path must start at a source");
    if (p.back() != g.sink) bad("path must end at the sink");
    if (std::set<int>(p.begin(), p.end()).size() != p.size()) bad("path revisits a node");
    for (std::size_t j = 0; j + 1 < p.size(); ++j)
      if (!g.has_edge(p[j], p[j + 1]))
        bad("missing edge " + std::to_string(p[j]) + "-" + std::to_string(p[j + 1]));
  }
}

}  // namespace

ValidationReport validate_schedule(const NetworkTopology& g, const Schedule& s) {
  g.check();
  ValidationReport rep;
  if (s.paths.empty()) {
    rep.violations.push_back({0, 0, 0, 0, "empty path sequence"});
    return rep;
  }
  if (s.timing.size() != s.paths.size()) {
    rep.violations.push_back({0, 0, 0, 0, "timing row count differs from path count"});
    return rep;
  }
  for (int i = 0; i < s.path_count(); ++i)
    if (static_cast<int>(s.timing[i].size()) != s.hops(i)) {
      rep.violations.push_back({0, i + 1, 0, 0, "timing row length differs from hop count"});
      return rep;
    }
  check_paths(g, s, rep);
  if (!rep.violations.empty()) return rep;

  int max_slot = 0;
  for (int i = 0; i < s.path_count(); ++i)
    for (int j = 1; j <= s.hops(i); ++j) {
      const int t = s.slot(i, j);
      max_slot = std::max(max_slot, t);
      if (t < 1 || t > s.slot_count)
        rep.violations.push_back(
            {1, i + 1, j, t, "slot outside [1, " + std::to_string(s.slot_count) + "]"});
    }
  if (max_slot != s.slot_count)
    rep.violations.push_back(
        {1, 0, 0, max_slot, "slot_count must equal the largest slot used"});

  for (int i = 1; i < s.path_count(); ++i)
    if (s.slot(i, 1) <= s.slot(i - 1, 1))
      rep.violations.push_back(
          {2, i + 1, 1, s.slot(i, 1), "first-hop slots must strictly increase with path index"});

  for (int i = 0; i < s.path_count(); ++i)
    for (int j = 2; j <= s.hops(i); ++j)
      if (s.slot(i, j) <= s.slot(i, j - 1))
        rep.violations.push_back(
            {3, i + 1, j, s.slot(i, j), "slots must strictly increase along a path"});

  // property (4): receivers must not hear transmitters of later paths
  // (earlier paths, after slot-axis reversal, for reversed-causality labels)
  const bool rev = s.reversed_causality();
  for (int i = 0; i < s.path_count(); ++i)
    for (int j = 1; j <= s.hops(i); ++j)
      for (int i2 = 0; i2 < s.path_count(); ++i2) {
        if (rev ? (i2 >= i) : (i2 <= i)) continue;
        for (int j2 = 1; j2 <= s.hops(i2); ++j2) {
          if (s.slot(i, j) != s.slot(i2, j2)) continue;
          const int rx = s.paths[i][j];
          const int tx = s.paths[i2][j2 - 1];
          if (g.has_edge(rx, tx))
            rep.violations.push_back(
                {4, i + 1, j, s.slot(i, j),
                 "receiver " + std::to_string(rx) + " of path " + std::to_string(i + 1) +
                     " hears transmitter " + std::to_string(tx) + " of path " +
                     std::to_string(i2 + 1)});
        }
      }

  rep.ok = rep.violations.empty();
  return rep;
}

bool is_non_interfering(const NetworkTopology& g, const Schedule& s) {
  if (!validate_schedule(g, s).ok)
    throw std::invalid_argument("schedule fails validation");
  for (int i = 0; i < s.path_count(); ++i)
    for (int j = 1; j <= s.hops(i); ++j)
      for (int i2 = 0; i2 < s.path_count(); ++i2) {
        if (i2 == i) continue;
        for (int j2 = 1; j2 <= s.hops(i2); ++j2) {
          if (s.slot(i, j) != s.slot(i2, j2)) continue;
          if (g.has_edge(s.paths[i][j], s.paths[i2][j2 - 1])) return false;
        }
      }
  return true;
}

Schedule build_two_hop_schedule(int K, int B) {
  if (K < 1 || B < 1) throw std::invalid_argument("K and B must be positive");
  if (K * B > 64) throw std::invalid_argument("path sequence limited to 64 entries");
  Schedule s;
  for (int i = 1; i <= B * K; ++i) {
    const int k = (i - 1) % K + 1;
    s.paths.push_back({0, k, K + 1});
    s.timing.push_back({i, i + 1});
  }
  s.slot_count = B * K + 1;
  s.label = "two_hop K=" + std::to_string(K) + " B=" + std::to_string(B);
  return s;
}

namespace {

Schedule blocked_sequence(const std::vector<Path>& decomposition, int L0) {
  Schedule s;
  for (const auto& p : decomposition)
    for (int r = 0; r < L0; ++r) s.paths.push_back(p);
  return s;
}

void require_size(const std::vector<Path>& decomposition, int L0) {
  if (L0 < 1) throw std::invalid_argument("L0 must be positive");
  if (static_cast<long long>(decomposition.size()) * L0 > 64)
    throw std::invalid_argument("path sequence limited to 64 entries");
}

}  // namespace

Schedule build_sequential_maxflow_schedule(const NetworkTopology& g, int L0) {
  const auto decomposition = max_flow_path_decomposition(g);
  require_size(decomposition, L0);
  Schedule s = blocked_sequence(decomposition, L0);
  int slot = 0;
  for (const auto& p : s.paths) {
    std::vector<int> row;
    for (std::size_t j = 1; j < p.size(); ++j) row.push_back(++slot);
    s.timing.push_back(std::move(row));
  }
  s.slot_count = slot;
  s.label = "maxflow_serial L0=" + std::to_string(L0);
  return s;
}

Schedule build_pipelined_schedule(const NetworkTopology& g, int L0) {
  g.check();
  if (!g.full_duplex)
    throw std::invalid_argument("pipelined schedule requires a full-duplex graph");
  const auto decomposition = max_flow_path_decomposition(g);
  require_size(decomposition, L0);

  // strictly layered: BFS depth from the sources, every edge spanning
  // consecutive layers, every decomposition path advancing monotonically
  std::vector<int> dist(g.node_count, -1);
  std::vector<int> queue;
  for (int src : g.sources) {
    dist[src] = 0;
    queue.push_back(src);
  }
  for (std::size_t qi = 0; qi < queue.size(); ++qi)
    for (int v : g.neighbors(queue[qi]))
      if (dist[v] < 0) {
        dist[v] = dist[queue[qi]] + 1;
        queue.push_back(v);
      }
  bool layered = true;
  for (const auto& e : g.edges)
    if (dist[e.a] < 0 || dist[e.b] < 0 || std::abs(dist[e.a] - dist[e.b]) != 1) layered = false;
  for (const auto& p : decomposition)
    if (static_cast<int>(p.size()) - 1 != dist[g.sink]) layered = false;

  Schedule s = blocked_sequence(decomposition, L0);
  if (layered) {
    for (int i = 1; i <= s.path_count(); ++i) {
      std::vector<int> row;
      for (int j = 1; j <= s.hops(i - 1); ++j) row.push_back(i + j - 1);
      s.timing.push_back(std::move(row));
    }
    s.label = "pipelined L0=" + std::to_string(L0);
  } else {
    // block b is delayed by the total length of the preceding blocks, which
    // leaves only reversed-axis (non-causal) interference between paths
    for (int i = 1; i <= s.path_count(); ++i) {
      int offset = 0;
      for (int b = 0; b < (i - 1) / L0; ++b)
        offset += static_cast<int>(decomposition[b].size()) - 1;
      std::vector<int> row;
      for (int j = 1; j <= s.hops(i - 1); ++j) row.push_back(i + j - 1 + offset);
      s.timing.push_back(std::move(row));
    }
    s.label = "pipelined L0=" + std::to_string(L0) + " causal-after-reversal";
  }
  int max_slot = 0;
  for (const auto& row : s.timing)
    for (int t : row) max_slot = std::max(max_slot, t);
  s.slot_count = max_slot;

  const auto rep = validate_schedule(g, s);
  if (!rep.ok)
    throw std::invalid_argument("pipelined construction fails validation: " +
                                rep.violations.front().message);
  return s;
}

InterferencePattern interference_pattern(const NetworkTopology& g, const Schedule& s) {
  if (!validate_schedule(g, s).ok)
    throw std::invalid_argument("schedule fails validation");
  InterferencePattern pat;
  for (int i = 0; i < s.path_count(); ++i)
    for (int j = 1; j <= s.hops(i); ++j)
      for (int i2 = 0; i2 < s.path_count(); ++i2) {
        if (i2 == i) continue;
        for (int j2 = 1; j2 <= s.hops(i2); ++j2) {
          if (s.slot(i, j) != s.slot(i2, j2)) continue;
          if (g.has_edge(s.paths[i][j], s.paths[i2][j2 - 1]))
            pat[{i + 1, j}].push_back({i2 + 1, j2});
        }
      }
  return pat;
}

std::map<Edge, int> beta_counts(const Schedule& s) {
  std::map<Edge, int> beta;
  for (const auto& p : s.paths)
    for (std::size_t j = 0; j + 1 < p.size(); ++j) ++beta[make_edge(p[j], p[j + 1])];
  return beta;
}

// ---------------------------------------------------------------------------
// text format

namespace {

struct Line {
  std::string text;
  int number;
};

std::vector<Line> content_lines(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream is(text);
  std::string raw;
  int n = 0;
  while (std::getline(is, raw)) {
    ++n;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = raw.find_last_not_of(" \t\r");
    lines.push_back({raw.substr(first, last - first + 1), n});
  }
  return lines;
}

std::vector<int> parse_int_list(const std::string& s, char sep, int line) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) {
    const auto first = part.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = part.find_last_not_of(" \t");
    part = part.substr(first, last - first + 1);
    try {
      std::size_t pos = 0;
      const int v = std::stoi(part, &pos);
      if (pos != part.size()) throw std::invalid_argument("");
      out.push_back(v);
    } catch (...) {
      throw ParseError(line, "expected integer, got '" + part + "'");
    }
  }
  return out;
}

Schedule from_builder(const std::string& spec, int line, const NetworkTopology& g) {
  std::istringstream is(spec);
  std::string name;
  is >> name;
  std::map<std::string, int> kv;
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError(line, "builder arguments must look like K=2");
    try {
      kv[tok.substr(0, eq)] = std::stoi(tok.substr(eq + 1));
    } catch (...) {
      throw ParseError(line, "bad builder argument '" + tok + "'");
    }
  }
  auto arg = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(line, "builder " + name + " needs " + key + "=");
    return it->second;
  };
  if (name == "two_hop") return build_two_hop_schedule(arg("K"), arg("B"));
  if (name == "maxflow_serial") return build_sequential_maxflow_schedule(g, arg("L0"));
  if (name == "pipelined") return build_pipelined_schedule(g, arg("L0"));
  throw ParseError(line, "unknown builder '" + name + "'");
}

}  // namespace

Schedule parse_schedule(const std::string& text, const NetworkTopology& g) {
  Schedule s;
  bool saw_paths = false, saw_timing = false;
  for (const auto& line : content_lines(text)) {
    const auto colon = line.text.find(':');
    if (colon == std::string::npos)
      throw ParseError(line.number, "expected 'key: value'");
    const std::string key = line.text.substr(0, colon);
    const std::string value = line.text.substr(colon + 1);
    if (key == "builder") return from_builder(value, line.number, g);
    if (key == "label") {
      const auto first = value.find_first_not_of(" \t");
      s.label = first == std::string::npos ? "" : value.substr(first);
    } else if (key == "paths") {
      std::stringstream ss(value);
      std::string seg;
      while (std::getline(ss, seg, ';')) {
        const auto open = seg.find('(');
        const auto close = seg.find(')');
        if (open == std::string::npos || close == std::string::npos || close < open)
          throw ParseError(line.number, "path must look like (0,1,3)");
        s.paths.push_back(parse_int_list(seg.substr(open + 1, close - open - 1), ',',
                                         line.number));
      }
      if (s.paths.empty()) throw ParseError(line.number, "no paths listed");
      saw_paths = true;
    } else if (key == "timing") {
      std::stringstream ss(value);
      std::string seg;
      while (std::getline(ss, seg, ';')) {
        if (seg.find_first_not_of(" \t") == std::string::npos) continue;
        s.timing.push_back(parse_int_list(seg, ',', line.number));
      }
      saw_timing = true;
    } else {
      throw ParseError(line.number, "unknown key '" + key + "'");
    }
  }
  if (!saw_paths) throw ParseError(1, "missing paths line");
  if (!saw_timing) throw ParseError(1, "missing timing line");
  if (s.timing.size() != s.paths.size())
    throw ParseError(1, "timing row count differs from path count");
  for (std::size_t i = 0; i < s.paths.size(); ++i)
    if (s.timing[i].size() + 1 != s.paths[i].size())
      throw ParseError(1, "timing row " + std::to_string(i + 1) +
                              " length differs from hop count");
  int max_slot = 0;
  for (const auto& row : s.timing)
    for (int t : row) max_slot = std::max(max_slot, t);
  s.slot_count = max_slot;
  return s;
}

std::string serialize_schedule(const Schedule& s) {
  std::ostringstream os;
  if (!s.label.empty()) os << "label: " << s.label << '\n';
  os << "paths: ";
  for (std::size_t i = 0; i < s.paths.size(); ++i) {
    if (i) os << ';';
    os << '(';
    for (std::size_t j = 0; j < s.paths[i].size(); ++j)
      os << (j ? "," : "") << s.paths[i][j];
    os << ')';
  }
  os << "\ntiming: ";
  for (std::size_t i = 0; i < s.timing.size(); ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < s.timing[i].size(); ++j)
      os << (j ? "," : "") << s.timing[i][j];
  }
  os << '\n';
  return os.str();
}

}  // namespace relaydmt
