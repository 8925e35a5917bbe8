#include "pdptwse/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "pdptwse/io.hpp"

namespace pdptwse {

const char* ArcRuleName(ArcRule rule) {
  switch (rule) {
    case ArcRule::kKept: return "kept";
    case ArcRule::kPriority: return "priority";
    case ArcRule::kPairing: return "pairing";
    case ArcRule::kCapacity: return "capacity";
    case ArcRule::kTimeWindow: return "time-window";
    case ArcRule::kWindowPairing: return "window-pairing";
    case ArcRule::kIndirect: return "indirect-service";
    case ArcRule::kNoMachine: return "no-machine";
    case ArcRule::kSelf: return "self-loop";
  }
  return "unknown";
}

TravelBounds::TravelBounds(const Instance& inst) : n_(inst.num_nodes()) {
  const int N = n_;
  std::vector<double> speeds;
  class_of_.resize(inst.num_vehicles());
  std::vector<VehicleId> representative;
  for (int k = 0; k < inst.num_vehicles(); ++k) {
    auto it = std::find(speeds.begin(), speeds.end(), inst.vehicle(k).speed);
    if (it == speeds.end()) {
      speeds.push_back(inst.vehicle(k).speed);
      representative.push_back(k);
      it = speeds.end() - 1;
    }
    class_of_[k] = static_cast<int>(it - speeds.begin());
  }
  table_.resize(speeds.size());
  for (std::size_t c = 0; c < speeds.size(); ++c) {
    auto& d = table_[c];
    d.assign(N * N, 0.0);
    const VehicleId k = representative[c];
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) d[i * N + j] = i == j ? 0.0 : inst.travel(k, i, j);
    }
    for (int m = 0; m < N; ++m) {
      for (int i = 0; i < N; ++i) {
        const double im = d[i * N + m];
        if (!std::isfinite(im)) continue;
        for (int j = 0; j < N; ++j) {
          const double via = im + d[m * N + j];
          if (via < d[i * N + j]) d[i * N + j] = via;
        }
      }
    }
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        if (i != j && d[i * N + j] < inst.travel(k, i, j) - kTimeEps) ++gaps_;
      }
    }
  }
  min_.assign(N * N, kInf);
  for (const auto& d : table_) {
    for (int a = 0; a < N * N; ++a) min_[a] = std::min(min_[a], d[a]);
  }
}

std::vector<TimeWindow> ShrinkWindows(const Instance& inst) { return ShrinkWindows(inst, TravelBounds(inst)); }

std::vector<TimeWindow> ShrinkWindows(const Instance& inst, const TravelBounds& b) {
  const int n = inst.n();
  const NodeId end = inst.depot_end();
  const TimeWindow depot = inst.depot_window();
  std::vector<TimeWindow> w(inst.num_nodes());
  for (NodeId i = 0; i < inst.num_nodes(); ++i) w[i] = inst.window(i);
  for (NodeId i = 1; i <= n; ++i) {
    const NodeId d = i + n;
    w[d].close = std::min(w[d].close, depot.close - b.min_closure(d, end) - inst.service(d));
    w[i].close = std::min(w[i].close, w[d].close - b.min_closure(i, d) - inst.service(i));
    w[i].open = std::max(w[i].open, depot.open + b.min_closure(0, i));
    w[d].open = std::max(w[d].open, w[i].open + inst.service(i) + b.min_closure(i, d));
  }
  for (NodeId i = 1; i <= 2 * n; ++i) {
    if (w[i].open > w[i].close + kTimeEps) {
      throw InfeasibleInstance("instance trivially infeasible: empty window at node " + std::to_string(i));
    }
  }
  return w;
}

PathTiming PathEarliestArrival(const Instance& inst, VehicleId k, std::span<const NodeId> path, double t_start,
                               std::span<const TimeWindow> windows, const TravelBounds* bounds) {
  PathTiming out;
  if (path.empty()) return out;
  auto win = [&](NodeId v) { return windows.empty() ? inst.window(v) : windows[v]; };
  double t = t_start;
  if (t > win(path[0]).close + kTimeEps) out.feasible = false;
  for (std::size_t p = 1; p < path.size(); ++p) {
    const NodeId i = path[p - 1], j = path[p];
    const double d = bounds != nullptr ? bounds->closure(k, i, j) : inst.travel(k, i, j);
    t = std::max(win(j).open, t + inst.service(i) + d);
    if (t > win(j).close + kTimeEps) out.feasible = false;
  }
  out.arrival = t;
  return out;
}

std::uint64_t GammaKey::Pack() const {
  return (static_cast<std::uint64_t>(h) << 52) | (static_cast<std::uint64_t>(i) << 39) |
         (static_cast<std::uint64_t>(j) << 26) | (static_cast<std::uint64_t>(ip) << 13) |
         static_cast<std::uint64_t>(jp);
}

std::array<int, 9> PreprocessResult::RuleCounts() const {
  std::array<int, 9> counts{};
  for (ArcRule r : arc_rule) counts[static_cast<int>(r)]++;
  return counts;
}

namespace {

// True when the path is infeasible for every vehicle with t(path[0]) fixed
// to its shrunk opening time.
bool InfeasibleForAll(const Instance& inst, std::span<const TimeWindow> w, const TravelBounds& b,
                      std::initializer_list<NodeId> nodes) {
  const std::vector<NodeId> path(nodes);
  for (VehicleId k = 0; k < inst.num_vehicles(); ++k) {
    if (PathEarliestArrival(inst, k, path, w[path.front()].open, w, &b).feasible) return false;
  }
  return true;
}

}  // namespace

std::vector<ArcRule> EliminateArcs(const Instance& inst, std::span<const TimeWindow> w, const TravelBounds& b) {
  const int n = inst.n();
  const int N = inst.num_nodes();
  const NodeId end = inst.depot_end();
  std::vector<ArcRule> rule(N * N, ArcRule::kKept);
  auto mark = [&](NodeId i, NodeId j, ArcRule r) {
    ArcRule& slot = rule[i * N + j];
    if (slot == ArcRule::kKept) slot = r;
  };
  for (NodeId i = 0; i < N; ++i) mark(i, i, ArcRule::kSelf);
  for (NodeId i = 1; i <= n; ++i) {
    mark(0, n + i, ArcRule::kPriority);
    mark(n + i, i, ArcRule::kPriority);
    mark(i, 0, ArcRule::kPriority);
    mark(n + i, 0, ArcRule::kPriority);
    mark(end, i, ArcRule::kPriority);
    mark(end, n + i, ArcRule::kPriority);
  }
  mark(end, 0, ArcRule::kPriority);
  for (NodeId i = 1; i <= n; ++i) mark(i, end, ArcRule::kPairing);

  const double max_q = inst.max_capacity();
  for (NodeId i = 1; i <= n; ++i) {
    for (NodeId j = 1; j <= n; ++j) {
      if (i == j || inst.demand(i) + inst.demand(j) <= max_q + kTimeEps) continue;
      mark(i, j, ArcRule::kCapacity);
      mark(j, i, ArcRule::kCapacity);
      mark(i, n + j, ArcRule::kCapacity);
      mark(j, n + i, ArcRule::kCapacity);
      mark(n + i, n + j, ArcRule::kCapacity);
      mark(n + j, n + i, ArcRule::kCapacity);
    }
  }

  for (NodeId i = 1; i <= 2 * n; ++i) {
    for (NodeId j = 1; j <= 2 * n; ++j) {
      if (i == j) continue;
      if (w[i].open + inst.service(i) + inst.min_travel(i, j) > w[j].close + kTimeEps) {
        mark(i, j, ArcRule::kTimeWindow);
      }
    }
  }

  for (NodeId i = 1; i <= n; ++i) {
    for (NodeId j = 1; j <= n; ++j) {
      if (i == j) continue;
      if (InfeasibleForAll(inst, w, b, {j, i, n + j, n + i})) mark(i, n + j, ArcRule::kWindowPairing);
      if (InfeasibleForAll(inst, w, b, {i, n + i, j, n + j})) mark(n + i, j, ArcRule::kWindowPairing);
      if (InfeasibleForAll(inst, w, b, {i, j, n + i, n + j}) && InfeasibleForAll(inst, w, b, {i, j, n + j, n + i})) {
        mark(i, j, ArcRule::kWindowPairing);
      }
      if (InfeasibleForAll(inst, w, b, {i, j, n + i, n + j}) && InfeasibleForAll(inst, w, b, {j, i, n + i, n + j})) {
        mark(n + i, n + j, ArcRule::kWindowPairing);
      }
    }
  }

  for (NodeId i = 1; i <= n; ++i) {
    for (NodeId j = 1; j <= 2 * n; ++j) {
      if (j == i || j == n + i) continue;
      if (InfeasibleForAll(inst, w, b, {i, j, n + i})) mark(i, j, ArcRule::kIndirect);
    }
  }
  return rule;
}

std::vector<std::vector<MachineId>> FilterMachines(const Instance& inst, std::span<const TimeWindow> w) {
  const int N = inst.num_nodes();
  std::vector<std::vector<MachineId>> out(N * N);
  for (NodeId i = 0; i < N; ++i) {
    for (NodeId j = 0; j < N; ++j) {
      if (i == j || !inst.is_machine_arc(i, j)) continue;
      for (MachineId h : inst.eligible(i, j)) {
        const double arrive = w[i].open + inst.service(i) + inst.min_approach(i, h) + inst.crossing_between(h, i, j) +
                              inst.min_approach(j, h);
        if (arrive <= w[j].close + kTimeEps) out[i * N + j].push_back(h);
      }
    }
  }
  return out;
}

std::vector<GammaKey> DropGammaPairs(const Instance& inst, std::span<const TimeWindow> w,
                                     const std::vector<ArcRule>& rule,
                                     const std::vector<std::vector<MachineId>>& machines) {
  const int N = inst.num_nodes();
  std::vector<std::pair<NodeId, NodeId>> arcs;
  for (NodeId i = 0; i < N; ++i) {
    for (NodeId j = 0; j < N; ++j) {
      if (rule[i * N + j] == ArcRule::kKept && inst.is_machine_arc(i, j)) arcs.emplace_back(i, j);
    }
  }
  std::vector<GammaKey> dropped;
  for (const auto& [i, j] : arcs) {
    for (const auto& [ip, jp] : arcs) {
      if (i == ip && j == jp) continue;
      const auto& h1 = machines[i * N + j];
      const auto& h2 = machines[ip * N + jp];
      for (MachineId h : h1) {
        if (std::find(h2.begin(), h2.end(), h) == h2.end()) continue;
        const double reach = w[i].open + inst.service(i) + inst.min_approach(i, h) + inst.crossing_between(h, i, j) +
                             inst.crossing_between(h, j, ip) + inst.crossing_between(h, ip, jp) +
                             inst.min_approach(jp, h);
        if (reach > w[jp].close + kTimeEps) dropped.push_back({h, i, j, ip, jp});
      }
    }
  }
  std::sort(dropped.begin(), dropped.end());
  return dropped;
}

namespace {

void Finish(const Instance& inst, PreprocessResult& r) {
  const int N = inst.num_nodes();
  for (NodeId i = 0; i < N; ++i) {
    for (NodeId j = 0; j < N; ++j) {
      if (inst.is_machine_arc(i, j) && r.machines[i * N + j].empty() && r.arc_rule[i * N + j] == ArcRule::kKept) {
        r.arc_rule[i * N + j] = ArcRule::kNoMachine;
      }
      if (r.arc_rule[i * N + j] != ArcRule::kKept) r.machines[i * N + j].clear();
    }
  }
  r.dropped_lookup.clear();
  for (const GammaKey& g : r.dropped_gamma) r.dropped_lookup.insert(g.Pack());
}

}  // namespace

PreprocessResult Preprocess(const Instance& inst, PreprocessOptions options) {
  PreprocessResult r;
  r.num_nodes = inst.num_nodes();
  const TravelBounds bounds(inst);
  r.windows = ShrinkWindows(inst, bounds);
  r.arc_rule = EliminateArcs(inst, r.windows, bounds);
  r.machines = FilterMachines(inst, r.windows);
  Finish(inst, r);
  if (options.drop_gamma) {
    r.dropped_gamma = DropGammaPairs(inst, r.windows, r.arc_rule, r.machines);
    Finish(inst, r);
  }
  return r;
}

PreprocessResult NoPreprocess(const Instance& inst) {
  PreprocessResult r;
  const int N = inst.num_nodes();
  r.num_nodes = N;
  for (NodeId i = 0; i < N; ++i) r.windows.push_back(inst.window(i));
  r.arc_rule.assign(N * N, ArcRule::kKept);
  r.machines.assign(N * N, {});
  for (NodeId i = 0; i < N; ++i) {
    for (NodeId j = 0; j < N; ++j) {
      if (i == j) {
        r.arc_rule[i * N + j] = ArcRule::kSelf;
      } else if (j == 0 || i == inst.depot_end()) {
        r.arc_rule[i * N + j] = ArcRule::kPriority;
      } else if (inst.is_machine_arc(i, j)) {
        const auto hs = inst.eligible(i, j);
        r.machines[i * N + j].assign(hs.begin(), hs.end());
      }
    }
  }
  Finish(inst, r);
  return r;
}

std::string PreprocessToJson(const PreprocessResult& r) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format"] = "pdptwse-preprocess";
  doc["version"] = 1;
  doc["nodes"] = r.num_nodes;
  ordered_json windows = ordered_json::array();
  for (const auto& w : r.windows) windows.push_back(ordered_json::array({w.open, w.close}));
  doc["windows"] = std::move(windows);
  const int N = r.num_nodes;
  ordered_json eliminated = ordered_json::array();
  ordered_json machines = ordered_json::array();
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const ArcRule rule = r.arc_rule[i * N + j];
      if (rule != ArcRule::kKept) {
        eliminated.push_back(ordered_json::array({i, j, static_cast<int>(rule)}));
      } else if (!r.machines[i * N + j].empty()) {
        machines.push_back(ordered_json::array({i, j, r.machines[i * N + j]}));
      }
    }
  }
  doc["eliminated"] = std::move(eliminated);
  doc["machines"] = std::move(machines);
  ordered_json gamma = ordered_json::array();
  for (const GammaKey& g : r.dropped_gamma) gamma.push_back(ordered_json::array({g.h, g.i, g.j, g.ip, g.jp}));
  doc["dropped_gamma"] = std::move(gamma);
  return doc.dump() + "\n";
}

PreprocessResult PreprocessFromJson(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "pdptwse-preprocess") throw FormatError("not a preprocessing sidecar");
    PreprocessResult r;
    r.num_nodes = doc.at("nodes").get<int>();
    const int N = r.num_nodes;
    for (const json& w : doc.at("windows")) r.windows.push_back({w.at(0).get<double>(), w.at(1).get<double>()});
    r.arc_rule.assign(N * N, ArcRule::kKept);
    for (int i = 0; i < N; ++i) r.arc_rule[i * N + i] = ArcRule::kSelf;
    r.machines.assign(N * N, {});
    for (const json& e : doc.at("eliminated")) {
      r.arc_rule[e.at(0).get<int>() * N + e.at(1).get<int>()] = static_cast<ArcRule>(e.at(2).get<int>());
    }
    for (const json& m : doc.at("machines")) {
      r.machines[m.at(0).get<int>() * N + m.at(1).get<int>()] = m.at(2).get<std::vector<int>>();
    }
    for (const json& g : doc.at("dropped_gamma")) {
      r.dropped_gamma.push_back({g.at(0).get<int>(), g.at(1).get<int>(), g.at(2).get<int>(), g.at(3).get<int>(),
                                 g.at(4).get<int>()});
    }
    for (const GammaKey& g : r.dropped_gamma) r.dropped_lookup.insert(g.Pack());
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad preprocessing sidecar: ") + e.what());
  }
}

}  // namespace pdptwse
