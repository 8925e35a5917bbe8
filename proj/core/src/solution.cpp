#include "pdptwse/solution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace pdptwse {

Solution EmptySolution(const Instance& inst) {
  Solution sol;
  const double e0 = inst.depot_window().open;
  sol.routes.assign(inst.num_vehicles(), {Visit{0, e0, 0}, Visit{inst.depot_end(), e0, 0}});
  sol.machines.assign(inst.num_machines(), {});
  sol.feasible = inst.n() == 0;
  sol.cost = 0.0;
  return sol;
}

double SolutionCost(const Solution& sol) {
  double total = 0.0;
  for (const auto& route : sol.routes) {
    if (route.size() >= 2) total += route.back().start - route.front().start;
  }
  return total;
}

const char* RuleName(Rule rule) {
  switch (rule) {
    case Rule::kStructure: return "structure";
    case Rule::kCoverage: return "coverage";
    case Rule::kPairing: return "pairing";
    case Rule::kCapacity: return "capacity";
    case Rule::kLoadRecord: return "load-record";
    case Rule::kTimeWindow: return "time-window";
    case Rule::kDepotWindow: return "depot-window";
    case Rule::kTravelTime: return "travel-time";
    case Rule::kMachineMissing: return "machine-missing";
    case Rule::kMachineEligibility: return "machine-eligibility";
    case Rule::kMachineExclusivity: return "machine-exclusivity";
    case Rule::kCost: return "cost";
  }
  return "unknown";
}

bool ValidationReport::has(Rule rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [rule](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::ToString() const {
  std::ostringstream out;
  for (const Violation& v : violations) out << RuleName(v.rule) << ": " << v.detail << "\n";
  return out.str();
}

namespace {

class Reporter {
 public:
  explicit Reporter(ValidationReport& report) : report_(report) {}

  template <typename... Args>
  void Add(Rule rule, const Args&... parts) {
    std::ostringstream out;
    (out << ... << parts);
    report_.violations.push_back({rule, out.str()});
  }

 private:
  ValidationReport& report_;
};

}  // namespace

ValidationReport Validate(const Instance& inst, const Solution& sol) {
  ValidationReport report;
  Reporter r(report);
  const int n = inst.n();
  const NodeId end = inst.depot_end();
  const TimeWindow depot = inst.depot_window();

  if (static_cast<int>(sol.routes.size()) != inst.num_vehicles()) {
    r.Add(Rule::kStructure, "expected ", inst.num_vehicles(), " routes, got ", sol.routes.size());
    return report;
  }
  if (static_cast<int>(sol.machines.size()) != inst.num_machines()) {
    r.Add(Rule::kStructure, "expected ", inst.num_machines(), " machine sequences, got ", sol.machines.size());
    return report;
  }

  std::vector<int> owner(2 * n + 1, -1);
  std::vector<int> position(2 * n + 1, -1);
  bool structural = true;
  for (int k = 0; k < inst.num_vehicles(); ++k) {
    const auto& route = sol.routes[k];
    if (route.size() < 2 || route.front().node != 0 || route.back().node != end) {
      r.Add(Rule::kStructure, "route ", k, " must start at 0 and end at ", end);
      structural = false;
      continue;
    }
    for (std::size_t p = 1; p + 1 < route.size(); ++p) {
      const NodeId v = route[p].node;
      if (!inst.is_customer(v)) {
        r.Add(Rule::kStructure, "route ", k, " visits non-customer node ", v);
        structural = false;
        continue;
      }
      if (owner[v] != -1) {
        r.Add(Rule::kCoverage, "node ", v, " visited more than once");
        continue;
      }
      owner[v] = k;
      position[v] = static_cast<int>(p);
    }
  }
  if (!structural) return report;

  for (NodeId i = 1; i <= 2 * n; ++i) {
    if (owner[i] == -1) r.Add(Rule::kCoverage, "node ", i, " not visited");
  }
  for (NodeId i = 1; i <= n; ++i) {
    const NodeId d = i + n;
    if (owner[i] == -1 || owner[d] == -1) continue;
    if (owner[i] != owner[d]) {
      r.Add(Rule::kPairing, "request ", i, " split over vehicles ", owner[i], " and ", owner[d]);
    } else if (position[i] > position[d]) {
      r.Add(Rule::kPairing, "delivery ", d, " precedes pickup ", i);
    }
  }

  // Loaded crossings keyed by (i, j, k); value = (machine, index in sequence).
  std::map<std::tuple<NodeId, NodeId, VehicleId>, std::pair<MachineId, int>> crossings;
  for (int h = 0; h < inst.num_machines(); ++h) {
    for (std::size_t a = 0; a < sol.machines[h].size(); ++a) {
      const Travel& t = sol.machines[h][a];
      auto key = std::make_tuple(t.from, t.to, t.vehicle);
      if (!crossings.emplace(key, std::make_pair(h, static_cast<int>(a))).second) {
        r.Add(Rule::kMachineExclusivity, "arc (", t.from, ",", t.to, ") of vehicle ", t.vehicle,
              " recorded twice");
      }
    }
  }
  std::map<std::tuple<NodeId, NodeId, VehicleId>, bool> matched;

  for (int k = 0; k < inst.num_vehicles(); ++k) {
    const auto& route = sol.routes[k];
    const double cap = inst.vehicle(k).capacity;
    int load = 0;
    if (route.front().load != 0) r.Add(Rule::kLoadRecord, "vehicle ", k, " leaves the depot loaded");
    for (std::size_t p = 1; p < route.size(); ++p) {
      const Visit& prev = route[p - 1];
      const Visit& cur = route[p];
      load += inst.demand(cur.node);
      if (load < 0) r.Add(Rule::kCapacity, "vehicle ", k, " negative load at node ", cur.node);
      if (load > cap + kTimeEps) r.Add(Rule::kCapacity, "vehicle ", k, " overloaded at node ", cur.node);
      if (cur.load != load) r.Add(Rule::kLoadRecord, "vehicle ", k, " load mismatch at node ", cur.node);

      if (inst.is_customer(cur.node)) {
        const TimeWindow& w = inst.window(cur.node);
        if (cur.start < w.open - kTimeEps || cur.start > w.close + kTimeEps) {
          r.Add(Rule::kTimeWindow, "node ", cur.node, " served at ", cur.start, " outside [", w.open, ",",
                w.close, "]");
        }
      }
      const double ready = prev.start + inst.service(prev.node);
      if (!inst.is_machine_arc(prev.node, cur.node)) {
        if (cur.start < ready + inst.travel(k, prev.node, cur.node) - kTimeEps) {
          r.Add(Rule::kTravelTime, "vehicle ", k, " reaches ", cur.node, " too early");
        }
        continue;
      }
      auto key = std::make_tuple(prev.node, cur.node, k);
      auto it = crossings.find(key);
      if (it == crossings.end()) {
        r.Add(Rule::kMachineMissing, "arc (", prev.node, ",", cur.node, ") of vehicle ", k,
              " has no machine travel");
        continue;
      }
      matched[key] = true;
      const MachineId h = it->second.first;
      const Travel& t = sol.machines[h][it->second.second];
      const auto hs = inst.eligible(prev.node, cur.node);
      if (std::find(hs.begin(), hs.end(), h) == hs.end()) {
        r.Add(Rule::kMachineEligibility, "machine ", h, " cannot serve arc (", prev.node, ",", cur.node, ")");
        continue;
      }
      if (t.start < ready + inst.approach(k, prev.node, h) - kTimeEps) {
        r.Add(Rule::kTravelTime, "vehicle ", k, " boards machine ", h, " before reaching its station");
      }
      if (cur.start < t.start + inst.crossing_between(h, prev.node, cur.node) +
                          inst.approach(k, cur.node, h) - kTimeEps) {
        r.Add(Rule::kTravelTime, "vehicle ", k, " reaches ", cur.node, " before alighting");
      }
    }
    const double t0 = route.front().start;
    const double tend = route.back().start;
    if (t0 < depot.open - kTimeEps || tend > depot.close + kTimeEps || tend < t0 - kTimeEps) {
      r.Add(Rule::kDepotWindow, "vehicle ", k, " depot times [", t0, ",", tend, "] outside [", depot.open,
            ",", depot.close, "]");
    }
  }

  for (const auto& [key, where] : crossings) {
    if (!matched.count(key)) {
      r.Add(Rule::kMachineMissing, "travel (", std::get<0>(key), ",", std::get<1>(key), ") of vehicle ",
            std::get<2>(key), " matches no route arc");
    }
  }

  for (int h = 0; h < inst.num_machines(); ++h) {
    const auto& seq = sol.machines[h];
    for (std::size_t a = 0; a < seq.size(); ++a) {
      const Travel& t = seq[a];
      if (inst.station_of(h, t.from) < 0 || inst.station_of(h, t.to) < 0 ||
          inst.region(t.from) == inst.region(t.to)) {
        continue;  // reported as eligibility or missing above
      }
      const double ready = a == 0 ? inst.initial_reposition(h, t.from)
                                  : seq[a - 1].start + inst.crossing_between(h, seq[a - 1].from, seq[a - 1].to) +
                                        inst.crossing_between(h, seq[a - 1].to, t.from);
      if (a > 0 && (inst.station_of(h, seq[a - 1].from) < 0 || inst.station_of(h, seq[a - 1].to) < 0)) continue;
      if (t.start < ready - kTimeEps) {
        r.Add(Rule::kMachineExclusivity, "machine ", h, " travel ", a, " starts at ", t.start,
              " before the machine is free at ", ready);
      }
    }
  }

  const double recomputed = SolutionCost(sol);
  if (std::abs(recomputed - sol.cost) > kTimeEps * std::max(1.0, std::abs(recomputed))) {
    r.Add(Rule::kCost, "recorded cost ", sol.cost, " differs from ", recomputed);
  }
  return report;
}

}  // namespace pdptwse
