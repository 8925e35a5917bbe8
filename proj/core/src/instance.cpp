#include "pdptwse/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace pdptwse {

double Distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

std::string Describe(const char* what, int index) {
  std::ostringstream out;
  out << what << " " << index;
  return out.str();
}

void CheckTriangle(const std::vector<Point>& pts, const char* family,
                   std::vector<std::string>& problems) {
  const std::size_t m = pts.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t c = 0; c < m; ++c) {
        const double direct = Distance(pts[a], pts[c]);
        const double via = Distance(pts[a], pts[b]) + Distance(pts[b], pts[c]);
        if (direct > via + kTimeEps) {
          problems.push_back(std::string("triangle inequality fails for ") + family);
          return;
        }
      }
    }
  }
}

}  // namespace

std::vector<std::string> CheckInstance(const InstanceData& d) {
  std::vector<std::string> problems;
  const int n = d.num_requests;
  if (n < 0) problems.push_back("negative request count");
  if (static_cast<int>(d.nodes.size()) != 2 * n + 1) {
    problems.push_back("node list must hold depot, n pickups and n deliveries");
    return problems;
  }
  if (d.num_regions < 1) problems.push_back("at least one region required");
  if (d.vehicles.empty()) problems.push_back("at least one vehicle required");
  for (std::size_t k = 0; k < d.vehicles.size(); ++k) {
    if (!(d.vehicles[k].speed > 0.0)) problems.push_back(Describe("non-positive speed on vehicle", k));
    if (d.vehicles[k].capacity < 0.0) problems.push_back(Describe("negative capacity on vehicle", k));
  }
  for (int i = 0; i <= 2 * n; ++i) {
    const Node& v = d.nodes[i];
    if (v.region < 0 || v.region >= d.num_regions) problems.push_back(Describe("region out of range at node", i));
    if (v.window.open > v.window.close) problems.push_back(Describe("empty time window at node", i));
    if (v.service < 0.0) problems.push_back(Describe("negative service at node", i));
  }
  if (d.nodes[0].demand != 0 || d.nodes[0].service != 0.0) {
    problems.push_back("depot must have zero demand and zero service");
  }
  for (int i = 1; i <= n; ++i) {
    if (d.nodes[i].demand <= 0) problems.push_back(Describe("non-positive demand at pickup", i));
    if (d.nodes[i + n].demand != -d.nodes[i].demand) {
      problems.push_back(Describe("delivery demand does not mirror pickup", i));
    }
  }
  for (std::size_t h = 0; h < d.machines.size(); ++h) {
    const Machine& m = d.machines[h];
    if (!(m.speed > 0.0)) problems.push_back(Describe("non-positive speed on machine", h));
    std::set<RegionId> seen;
    for (const Station& s : m.stations) {
      if (s.region < 0 || s.region >= d.num_regions) problems.push_back(Describe("station region out of range on machine", h));
      if (!seen.insert(s.region).second) problems.push_back(Describe("two stations in one region on machine", h));
    }
    if (m.stations.empty()) problems.push_back(Describe("machine without stations", h));
    // A single region never needs a crossing, so the two-region rule only
    // applies when there is more than one region.
    if (d.num_regions > 1 && m.stations.size() < 2) problems.push_back(Describe("machine serves fewer than two regions", h));
  }
  if (d.num_regions > 1) {
    bool covering = false;
    for (const Machine& m : d.machines) {
      covering |= static_cast<int>(m.stations.size()) == d.num_regions;
    }
    if (!covering) problems.push_back("no machine has a station in every region");
  }
  std::vector<Point> node_pts;
  for (const Node& v : d.nodes) node_pts.push_back(v.pos);
  CheckTriangle(node_pts, "node distances", problems);
  for (const Machine& m : d.machines) {
    std::vector<Point> st;
    for (const Station& s : m.stations) st.push_back(s.pos);
    CheckTriangle(st, "machine crossings", problems);
  }
  return problems;
}

Instance::Instance(InstanceData data) : data_(std::move(data)) {
  const auto problems = CheckInstance(data_);
  if (!problems.empty()) {
    std::string msg = "invalid instance";
    for (const auto& p : problems) msg += "; " + p;
    throw InstanceError(msg);
  }
  n_ = data_.num_requests;
  num_nodes_ = 2 * n_ + 2;
  const int N = num_nodes_;
  const int H = num_machines();
  const int z = num_regions();

  for (const Vehicle& v : data_.vehicles) max_capacity_ = std::max(max_capacity_, v.capacity);
  for (int i = 1; i <= n_; ++i) max_demand_ = std::max(max_demand_, data_.nodes[i].demand);

  dist_.assign(N * N, 0.0);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) dist_[i * N + j] = Distance(node(i).pos, node(j).pos);
  }

  station_.assign(H * N, -1);
  approach_dist_.assign(H * N, kInf);
  crossing_.resize(H);
  for (int h = 0; h < H; ++h) {
    const Machine& m = machine(h);
    const int S = static_cast<int>(m.stations.size());
    for (int i = 0; i < N; ++i) {
      for (int s = 0; s < S; ++s) {
        if (m.stations[s].region == region(i)) {
          station_[h * N + i] = s;
          approach_dist_[h * N + i] = Distance(node(i).pos, m.stations[s].pos);
        }
      }
    }
    crossing_[h].assign(S * S, 0.0);
    for (int a = 0; a < S; ++a) {
      for (int b = 0; b < S; ++b) {
        crossing_[h][a * S + b] = Distance(m.stations[a].pos, m.stations[b].pos) / m.speed;
      }
    }
  }

  eligible_.assign(z * z, {});
  for (int a = 0; a < z; ++a) {
    for (int b = 0; b < z; ++b) {
      if (a == b) continue;
      for (int h = 0; h < H; ++h) {
        bool has_a = false, has_b = false;
        for (const Station& s : machine(h).stations) {
          has_a |= s.region == a;
          has_b |= s.region == b;
        }
        if (has_a && has_b) eligible_[a * z + b].push_back(h);
      }
    }
  }

  speed_class_.resize(num_vehicles());
  for (int k = 0; k < num_vehicles(); ++k) {
    const double sp = vehicle(k).speed;
    auto it = std::find(speeds_.begin(), speeds_.end(), sp);
    if (it == speeds_.end()) {
      speeds_.push_back(sp);
      it = speeds_.end() - 1;
    }
    speed_class_[k] = static_cast<int>(it - speeds_.begin());
  }

  travel_.assign(speeds_.size(), std::vector<double>(N * N, 0.0));
  for (std::size_t c = 0; c < speeds_.size(); ++c) {
    const double sp = speeds_[c];
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        double t;
        if (!is_machine_arc(i, j)) {
          t = distance(i, j) / sp;
        } else {
          t = kInf;
          for (MachineId h : eligible(i, j)) {
            t = std::min(t, approach_dist_[h * N + i] / sp + crossing_between(h, i, j) +
                                approach_dist_[h * N + j] / sp);
          }
        }
        travel_[c][i * N + j] = t;
      }
    }
  }
  min_travel_.assign(N * N, kInf);
  for (const auto& table : travel_) {
    for (int a = 0; a < N * N; ++a) min_travel_[a] = std::min(min_travel_[a], table[a]);
  }
}

double Instance::approach(VehicleId k, NodeId i, MachineId h) const {
  return approach_dist_[h * num_nodes_ + i] / vehicle(k).speed;
}

double Instance::min_approach(NodeId i, MachineId h) const {
  double best = kInf;
  for (double sp : speeds_) best = std::min(best, approach_dist_[h * num_nodes_ + i] / sp);
  return best;
}

std::span<const MachineId> Instance::eligible(NodeId i, NodeId j) const {
  const RegionId a = region(i), b = region(j);
  if (a == b) return {};
  return eligible_[a * num_regions() + b];
}

double Instance::MachineEdgeBound(VehicleId k, NodeId i, NodeId j) const {
  const auto hs = eligible(i, j);
  if (hs.empty()) throw InstanceError("no machine serves arc");
  double best = kInf;
  for (MachineId h : hs) {
    best = std::min(best, approach(k, i, h) + crossing_between(h, i, j) + approach(k, j, h));
  }
  return best;
}

InstanceData Instance::WithWindows(std::span<const TimeWindow> windows) const {
  InstanceData copy = data_;
  for (std::size_t i = 0; i < copy.nodes.size() && i < windows.size(); ++i) copy.nodes[i].window = windows[i];
  return copy;
}

ArcSets ClassifyArcs(const Instance& inst) {
  ArcSets arcs;
  for (NodeId i = 0; i < inst.num_nodes(); ++i) {
    for (NodeId j = 0; j < inst.num_nodes(); ++j) {
      if (i == j) continue;
      if (inst.is_machine_arc(i, j)) {
        arcs.machine.emplace_back(i, j);
      } else {
        arcs.straight.emplace_back(i, j);
      }
    }
  }
  return arcs;
}

}  // namespace pdptwse
