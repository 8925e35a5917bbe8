#include "pdptwse/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "pdptwse/geometry.hpp"
#include "pdptwse/heuristic.hpp"
#include "pdptwse/io.hpp"

namespace pdptwse {

BasePdptw ParseLiLim(std::string_view text, std::optional<int> max_customer_id) {
  std::istringstream in{std::string(text)};
  BasePdptw base;
  if (!(in >> base.vehicles >> base.capacity >> base.speed)) throw FormatError("Li&Lim header needs three numbers");
  base.max_customer_id = max_customer_id.value_or(-1);
  BaseTask t;
  while (in >> t.id) {
    if (!(in >> t.x >> t.y >> t.demand >> t.open >> t.close >> t.service >> t.pickup >> t.delivery)) {
      throw FormatError("truncated Li&Lim row for task " + std::to_string(t.id));
    }
    base.tasks.push_back(t);
  }
  if (!in.eof()) throw FormatError("non-numeric token in Li&Lim file");
  if (base.tasks.empty() || base.tasks[0].id != 0) throw FormatError("Li&Lim file must start with depot row 0");
  for (std::size_t a = 0; a < base.tasks.size(); ++a) {
    if (base.tasks[a].id != static_cast<int>(a)) throw FormatError("Li&Lim task ids must be consecutive");
  }
  return base;
}

std::string WriteLiLim(const BasePdptw& base) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::string(buf);
  };
  std::string out = std::to_string(base.vehicles) + "\t" + num(base.capacity) + "\t" + num(base.speed) + "\n";
  for (const BaseTask& t : base.tasks) {
    out += std::to_string(t.id) + "\t" + num(t.x) + "\t" + num(t.y) + "\t" + std::to_string(t.demand) + "\t" +
           num(t.open) + "\t" + num(t.close) + "\t" + num(t.service) + "\t" + std::to_string(t.pickup) + "\t" +
           std::to_string(t.delivery) + "\n";
  }
  return out;
}

BasePdptw LoadLiLim(const std::string& path) { return ParseLiLim(ReadFile(path)); }

BasePdptw TruncateRequests(const BasePdptw& base, int n) {
  const int m = static_cast<int>(base.tasks.size());
  auto real = [&](int id) {
    return id > 0 && id < m && base.tasks[id].demand != 0 &&
           (base.max_customer_id < 0 || id <= base.max_customer_id);
  };
  std::vector<int> picks;
  for (int id = 1; id < m && static_cast<int>(picks.size()) < n; ++id) {
    const BaseTask& t = base.tasks[id];
    if (t.pickup != 0 || t.demand <= 0 || !real(id) || !real(t.delivery)) continue;
    const BaseTask& d = base.tasks[t.delivery];
    if (d.pickup != id || d.demand != -t.demand) continue;
    picks.push_back(id);
  }
  if (static_cast<int>(picks.size()) < n) {
    throw GenerationError("base instance has only " + std::to_string(picks.size()) + " usable requests");
  }
  BasePdptw out;
  out.vehicles = base.vehicles;
  out.capacity = base.capacity;
  out.speed = base.speed;
  out.tasks.push_back(base.tasks[0]);
  for (int a = 0; a < n; ++a) {
    BaseTask t = base.tasks[picks[a]];
    t.id = a + 1;
    t.pickup = 0;
    t.delivery = n + a + 1;
    out.tasks.push_back(t);
  }
  for (int a = 0; a < n; ++a) {
    BaseTask t = base.tasks[base.tasks[picks[a]].delivery];
    t.id = n + a + 1;
    t.pickup = a + 1;
    t.delivery = 0;
    out.tasks.push_back(t);
  }
  return out;
}

std::string InstanceName(const GenConfig& cfg) {
  return std::to_string(cfg.requests) + "R_" + std::to_string(cfg.requests) + "V_" + std::to_string(cfg.regions) +
         (cfg.family == Family::kIsland ? "I_" : "F_") + std::to_string(cfg.machines) + "M";
}

std::vector<Vehicle> GenVehicles(const BasePdptw& base, const GenConfig& cfg, std::mt19937_64& rng) {
  int max_q = 0;
  for (const BaseTask& t : base.tasks) max_q = std::max(max_q, t.demand);
  const double bq = max_q / 0.6;
  const double step = RoundHalfAway(cfg.capacity_step * bq);
  const int t = cfg.vehicle_types;
  const int lo = -(t / 2);
  std::vector<Vehicle> out;
  for (int k = 0; k < cfg.requests; ++k) {
    const int r = k < t ? lo + k : lo + static_cast<int>(rng() % static_cast<std::uint64_t>(t));
    out.push_back({bq + r * step, base.speed});
  }
  return out;
}

namespace {

BasePdptw Prepare(const BasePdptw& base, const GenConfig& cfg) {
  if (cfg.requests < 1) throw GenerationError("at least one request required");
  if (cfg.regions < 1) throw GenerationError("at least one region required");
  if (cfg.machines < 1) throw GenerationError("at least one machine required");
  return TruncateRequests(base, cfg.requests);
}

InstanceData Skeleton(const BasePdptw& b, const GenConfig& cfg) {
  InstanceData d;
  d.name = InstanceName(cfg);
  d.num_requests = cfg.requests;
  d.num_regions = cfg.regions;
  for (const BaseTask& t : b.tasks) {
    Node v;
    v.pos = {t.x, t.y, 0.0};
    v.demand = t.demand;
    v.window = {t.open, t.close};
    v.service = t.service;
    d.nodes.push_back(v);
  }
  d.nodes[0].demand = 0;
  d.nodes[0].service = 0.0;
  return d;
}

using Key = std::pair<double, double>;

}  // namespace

IslandLayout LayoutIslands(const BasePdptw& base, const GenConfig& cfg) {
  const BasePdptw b = Prepare(base, cfg);
  std::mt19937_64 rng(cfg.seed);
  InstanceData d = Skeleton(b, cfg);
  const int n = cfg.requests;
  const int z = cfg.regions;

  std::vector<Point> customers;
  for (int i = 1; i <= 2 * n; ++i) customers.push_back(d.nodes[i].pos);
  std::vector<int> label;
  try {
    label = KMeans(customers, z, rng);
  } catch (const std::invalid_argument& e) {
    throw GenerationError(std::string("region split failed: ") + e.what());
  }
  std::vector<Point> centroid(z);
  std::vector<int> count(z, 0);
  for (int c = 0; c < 2 * n; ++c) {
    centroid[label[c]].x += customers[c].x;
    centroid[label[c]].y += customers[c].y;
    ++count[label[c]];
  }
  for (int r = 0; r < z; ++r) centroid[r] = {centroid[r].x / count[r], centroid[r].y / count[r], 0.0};
  int depot_region = 0;
  for (int r = 1; r < z; ++r) {
    if (Distance(d.nodes[0].pos, centroid[r]) < Distance(d.nodes[0].pos, centroid[depot_region])) depot_region = r;
  }
  d.nodes[0].region = depot_region;
  for (int i = 1; i <= 2 * n; ++i) d.nodes[i].region = label[i - 1];

  // Hull per region; degenerate shapes get dummy points around the centroid.
  std::vector<std::vector<Point>> hulls(z);
  for (int r = 0; r < z; ++r) {
    std::vector<Point> pts;
    for (int i = 0; i <= 2 * n; ++i) {
      if (d.nodes[i].region == r) pts.push_back(d.nodes[i].pos);
    }
    std::vector<int> hull = ConvexHull(pts);
    for (int tries = 0; hull.size() < 3; ++tries) {
      if (tries == 100) throw GenerationError("could not build a hull for region " + std::to_string(r));
      const double theta = 2.0 * std::numbers::pi * std::generate_canonical<double, 53>(rng);
      pts.push_back({centroid[r].x + 5.0 * std::cos(theta), centroid[r].y + 5.0 * std::sin(theta), 0.0});
      hull = ConvexHull(pts);
    }
    for (int v : hull) hulls[r].push_back(pts[v]);
  }
  const std::vector<int> anchor = MinWeightClique(hulls);

  std::set<Key> occupied;
  for (const Node& v : d.nodes) occupied.insert({v.pos.x, v.pos.y});
  d.machines.assign(cfg.machines, Machine{{}, 1.0});
  for (int r = 0; r < z; ++r) {
    const auto& hull = hulls[r];
    const int m = static_cast<int>(hull.size());
    const Point v = hull[anchor[r]];
    for (int h = 0; h < cfg.machines; ++h) {
      std::optional<Point> best;
      double best_score = kInf;
      for (int e : {1, m - 1}) {
        const Point u = hull[(anchor[r] + e) % m];
        const double len = Distance(v, u);
        // Probe along the edge, continuing past its end if it is crowded.
        for (double s = kStationClearance; s <= len + 1000.0; s += 0.5) {
          const double lam = s / len;
          const Point p{RoundHalfAway(v.x + lam * (u.x - v.x)), RoundHalfAway(v.y + lam * (u.y - v.y)), 0.0};
          if (Distance(p, v) < kStationClearance - 1e-12 || occupied.count({p.x, p.y})) continue;
          double score = 0.0;
          for (int o = 0; o < z; ++o) {
            if (o != r) score += Distance(p, hulls[o][anchor[o]]);
          }
          if (score < best_score) {
            best_score = score;
            best = p;
          }
          break;
        }
      }
      if (!best) throw GenerationError("no free station position in region " + std::to_string(r));
      occupied.insert({best->x, best->y});
      d.machines[h].stations.push_back({r, *best});
    }
  }
  d.vehicles = GenVehicles(b, cfg, rng);
  return {std::move(d), std::move(hulls), anchor};
}

InstanceData GenMultiIsland(const BasePdptw& base, const GenConfig& cfg) { return LayoutIslands(base, cfg).data; }

InstanceData GenMultiFloor(const BasePdptw& base, const GenConfig& cfg) {
  const BasePdptw b = Prepare(base, cfg);
  std::mt19937_64 rng(cfg.seed);
  InstanceData d = Skeleton(b, cfg);
  const int z = cfg.regions;
  for (std::size_t i = 1; i < d.nodes.size(); ++i) {
    const int floor = static_cast<int>(rng() % static_cast<std::uint64_t>(z));
    d.nodes[i].region = floor;
    d.nodes[i].pos.z = floor;
  }
  double lo_x = kInf, hi_x = -kInf, lo_y = kInf, hi_y = -kInf;
  std::set<Key> occupied;
  for (const Node& v : d.nodes) {
    lo_x = std::min(lo_x, v.pos.x);
    hi_x = std::max(hi_x, v.pos.x);
    lo_y = std::min(lo_y, v.pos.y);
    hi_y = std::max(hi_y, v.pos.y);
    occupied.insert({v.pos.x, v.pos.y});
  }
  const double cx = RoundHalfAway((lo_x + hi_x) / 2.0);
  const double cy = RoundHalfAway((lo_y + hi_y) / 2.0);
  for (int h = 0; h < cfg.machines; ++h) {
    double x = cx;
    for (int step = 1; occupied.count({x, cy}); ++step) {
      x = cx + (step % 2 == 1 ? 1 : -1) * ((step + 1) / 2);
    }
    occupied.insert({x, cy});
    Machine m{{}, 0.2};
    for (int f = 0; f < z; ++f) m.stations.push_back({f, {x, cy, static_cast<double>(f)}});
    d.machines.push_back(std::move(m));
  }
  d.vehicles = GenVehicles(b, cfg, rng);
  return d;
}

RepairResult EnsureFeasibility(const InstanceData& data) {
  RepairResult out;
  out.data = data;
  const int limit = std::max(1, static_cast<int>(data.machines.size()) - 1);
  for (int pass = 0;; ++pass) {
    if (pass == 200) throw GenerationError("feasibility repair did not settle");
    const Instance inst(out.data);
    Inserter ins(inst);
    ins.set_relaxed(true);
    ins.set_cost(InsertionCost::kArrival);
    ins.set_machine_limit(limit);
    Solution sol = EmptySolution(inst);
    bool changed = false;
    for (NodeId p : GreedyOrder(inst)) {
      const auto cl = ins.CandidateList(sol, p);
      const InsertionCandidate* feasible = nullptr;
      const InsertionCandidate* fallback = nullptr;
      for (const auto& c : cl) {
        if (c.feasible) {
          if (!feasible || c.cost < feasible->cost) feasible = &c;
        } else if (!fallback || c.cost < fallback->cost) {
          fallback = &c;
        }
      }
      const InsertionCandidate* pick = feasible ? feasible : fallback;
      if (!pick) throw GenerationError("no insertion position for request " + std::to_string(p));
      changed |= !pick->feasible;
      ins.Apply(sol, ins.Detail(sol, *pick));
    }
    out.passes = pass + 1;
    if (!changed) {
      sol.feasible = true;
      out.solution = std::move(sol);
      return out;
    }
    out.changed = true;
    const auto& w = ins.windows();
    for (std::size_t i = 0; i < out.data.nodes.size(); ++i) out.data.nodes[i].window = w[i];
    out.data.nodes[0].window.close = std::max(w[0].close, w[inst.depot_end()].close);
    for (std::size_t k = 0; k < out.data.vehicles.size(); ++k) out.data.vehicles[k].capacity = ins.capacities()[k];
  }
}

InstanceData Generate(const BasePdptw& base, const GenConfig& cfg) {
  InstanceData d = cfg.family == Family::kIsland ? GenMultiIsland(base, cfg) : GenMultiFloor(base, cfg);
  return EnsureFeasibility(d).data;
}

}  // namespace pdptwse
