#include "fixtures.hpp"

namespace pdptwse::testing {

std::string DataPath(const std::string& name) { return std::string(PDPTWSE_TEST_DATA_DIR) + "/" + name; }

InstanceData TwoIslandData() {
  InstanceData d;
  d.name = "two_island";
  d.num_requests = 2;
  d.num_regions = 2;
  auto node = [](double x, int region, int demand, double e, double l, double s) {
    Node v;
    v.pos = {x, 0.0, 0.0};
    v.region = region;
    v.demand = demand;
    v.window = {e, l};
    v.service = s;
    return v;
  };
  d.nodes = {
      node(0, 0, 0, 0, 300, 0),        // depot
      node(10, 0, 10, 60, 100, 10),    // pickup 1
      node(110, 1, 10, 100, 150, 10),  // pickup 2
      node(75, 1, -10, 150, 200, 10),  // delivery 3
      node(20, 0, -10, 220, 260, 10),  // delivery 4
  };
  d.vehicles = {{20.0, 1.0}, {20.0, 1.0}};
  d.machines = {Machine{{Station{0, {30, 0, 0}}, Station{1, {45, 0, 0}}}, 1.0}};
  return d;
}

Solution TwoIslandSolution() {
  Solution s;
  s.feasible = true;
  s.routes = {
      {{0, 0, 0}, {2, 110, 10}, {4, 220, 0}, {5, 250, 0}},
      {{0, 30, 0}, {1, 60, 10}, {3, 150, 0}, {5, 260, 0}},
  };
  s.machines = {{{0, 2, 0, 30}, {1, 3, 1, 90}, {2, 4, 0, 185}, {3, 5, 1, 215}}};
  s.cost = 480;
  return s;
}

InstanceData LineInstance(int n, double capacity) {
  InstanceData d;
  d.name = "line";
  d.num_requests = n;
  d.num_regions = 1;
  Node depot;
  depot.window = {0, 1000};
  d.nodes.push_back(depot);
  for (int i = 1; i <= n; ++i) {
    Node p;
    p.pos = {10.0 * i, 0, 0};
    p.demand = 10;
    p.window = {0, 1000};
    p.service = 5;
    d.nodes.push_back(p);
  }
  for (int i = 1; i <= n; ++i) {
    Node q;
    q.pos = {10.0 * i, 10, 0};
    q.demand = -10;
    q.window = {0, 1000};
    q.service = 5;
    d.nodes.push_back(q);
  }
  d.vehicles.assign(n, Vehicle{capacity, 1.0});
  return d;
}

BasePdptw ShiftedBase(const BasePdptw& base, int offset) {
  BasePdptw out = base;
  int skipped = 0;
  for (auto& t : out.tasks) {
    if (skipped == offset) break;
    if (t.id == 0 || t.pickup != 0 || t.demand <= 0) continue;
    out.tasks[t.delivery].demand = 0;
    t.demand = 0;
    ++skipped;
  }
  return out;
}

std::vector<SmallCase> SmallInstanceSet(int count) {
  const BasePdptw bases[2] = {LoadLiLim(DataPath("synthetic_type1.txt")), LoadLiLim(DataPath("synthetic_type2.txt"))};
  std::vector<SmallCase> out;
  for (int c = 0; c < count; ++c) {
    SmallCase sc;
    GenConfig& cfg = sc.config;
    cfg.requests = 1 + c % 3;
    cfg.family = (c / 3) % 2 == 0 ? Family::kIsland : Family::kFloor;
    cfg.regions = 1 + (c / 6) % 2;
    cfg.machines = 1 + (c / 12) % 2;
    cfg.seed = 1000 + static_cast<std::uint64_t>(c);
    const int which = (c / 24) % 2;
    const BasePdptw base = ShiftedBase(bases[which], (c * 7) % 20);
    sc.data = Generate(base, cfg);
    sc.label = "case" + std::to_string(c) + "_" + (which ? "t2_" : "t1_") + InstanceName(cfg);
    out.push_back(std::move(sc));
  }
  return out;
}

}  // namespace pdptwse::testing
