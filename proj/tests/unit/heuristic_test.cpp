#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "pdptwse/heuristic.hpp"
#include "pdptwse/oracle.hpp"

namespace pdptwse {
namespace {

using testing::TwoIslandData;
using testing::TwoIslandSolution;

// Region 0 holds the depot (x = 0) and station (30, 0); region 1 holds all
// customers and station (45, 0). Vehicle 0 serves request 1 and vehicle 1
// request 2; vehicle 0's return crossing sits behind vehicle 1's although
// the machine is idle much earlier. Request 3 is unassigned.
InstanceData LateReturnData() {
  InstanceData d;
  d.name = "late_return";
  d.num_requests = 3;
  d.num_regions = 2;
  auto node = [](double x, int region, int demand) {
    Node v;
    v.pos = {x, 0, 0};
    v.region = region;
    v.demand = demand;
    v.window = {0, 1000};
    return v;
  };
  d.nodes = {node(0, 0, 0),   node(50, 1, 10),  node(55, 1, 10), node(52, 1, 10),
             node(60, 1, -10), node(65, 1, -10), node(58, 1, -10)};
  d.vehicles = {{100, 1}, {100, 1}};
  d.machines = {Machine{{Station{0, {30, 0, 0}}, Station{1, {45, 0, 0}}}, 1.0}};
  return d;
}

Solution LateReturnSolution() {
  Solution s;
  s.feasible = false;  // request 3 is still open
  s.routes = {
      {{0, 0, 0}, {1, 50, 10}, {4, 60, 0}, {7, 235, 0}},
      {{0, 0, 0}, {2, 125, 10}, {5, 135, 0}, {7, 205, 0}},
  };
  s.machines = {{{0, 1, 0, 30}, {0, 2, 1, 100}, {5, 7, 1, 160}, {4, 7, 0, 190}}};
  s.cost = 440;
  return s;
}

TEST(MachineTravel, IdleMachine) {
  const Instance inst(TwoIslandData());
  const Solution empty = EmptySolution(inst);
  const auto c = BestMachineTravel(inst, empty, {}, 0, 1, 3, 60, {});
  ASSERT_TRUE(c.has_value());
  EXPECT_DOUBLE_EQ(c->wait, 0.0);
  // s_1 + d-bar(1) + O + d-bar(3) = 10 + 20 + 15 + 30.
  EXPECT_DOUBLE_EQ(c->delta, 75.0);
  EXPECT_DOUBLE_EQ(c->travel.start, 90.0);
}

TEST(MachineTravel, BusyMachineWaits) {
  const Instance inst(TwoIslandData());
  Solution s = EmptySolution(inst);
  s.machines[0].push_back({0, 2, 1, 80});
  const auto c = BestMachineTravel(inst, s, {}, 0, 1, 3, 60, {});
  ASSERT_TRUE(c.has_value());
  // Busy until 95 at the far station, back at 110; the vehicle is ready at 90.
  EXPECT_DOUBLE_EQ(c->wait, 20.0);
  EXPECT_DOUBLE_EQ(c->travel.start, 110.0);
}

TEST(MachineTravel, PicksSmallestDelta) {
  InstanceData d = TwoIslandData();
  Machine fast = d.machines[0];
  fast.speed = 3.0;
  d.machines.push_back(fast);
  const Instance inst(d);
  const auto c = BestMachineTravel(inst, EmptySolution(inst), {}, 0, 1, 3, 60, {});
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->machine, 1);
  EXPECT_DOUBLE_EQ(c->delta, 10 + 20 + 5 + 30);
}

TEST(MachineTravel, WindowStopsTheScan) {
  InstanceData d = TwoIslandData();
  d.nodes[3].window = {150, 100 + 10 + 20 + 15 + 30 - 1};
  const Instance inst(d);
  EXPECT_FALSE(BestMachineTravel(inst, EmptySolution(inst), {}, 0, 1, 3, 100, {}).has_value());
}

TEST(Analyze, SingleRegionMatchesSimulation) {
  const Instance inst(testing::LineInstance(1));
  Inserter ins(inst);
  ins.set_cost(InsertionCost::kArrival);
  const auto c = ins.Analyze(EmptySolution(inst), 0, 2, 2, 1, true);
  ASSERT_TRUE(c.feasible);
  EXPECT_NEAR(c.cost, 10 + 5 + 10 + 5 + std::sqrt(200.0), 1e-9);
  ASSERT_EQ(c.route.size(), 4u);
  EXPECT_EQ(c.route[1].load, 10);
  EXPECT_EQ(c.route[2].load, 0);
}

TEST(Analyze, DownstreamWindowViolation) {
  InstanceData d = testing::LineInstance(2);
  d.nodes[3].window = {0, 30};
  const Instance inst(d);
  Inserter ins(inst);
  Solution s = EmptySolution(inst);
  s.routes = {{{0, 0, 0}, {1, 10, 10}, {3, 25, 0}, {5, 50, 0}}, {{0, 0, 0}, {5, 0, 0}}};
  s.machines = {};
  // Pickup 2 before node 3 delays node 3 past 30.
  EXPECT_FALSE(ins.Analyze(s, 0, 3, 3, 2, false).feasible);
  EXPECT_TRUE(ins.Analyze(s, 0, 4, 4, 2, false).feasible);
}

TEST(Analyze, ReschedulingCanShortenTheRoute) {
  const Instance inst(LateReturnData());
  const Solution s = LateReturnSolution();
  const auto report = Validate(inst, s);
  for (const auto& v : report.violations) EXPECT_TRUE(v.rule == Rule::kCoverage) << report.ToString();
  Inserter ins(inst);
  ins.set_cost(InsertionCost::kIncrease);
  const auto c = ins.Analyze(s, 0, 3, 3, 3, true);
  ASSERT_TRUE(c.feasible);
  EXPECT_LT(c.arrival, s.routes[0].back().start);
  EXPECT_NEAR(c.arrival, 120.0, 1e-9);
  EXPECT_LT(c.cost, 0.0);
  Solution t = s;
  ins.Apply(t, c);
  EXPECT_NEAR(t.cost, SolutionCost(t), 1e-9);
  t.feasible = true;
  EXPECT_TRUE(Validate(inst, t).ok()) << Validate(inst, t).ToString();
}

TEST(Apply, StaleCandidateRejected) {
  const Instance inst(testing::LineInstance(2));
  Inserter ins(inst);
  Solution s = EmptySolution(inst);
  const auto a = ins.Detail(s, ins.Analyze(s, 0, 2, 2, 1, false));
  const auto b = ins.Detail(s, ins.Analyze(s, 1, 2, 2, 2, false));
  ins.Apply(s, a);
  EXPECT_THROW(ins.Apply(s, b), StaleCandidate);
}

TEST(Apply, CostStaysIncremental) {
  for (const auto& sc : testing::SmallInstanceSet(12)) {
    const Instance inst(sc.data);
    Inserter ins(inst);
    Solution s = EmptySolution(inst);
    for (NodeId p : GreedyOrder(inst)) {
      const auto cl = ins.CandidateList(s, p);
      const auto it = std::find_if(cl.begin(), cl.end(), [](const auto& c) { return c.feasible; });
      if (it == cl.end()) break;
      ins.Apply(s, ins.Detail(s, *it));
      EXPECT_NEAR(s.cost, SolutionCost(s), 1e-6) << sc.label;
    }
  }
}

TEST(Greedy, SingleRequest) {
  const Instance inst(testing::LineInstance(1));
  const Solution s = GreedyInsertion(inst);
  ASSERT_TRUE(s.feasible);
  ASSERT_EQ(s.routes[0].size(), 4u);
  EXPECT_EQ(s.routes[0][1].node, 1);
  EXPECT_EQ(s.routes[0][2].node, 2);
}

TEST(Greedy, CapacitySplitsRequests) {
  // Both pickups close before either delivery opens, so loads overlap.
  InstanceData d = testing::LineInstance(2, 15.0);
  d.nodes[1].window = d.nodes[2].window = {0, 40};
  d.nodes[3].window = d.nodes[4].window = {200, 300};
  const Instance inst(d);
  const Solution s = GreedyInsertion(inst);
  ASSERT_TRUE(s.feasible);
  EXPECT_EQ(s.routes[0].size(), 4u);
  EXPECT_EQ(s.routes[1].size(), 4u);
}

TEST(Greedy, OrderByWindowWidth) {
  InstanceData d = testing::LineInstance(3);
  d.nodes[2].window = {0, 100};
  d.nodes[3].window = {0, 500};
  const Instance inst(d);
  EXPECT_EQ(GreedyOrder(inst), (std::vector<NodeId>{2, 3, 1}));
}

TEST(Greedy, NeverBeatsTheOracle) {
  for (const auto& sc : testing::SmallInstanceSet(24)) {
    const Instance inst(sc.data);
    const Solution g = GreedyInsertion(inst);
    const auto o = BruteForce(inst);
    ASSERT_TRUE(o.feasible) << sc.label;
    if (!g.feasible) continue;
    EXPECT_TRUE(Validate(inst, g).ok()) << sc.label << "\n" << Validate(inst, g).ToString();
    EXPECT_GE(g.cost, o.best.cost - 1e-6) << sc.label;
  }
}

TEST(SemiGreedy, ZeroAlphaMatchesGreedy) {
  for (const auto& sc : testing::SmallInstanceSet(24)) {
    const Instance inst(sc.data);
    Rng rng(7);
    SemiGreedyOptions opt;
    opt.order = GreedyOrder(inst);
    const Solution a = SemiGreedyInsertion(inst, 0.0, rng, opt);
    const Solution g = GreedyInsertion(inst);
    ASSERT_EQ(a.feasible, g.feasible) << sc.label;
    EXPECT_EQ(a.cost, g.cost) << sc.label;
    EXPECT_EQ(a.routes, g.routes) << sc.label;
    EXPECT_EQ(a.machines, g.machines) << sc.label;
  }
}

TEST(SemiGreedy, FullAlphaReachesEveryCandidate) {
  InstanceData one = testing::LineInstance(2);
  one.vehicles.resize(1);
  const Instance single(one);
  Rng rng(11);
  std::map<std::tuple<int, int>, int> hits;
  std::size_t cl_size = 0;
  SemiGreedyOptions opt;
  opt.order = {1, 2};
  int step = 0;
  opt.observer = [&](std::span<const InsertionCandidate> cl, std::span<const std::size_t> rcl, std::size_t chosen) {
    if (step++ % 2 == 0) return;
    EXPECT_EQ(rcl.size(), cl.size());
    cl_size = cl.size();
    ++hits[{cl[chosen].p_pos, cl[chosen].d_pos}];
  };
  const int draws = 10000;
  for (int r = 0; r < draws; ++r) ASSERT_TRUE(SemiGreedyInsertion(single, 1.0, rng, opt).feasible);
  ASSERT_EQ(cl_size, 6u);
  ASSERT_EQ(hits.size(), cl_size);
  const double p = 1.0 / cl_size;
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (const auto& [key, count] : hits) EXPECT_NEAR(count, draws * p, 3 * sigma);
}

TEST(SemiGreedy, RejectsBadAlpha) {
  const Instance inst(testing::LineInstance(1));
  Rng rng(1);
  EXPECT_THROW(SemiGreedyInsertion(inst, 1.5, rng), std::invalid_argument);
}

TEST(LpImprove, RemovesForcedWaiting) {
  const Instance inst(TwoIslandData());
  const Solution g = GreedyInsertion(inst);
  ASSERT_TRUE(g.feasible);
  const Solution l = LpImprove(inst, g);
  EXPECT_LT(l.cost, g.cost - 1e-6);
  EXPECT_TRUE(Validate(inst, l).ok()) << Validate(inst, l).ToString();
  EXPECT_NEAR(LpImprove(inst, l).cost, l.cost, 1e-9);
}

TEST(LpImprove, PercentFormula) {
  EXPECT_DOUBLE_EQ(LpImprovementPercent(500, 400), 20.0);
  EXPECT_DOUBLE_EQ(LpImprovementPercent(400, 400), 0.0);
}

TEST(Mslp, TwoIslandBeatsReference) {
  const Instance inst(TwoIslandData());
  MslpConfig cfg;
  cfg.max_iterations = 2000;
  const MslpResult r = Mslp(inst, cfg);
  ASSERT_TRUE(r.best.feasible);
  EXPECT_LE(r.best.cost, 480.0);
  EXPECT_TRUE(Validate(inst, r.best).ok());
}

TEST(Mslp, SingleRequestIsOptimal) {
  for (const auto& sc : testing::SmallInstanceSet(9)) {
    if (sc.config.requests != 1) continue;
    const Instance inst(sc.data);
    MslpConfig cfg;
    cfg.max_iterations = 50;
    EXPECT_NEAR(Mslp(inst, cfg).best.cost, BruteForce(inst).best.cost, 1e-6) << sc.label;
  }
}

TEST(Mslp, ReproducibleAndMonotone) {
  const auto cases = testing::SmallInstanceSet(6);
  const Instance inst(cases[5].data);
  MslpConfig cfg;
  cfg.max_iterations = 500;
  cfg.seed = 42;
  const MslpResult a = Mslp(inst, cfg);
  const MslpResult b = Mslp(inst, cfg);
  EXPECT_EQ(a.best.cost, b.best.cost);
  EXPECT_EQ(a.best.routes, b.best.routes);
  EXPECT_EQ(a.best.machines, b.best.machines);
  EXPECT_EQ(a.stats.feasible, b.stats.feasible);
  for (std::size_t i = 1; i < a.stats.history.size(); ++i) {
    EXPECT_LE(a.stats.history[i].cost, a.stats.history[i - 1].cost);
  }
}

TEST(Mslp, InfeasibleGivesSentinel) {
  InstanceData d = testing::LineInstance(1);
  d.vehicles[0].capacity = 5;
  const Instance inst(d);
  MslpConfig cfg;
  cfg.max_iterations = 20;
  const MslpResult r = Mslp(inst, cfg);
  EXPECT_FALSE(r.best.feasible);
  EXPECT_EQ(r.stats.feasible, 0);
}

}  // namespace
}  // namespace pdptwse
