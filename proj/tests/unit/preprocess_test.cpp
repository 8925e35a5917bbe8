#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pdptwse/io.hpp"
#include "pdptwse/oracle.hpp"
#include "pdptwse/preprocess.hpp"

namespace pdptwse {
namespace {

using testing::TwoIslandData;

// True when sol only uses arcs, machines and machine orders that survive.
::testing::AssertionResult RespectsReduction(const Instance& inst, const PreprocessResult& pre, const Solution& sol) {
  for (const auto& route : sol.routes) {
    for (std::size_t a = 0; a + 1 < route.size(); ++a) {
      const NodeId i = route[a].node, j = route[a + 1].node;
      if (i == 0 && j == inst.depot_end()) continue;
      if (!pre.kept(i, j)) {
        return ::testing::AssertionFailure() << "arc " << i << "->" << j << " removed by " << ArcRuleName(pre.rule(i, j));
      }
      const NodeId v = route[a + 1].node;
      if (inst.is_customer(v)) {
        const TimeWindow& w = pre.windows[v];
        if (route[a + 1].start < w.open - kTimeEps || route[a + 1].start > w.close + kTimeEps) {
          return ::testing::AssertionFailure() << "node " << v << " outside shrunk window";
        }
      }
    }
  }
  for (MachineId h = 0; h < static_cast<MachineId>(sol.machines.size()); ++h) {
    const auto& seq = sol.machines[h];
    for (std::size_t a = 0; a < seq.size(); ++a) {
      const auto elig = pre.eligible(seq[a].from, seq[a].to);
      if (std::find(elig.begin(), elig.end(), h) == elig.end()) {
        return ::testing::AssertionFailure() << "machine " << h << " filtered on " << seq[a].from << "->" << seq[a].to;
      }
      for (std::size_t b = a + 1; b < seq.size(); ++b) {
        if (pre.gamma_dropped({h, seq[a].from, seq[a].to, seq[b].from, seq[b].to})) {
          return ::testing::AssertionFailure() << "dropped order used on machine " << h;
        }
      }
    }
  }
  return ::testing::AssertionSuccess();
}

TEST(Shrink, WindowsOnlyTighten) {
  const Instance inst(TwoIslandData());
  const auto w = ShrinkWindows(inst);
  for (NodeId i = 1; i <= 2 * inst.n(); ++i) {
    EXPECT_GE(w[i].open, inst.window(i).open);
    EXPECT_LE(w[i].close, inst.window(i).close);
  }
}

TEST(Shrink, HandValuesOnLine) {
  // Depot (0,0) window [0,1000]; pickup at (10,0), delivery at (10,10).
  InstanceData d = testing::LineInstance(1);
  const Instance inst(d);
  const auto w = ShrinkWindows(inst);
  // l'_d = 1000 - d(2, end) - s = 1000 - sqrt(200) - 5.
  EXPECT_NEAR(w[2].close, 1000 - std::sqrt(200.0) - 5, 1e-9);
  EXPECT_NEAR(w[1].close, w[2].close - 10 - 5, 1e-9);
  EXPECT_NEAR(w[1].open, 10, 1e-9);
  EXPECT_NEAR(w[2].open, 10 + 5 + 10, 1e-9);
}

TEST(Shrink, SecondPassIsNoOp) {
  for (const auto& sc : testing::SmallInstanceSet(12)) {
    const Instance inst(sc.data);
    const auto w = ShrinkWindows(inst);
    std::vector<TimeWindow> body(w.begin(), w.end() - 1);
    const Instance again(inst.WithWindows(body));
    const auto w2 = ShrinkWindows(again);
    for (NodeId i = 0; i <= 2 * inst.n(); ++i) {
      EXPECT_NEAR(w2[i].open, w[i].open, 1e-9) << sc.label << " node " << i;
      EXPECT_NEAR(w2[i].close, w[i].close, 1e-9) << sc.label << " node " << i;
    }
  }
}

TEST(Shrink, EmptyWindowIsInfeasible) {
  InstanceData d = testing::LineInstance(1);
  d.nodes[1].window = {900, 1000};
  d.nodes[2].window = {0, 100};
  const Instance inst(d);
  EXPECT_THROW(Preprocess(inst), InfeasibleInstance);
}

TEST(Arcs, StructuralRules) {
  const Instance inst(TwoIslandData());
  const auto pre = Preprocess(inst);
  const NodeId end = inst.depot_end();
  EXPECT_EQ(pre.rule(0, 3), ArcRule::kPriority);
  EXPECT_EQ(pre.rule(3, 1), ArcRule::kPriority);
  EXPECT_EQ(pre.rule(end, 1), ArcRule::kPriority);
  EXPECT_EQ(pre.rule(1, end), ArcRule::kPairing);
  EXPECT_EQ(pre.rule(2, 2), ArcRule::kSelf);
  EXPECT_TRUE(pre.kept(0, 1));
  EXPECT_TRUE(pre.kept(4, end));
}

TEST(Arcs, CapacityRule) {
  const Instance inst(testing::LineInstance(2, 15.0));
  const auto pre = Preprocess(inst);
  EXPECT_EQ(pre.rule(1, 2), ArcRule::kCapacity);
  EXPECT_EQ(pre.rule(1, 4), ArcRule::kCapacity);
  EXPECT_EQ(pre.rule(3, 4), ArcRule::kCapacity);
  EXPECT_TRUE(pre.kept(1, 3));
}

TEST(Arcs, TimeWindowRule) {
  InstanceData d = testing::LineInstance(2);
  d.nodes[1].window = {500, 600};
  d.nodes[2].window = {0, 100};
  const Instance inst(d);
  const auto pre = Preprocess(inst);
  EXPECT_EQ(pre.rule(1, 2), ArcRule::kTimeWindow);
}

TEST(Arcs, NoPreprocessKeepsEverythingUseful) {
  const Instance inst(TwoIslandData());
  const auto pre = NoPreprocess(inst);
  EXPECT_TRUE(pre.kept(3, 1));
  EXPECT_TRUE(pre.kept(0, 3));
  EXPECT_FALSE(pre.kept(1, 0));
  EXPECT_TRUE(pre.dropped_gamma.empty());
}

TEST(Machines, EligibilityIsSubset) {
  for (const auto& sc : testing::SmallInstanceSet(24)) {
    const Instance inst(sc.data);
    const auto pre = Preprocess(inst);
    for (NodeId i = 0; i < inst.num_nodes(); ++i) {
      for (NodeId j = 0; j < inst.num_nodes(); ++j) {
        for (MachineId h : pre.eligible(i, j)) {
          const auto full = inst.eligible(i, j);
          EXPECT_NE(std::find(full.begin(), full.end(), h), full.end());
        }
      }
    }
  }
}

TEST(Safety, OptimalSolutionsSurvive) {
  for (const auto& sc : testing::SmallInstanceSet(48)) {
    const Instance inst(sc.data);
    const auto pre = Preprocess(inst);
    const auto best = BruteForce(inst);
    ASSERT_TRUE(best.feasible) << sc.label;
    EXPECT_TRUE(RespectsReduction(inst, pre, best.best)) << sc.label;
  }
}

TEST(Safety, EveryFeasiblePointSurvives) {
  for (const auto& sc : testing::SmallInstanceSet(24)) {
    const Instance inst(sc.data);
    const auto pre = Preprocess(inst);
    OracleLimits limits;
    long checked = 0;
    EnumerateFeasiblePoints(inst, limits, [&](const Solution& s) {
      ++checked;
      const auto ok = RespectsReduction(inst, pre, s);
      EXPECT_TRUE(ok) << sc.label;
      return static_cast<bool>(ok);
    });
    EXPECT_GT(checked, 0) << sc.label;
  }
}

TEST(Io, ResultRoundTrip) {
  const Instance inst(TwoIslandData());
  const auto pre = Preprocess(inst);
  const std::string text = PreprocessToJson(pre);
  const auto back = PreprocessFromJson(text);
  EXPECT_EQ(PreprocessToJson(back), text);
  EXPECT_EQ(back.arc_rule, pre.arc_rule);
  EXPECT_EQ(back.dropped_gamma, pre.dropped_gamma);
}

}  // namespace
}  // namespace pdptwse
