#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "pdptwse/oracle.hpp"
#include "pdptwse/schedule_lp.hpp"
#include "schedule_oracle.hpp"

namespace pdptwse {
namespace {

using testing::TwoIslandData;

TEST(Oracle, SingleRequestHandValue) {
  const Instance inst(testing::LineInstance(1));
  const OracleResult r = BruteForce(inst);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.best.cost, 30 + std::sqrt(200.0), 1e-6);
  EXPECT_TRUE(Validate(inst, r.best).ok());
}

TEST(Oracle, TwoIslandOptimum) {
  const Instance inst(TwoIslandData());
  const OracleResult r = BruteForce(inst);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.best.cost, 410.0, 1e-6);
  EXPECT_TRUE(Validate(inst, r.best).ok()) << Validate(inst, r.best).ToString();
  EXPECT_GT(r.lp_solves, 0);
}

TEST(Oracle, TwoRegionsMatchGridSearch) {
  std::mt19937_64 rng(31);
  int feasible = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst(testing::LineIslands(rng, 1, 1, 200));
    const OracleResult r = BruteForce(inst);
    if (!r.feasible) continue;
    ++feasible;
    const testing::GridResult grid = testing::GridSearch(inst, ExtractSequences(r.best));
    ASSERT_TRUE(grid.feasible) << "trial " << trial;
    EXPECT_NEAR(r.best.cost, grid.cost, 1e-3) << "trial " << trial;
  }
  EXPECT_GE(feasible, 10);
}

TEST(Oracle, RefusesPastBudget) {
  const Instance big(testing::LineInstance(4));
  EXPECT_THROW(BruteForce(big), OracleRefused);
  OracleLimits tiny;
  tiny.max_combinations = 1;
  EXPECT_THROW(BruteForce(Instance(TwoIslandData()), tiny), OracleRefused);
}

TEST(Oracle, InfeasibleInstance) {
  // The only vehicle cannot carry the load.
  const Instance inst(testing::LineInstance(1, 5.0));
  const OracleResult r = BruteForce(inst);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(EnumerateFeasiblePoints(inst, {}, [](const Solution&) { return true; }), 0);
}

TEST(Oracle, PreprocessingDoesNotChangeTheOptimum) {
  for (const auto& sc : testing::SmallInstanceSet(24)) {
    const Instance inst(sc.data);
    OracleLimits on;
    on.preprocess = true;
    const OracleResult a = BruteForce(inst);
    const OracleResult b = BruteForce(inst, on);
    ASSERT_EQ(a.feasible, b.feasible) << sc.label;
    if (a.feasible) {
      EXPECT_NEAR(a.best.cost, b.best.cost, 1e-6) << sc.label;
    }
    EXPECT_LE(b.combinations, a.combinations) << sc.label;
  }
}

TEST(Enumerate, PointsAreFeasibleAndBoundedByTheOptimum) {
  for (const auto& sc : testing::SmallInstanceSet(8)) {
    const Instance inst(sc.data);
    const OracleResult best = BruteForce(inst);
    ASSERT_TRUE(best.feasible) << sc.label;
    double lowest = kInf;
    const long n = EnumerateFeasiblePoints(inst, {}, [&](const Solution& s) {
      EXPECT_TRUE(Validate(inst, s).ok()) << sc.label;
      lowest = std::min(lowest, s.cost);
      return true;
    });
    EXPECT_GT(n, 0) << sc.label;
    EXPECT_NEAR(lowest, best.best.cost, 1e-6) << sc.label;
  }
}

TEST(Enumerate, OnePointPerVehicleForASingleRequest) {
  InstanceData d = testing::LineInstance(1);
  d.vehicles.assign(3, d.vehicles[0]);
  const Instance inst(d);
  EXPECT_EQ(EnumerateFeasiblePoints(inst, {}, [](const Solution&) { return true; }), 3);
}

TEST(Enumerate, StopsWhenAsked) {
  const Instance inst(TwoIslandData());
  int calls = 0;
  const long n = EnumerateFeasiblePoints(inst, {}, [&](const Solution&) { return ++calls < 3; });
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(n, 3);
}

}  // namespace
}  // namespace pdptwse
