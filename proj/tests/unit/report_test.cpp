#include <gtest/gtest.h>

#include <cmath>

#include "pdptwse/report.hpp"

namespace pdptwse {
namespace {

RunRecord MakeRun(std::string inst, std::string method, bool feasible, double cost, int run = 0) {
  RunRecord r;
  r.instance = std::move(inst);
  r.group = "3R_2V_2I_1M";
  r.method = std::move(method);
  r.run = run;
  r.seed = 7 + run;
  r.feasible = feasible;
  r.cost = cost;
  r.seconds = 0.5;
  r.time_to_best = 0.25;
  r.feasible_fraction = 0.75;
  r.lp_improvement = 2.5;
  r.iterations = 1000;
  return r;
}

TEST(Metrics, HandValues) {
  EXPECT_DOUBLE_EQ(Rpd(110, 100), 10.0);
  EXPECT_DOUBLE_EQ(Rpd(100, 100), 0.0);
  const std::vector<double> v{100, 110, 120};
  EXPECT_DOUBLE_EQ(Arpd(v, 100), 10.0);
  EXPECT_DOUBLE_EQ(Arpd({}, 100), 0.0);
  EXPECT_DOUBLE_EQ(GapPercent(200, 150), 25.0);
  EXPECT_DOUBLE_EQ(GapPercent(0, 0), 0.0);
}

TEST(Ranking, ScoresAreMeansOfScaledColumns) {
  std::vector<RankingRow> rows(3);
  rows[0] = {"a", 8.1, 18.82, 100.0};
  rows[1] = {"b", 100.0, 100.0, 68.75};
  rows[2] = {"c", 0.0, 0.0, 100.0};
  ScoreRanking(rows);
  EXPECT_NEAR(rows[0].arpd_score, 91.90, 1e-9);
  EXPECT_NEAR(rows[0].gap_score, 81.18, 1e-9);
  EXPECT_NEAR(rows[0].score, 91.03, 5e-3);
  EXPECT_NEAR(rows[1].score, 22.92, 5e-3);
  EXPECT_DOUBLE_EQ(rows[2].score, 100.0);
}

TEST(Ranking, FlatColumnScoresFull) {
  std::vector<RankingRow> rows(2);
  rows[0] = {"a", 3.0, 0.0, 50.0};
  rows[1] = {"b", 3.0, 0.0, 100.0};
  ScoreRanking(rows);
  EXPECT_DOUBLE_EQ(rows[0].arpd_score, 100.0);
  EXPECT_DOUBLE_EQ(rows[0].gap_score, 100.0);
  EXPECT_NEAR(rows[0].score, 250.0 / 3.0, 1e-9);
}

TEST(Build, ReferenceIsBestKnown) {
  const std::vector<RunRecord> runs{MakeRun("i1", "mslp", true, 100), MakeRun("i1", "mslp", true, 120, 1),
                                    MakeRun("i1", "greedy", true, 150), MakeRun("i2", "mslp", true, 50),
                                    MakeRun("i2", "greedy", false, 0)};
  const Report rep = BuildReport(runs);
  ASSERT_EQ(rep.ranking.size(), 2u);
  EXPECT_EQ(rep.ranking[0].method, "mslp");
  // mslp rpd: 0, 20, 0.
  EXPECT_NEAR(rep.ranking[0].arpd, 20.0 / 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(rep.ranking[0].feasible_rate, 100.0);
  EXPECT_NEAR(rep.ranking[1].arpd, 50.0, 1e-9);
  EXPECT_DOUBLE_EQ(rep.ranking[1].feasible_rate, 50.0);
  ASSERT_EQ(rep.groups.size(), 2u);
  const GroupSummary& g = rep.groups[1];
  EXPECT_EQ(g.method, "mslp");
  EXPECT_EQ(g.instances, 2);
  EXPECT_DOUBLE_EQ(g.min_solution, 75.0);
  EXPECT_DOUBLE_EQ(g.mean_solution, 80.0);
  EXPECT_TRUE(std::isnan(g.solver_solution));
}

TEST(Build, SolverRecordsAddGap) {
  const std::vector<RunRecord> runs{MakeRun("i1", "mslp", true, 100)};
  const std::vector<SolverRecord> solver{{"i1", "mip", true, 110, 88}};
  const Report rep = BuildReport(runs, solver);
  ASSERT_EQ(rep.ranking.size(), 2u);
  for (const auto& r : rep.ranking) {
    if (r.method == "mip") {
      EXPECT_NEAR(r.gap, 20.0, 1e-9);
      EXPECT_NEAR(r.arpd, 10.0, 1e-9);
    }
  }
}

TEST(Build, MismatchedCoverageThrows) {
  const std::vector<RunRecord> runs{MakeRun("i1", "mslp", true, 100), MakeRun("i2", "mslp", true, 90),
                                    MakeRun("i1", "greedy", true, 120)};
  EXPECT_THROW(BuildReport(runs), ReportError);
}

TEST(Csv, RunsRoundTrip) {
  const std::vector<RunRecord> runs{MakeRun("i1", "mslp", true, 100.125), MakeRun("i1", "greedy", false, 0, 3)};
  const std::string text = RunsToCsv(runs);
  const auto back = RunsFromCsv(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(RunsToCsv(back), text);
  EXPECT_EQ(back[1].run, 3);
  EXPECT_FALSE(back[1].feasible);
  EXPECT_DOUBLE_EQ(back[0].cost, 100.125);
}

TEST(Csv, SolverColumnsByName) {
  const auto rows = SolverFromCsv("method,instance,bound,solution\nmip,i1,90,100\nmip,i2,,\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].feasible);
  EXPECT_DOUBLE_EQ(rows[0].bound, 90.0);
  EXPECT_FALSE(rows[1].feasible);
  EXPECT_THROW(SolverFromCsv("instance,solution\ni1,abc\n"), ReportError);
  EXPECT_THROW(RunsFromCsv("instance\ni1\n"), ReportError);
}

}  // namespace
}  // namespace pdptwse
