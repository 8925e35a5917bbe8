#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdptwse {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One heuristic or oracle run on one instance.
struct RunRecord {
  std::string instance;
  std::string group;   // generated-instance name, e.g. 6R_6V_2I_3M
  std::string method;  // e.g. mslp, greedy, oracle
  int run = 0;
  std::uint64_t seed = 0;
  bool feasible = false;
  double cost = 0.0;
  double seconds = 0.0;
  double time_to_best = 0.0;
  double feasible_fraction = 0.0;  // feasible constructions / iterations
  double lp_improvement = 0.0;     // mean percent over feasible constructions
  long iterations = 0;
};

// Solution value and best bound read from an external MIP solver log.
struct SolverRecord {
  std::string instance;
  std::string method;
  bool feasible = false;
  double solution = 0.0;
  double bound = 0.0;
};

double Rpd(double value, double reference);
double Arpd(std::span<const double> values, double reference);
double GapPercent(double solution, double bound);

struct GroupSummary {
  std::string group;
  std::string method;
  int instances = 0;
  double solver_solution = 0.0;  // mean external value; NaN when absent
  double min_solution = 0.0;     // mean over instances of the best run
  double mean_solution = 0.0;    // mean over instances of the run average
  double seconds = 0.0;
  double time_to_best = 0.0;
  double feasible_fraction = 0.0;
  double lp_improvement = 0.0;
};

struct RankingRow {
  std::string method;
  double arpd = 0.0;
  double gap = 0.0;
  double feasible_rate = 0.0;  // percent
  double arpd_score = 0.0;     // min-max scaled complement, 0..100
  double gap_score = 0.0;
  double score = 0.0;          // mean of feasible_rate, arpd_score, gap_score
};

// Scores rows in place from arpd, gap and feasible_rate.
void ScoreRanking(std::vector<RankingRow>& rows);

struct Report {
  std::vector<GroupSummary> groups;
  std::vector<RankingRow> ranking;
};

// Throws ReportError when methods cover different instance sets.
Report BuildReport(std::span<const RunRecord> runs, std::span<const SolverRecord> solver = {});

std::string RunsToCsv(std::span<const RunRecord> runs);
std::vector<RunRecord> RunsFromCsv(std::string_view text);
std::vector<SolverRecord> SolverFromCsv(std::string_view text);
std::string GroupsToCsv(std::span<const GroupSummary> groups);
std::string RankingToCsv(std::span<const RankingRow> rows);
std::string ReportText(const Report& report);

}  // namespace pdptwse
