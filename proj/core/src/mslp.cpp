#include <chrono>

#include "pdptwse/heuristic.hpp"
#include "pdptwse/schedule_lp.hpp"

namespace pdptwse {

Solution LpImprove(const Instance& inst, const Solution& sol) {
  if (!sol.feasible) throw std::invalid_argument("LP improvement needs a feasible solution");
  const ScheduleLP lp = BuildScheduleLp(inst, ExtractSequences(sol));
  const ScheduleTimes times = SolveSchedule(lp);
  if (!times.feasible || times.objective >= sol.cost) return sol;
  Solution out = ApplySchedule(inst, lp, times);
  if (out.cost >= sol.cost) return sol;
  out.version = sol.version + 1;
  return out;
}

double LpImprovementPercent(double greedy_cost, double lp_cost) {
  if (greedy_cost == 0.0) return 0.0;
  return 100.0 * (greedy_cost - lp_cost) / greedy_cost;
}

MslpResult Mslp(const Instance& inst, const MslpConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto t_begin = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t_begin).count(); };

  MslpResult result;
  result.best.feasible = false;
  MslpStats& st = result.stats;
  Rng rng(config.seed);
  double improvement_sum = 0.0;
  SemiGreedyOptions options;
  options.cost = config.cost;

  for (long it = 0; it < config.max_iterations; ++it) {
    if (it > 0 && elapsed() >= config.time_limit) break;
    Solution s = it == 0 ? GreedyInsertion(inst, config.cost) : SemiGreedyInsertion(inst, config.alpha, rng, options);
    ++st.iterations;
    if (!s.feasible) continue;
    ++st.feasible;
    const double before = s.cost;
    s = LpImprove(inst, s);
    improvement_sum += LpImprovementPercent(before, s.cost);
    if (!result.best.feasible || s.cost < result.best.cost) {
      result.best = std::move(s);
      st.time_to_best = elapsed();
      st.history.push_back({it, st.time_to_best, result.best.cost});
    }
  }
  st.seconds = elapsed();
  if (st.iterations > 0) st.feasible_fraction = static_cast<double>(st.feasible) / st.iterations;
  if (st.feasible > 0) st.mean_lp_improvement = improvement_sum / st.feasible;
  if (!result.best.feasible) {
    result.best = EmptySolution(inst);
    result.best.feasible = false;
  }
  return result;
}

}  // namespace pdptwse
