#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "pdptwse/generator.hpp"
#include "pdptwse/heuristic.hpp"
#include "pdptwse/io.hpp"
#include "pdptwse/linear_model.hpp"
#include "pdptwse/mip.hpp"
#include "pdptwse/oracle.hpp"
#include "pdptwse/preprocess.hpp"
#include "pdptwse/report.hpp"
#include "pdptwse/schedule_lp.hpp"

namespace pdptwse::cli {

namespace fs = std::filesystem;

std::string ResolveInput(const std::string& path) {
  if (path.empty() || fs::exists(path)) return path;
  if (const char* dir = std::getenv("PDPTWSE_DATA_DIR"); dir && fs::path(path).is_relative()) {
    const fs::path p = fs::path(dir) / path;
    if (fs::exists(p)) return p.string();
  }
  throw UsageError("no such file: " + path);
}

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

InstanceData LoadInput(const std::string& path) { return LoadInstance(ResolveInput(path)); }

void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    WriteFile(path, text);
  }
}

InsertionCost ParseCost(const std::string& s) {
  if (s == "duration") return InsertionCost::kDuration;
  if (s == "increase") return InsertionCost::kIncrease;
  if (s == "arrival") return InsertionCost::kArrival;
  throw UsageError("unknown cost mode: " + s);
}

RunRecord RecordFor(const InstanceData& data, const std::string& instance, const std::string& method) {
  RunRecord r;
  r.instance = instance;
  r.group = data.name;
  r.method = method;
  return r;
}

RunRecord MslpRun(const Instance& inst, const std::string& instance, const MslpConfig& cfg, int run,
                  Solution* best = nullptr) {
  const MslpResult res = Mslp(inst, cfg);
  RunRecord r = RecordFor(inst.data(), instance, "mslp");
  r.run = run;
  r.seed = cfg.seed;
  r.feasible = res.best.feasible;
  r.cost = res.best.feasible ? res.best.cost : 0.0;
  r.seconds = res.stats.seconds;
  r.time_to_best = res.stats.time_to_best;
  r.feasible_fraction = res.stats.feasible_fraction;
  r.lp_improvement = res.stats.mean_lp_improvement;
  r.iterations = res.stats.iterations;
  if (best && res.best.feasible && (!best->feasible || res.best.cost < best->cost)) *best = res.best;
  return r;
}

RunRecord GreedyRun(const Instance& inst, const std::string& instance, InsertionCost cost,
                    Solution* best = nullptr) {
  const auto t0 = Clock::now();
  const Solution g = GreedyInsertion(inst, cost);
  RunRecord r = RecordFor(inst.data(), instance, "greedy");
  r.feasible = g.feasible;
  r.iterations = 1;
  r.feasible_fraction = g.feasible ? 1.0 : 0.0;
  if (g.feasible) {
    const Solution l = LpImprove(inst, g);
    r.cost = l.cost;
    r.lp_improvement = LpImprovementPercent(g.cost, l.cost);
    if (best) *best = l;
  }
  r.seconds = Since(t0);
  r.time_to_best = r.seconds;
  return r;
}

}  // namespace

int RunGen(const GenArgs& a) {
  GenConfig cfg;
  if (a.family == "island") {
    cfg.family = Family::kIsland;
  } else if (a.family == "floor") {
    cfg.family = Family::kFloor;
  } else {
    throw UsageError("family must be island or floor");
  }
  cfg.requests = a.n;
  cfg.regions = a.z;
  cfg.machines = a.machines;
  cfg.vehicle_types = a.vehicle_types;
  cfg.capacity_step = a.capacity_step;
  cfg.seed = a.seed;
  const BasePdptw base = LoadLiLim(ResolveInput(a.base));
  InstanceData data;
  if (a.no_repair) {
    data = cfg.family == Family::kIsland ? GenMultiIsland(base, cfg) : GenMultiFloor(base, cfg);
  } else {
    data = Generate(base, cfg);
  }
  Emit(a.out, InstanceToJson(data));
  std::cerr << data.name << "\n";
  return kOk;
}

int RunPreprocess(const PreprocessArgs& a) {
  const Instance inst(LoadInput(a.instance));
  PreprocessOptions opt;
  opt.drop_gamma = !a.keep_gamma;
  const PreprocessResult pre = Preprocess(inst, opt);
  const auto counts = pre.RuleCounts();
  int shrunk = 0;
  for (NodeId i = 1; i <= 2 * inst.n(); ++i) {
    shrunk += pre.windows[i].open > inst.window(i).open || pre.windows[i].close < inst.window(i).close;
  }
  std::printf("rule,arcs\n");
  for (int r = 0; r < static_cast<int>(counts.size()); ++r) {
    std::printf("%s,%d\n", ArcRuleName(static_cast<ArcRule>(r)), counts[r]);
  }
  std::printf("shrunk-windows,%d\ndropped-gamma,%zu\n", shrunk, pre.dropped_gamma.size());
  if (!a.out.empty()) WriteFile(a.out, PreprocessToJson(pre));
  return kOk;
}

int RunEmitMip(const EmitArgs& a) {
  const Instance inst(LoadInput(a.instance));
  ViConfig vis;
  try {
    vis = ViConfig::Parse(a.vi);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  PreprocessResult pre;
  if (!a.sidecar.empty()) {
    pre = PreprocessFromJson(ReadFile(ResolveInput(a.sidecar)));
    if (pre.num_nodes != inst.num_nodes()) throw UsageError("sidecar does not match the instance");
  } else {
    pre = a.no_preprocess ? NoPreprocess(inst) : Preprocess(inst);
  }
  const LinearModel m = BuildMip(inst, pre, vis);
  Emit(a.out, WriteLp(m));
  std::cerr << m.vars.size() << " variables, " << m.rows.size() << " rows, vi " << vis.ToString() << "\n";
  return kOk;
}

int RunHeur(const HeurArgs& a) {
  const InstanceData data = LoadInput(a.instance);
  const Instance inst(data);
  const std::string name = fs::path(a.instance).stem().string();
  if (a.alpha < 0.0 || a.alpha > 1.0) throw UsageError("alpha must lie in [0, 1]");
  if (a.runs < 1) throw UsageError("runs must be positive");
  std::vector<RunRecord> records;
  Solution best;
  if (a.greedy) {
    records.push_back(GreedyRun(inst, name, ParseCost(a.cost), &best));
  } else {
    for (int r = 0; r < a.runs; ++r) {
      MslpConfig cfg;
      cfg.alpha = a.alpha;
      cfg.max_iterations = a.iters;
      cfg.time_limit = a.time_limit;
      cfg.seed = a.seed + static_cast<std::uint64_t>(r);
      cfg.cost = ParseCost(a.cost);
      records.push_back(MslpRun(inst, name, cfg, r, &best));
    }
  }
  Emit(a.records, RunsToCsv(records));
  if (!a.solution.empty() && best.feasible) SaveSolution(a.solution, best);
  return best.feasible ? kOk : kFailed;
}

int RunOracle(const OracleArgs& a) {
  const Instance inst(LoadInput(a.instance));
  OracleLimits limits;
  limits.max_requests = a.max_requests;
  limits.max_combinations = a.budget;
  limits.preprocess = a.preprocess;
  const auto t0 = Clock::now();
  OracleResult res;
  try {
    res = BruteForce(inst, limits);
  } catch (const OracleRefused& e) {
    throw UsageError(std::string("oracle refused: ") + e.what());
  }
  std::printf("feasible,cost,combinations,lp_solves,seconds\n%d,%.10g,%ld,%ld,%.3f\n", res.feasible ? 1 : 0,
              res.feasible ? res.best.cost : 0.0, res.combinations, res.lp_solves, Since(t0));
  if (!res.feasible) return kFailed;
  if (!a.solution.empty()) SaveSolution(a.solution, res.best);
  return kOk;
}

int RunValidate(const ValidateArgs& a) {
  const Instance inst(LoadInput(a.instance));
  const Solution sol = LoadSolution(ResolveInput(a.solution));
  const ValidationReport rep = Validate(inst, sol);
  if (rep.ok()) {
    std::printf("ok cost %.10g\n", SolutionCost(sol));
    return kOk;
  }
  std::printf("%s", rep.ToString().c_str());
  return kFailed;
}

int RunSchedule(const ScheduleArgs& a) {
  const Instance inst(LoadInput(a.instance));
  const Solution sol = LoadSolution(ResolveInput(a.solution));
  const ScheduleLP lp = BuildScheduleLp(inst, ExtractSequences(sol));
  if (!a.lp_out.empty()) WriteFile(a.lp_out, WriteLp(ScheduleModel(lp)));
  const ScheduleTimes times = SolveSchedule(lp);
  if (!times.feasible) {
    std::printf("infeasible sequences (%zu constraints in the conflict)\n", times.conflict.size());
    return kFailed;
  }
  const Solution out = ApplySchedule(inst, lp, times);
  std::fprintf(stderr, "cost %.10g -> %.10g\n", SolutionCost(sol), out.cost);
  Emit(a.out, SolutionToJson(out));
  return kOk;
}

int RunBench(const BenchArgs& a) {
  const std::string dir = ResolveInput(a.dir);
  if (!fs::is_directory(dir)) throw UsageError(dir + " is not a directory");
  if (a.jobs < 1 || a.runs < 1) throw UsageError("jobs and runs must be positive");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  // One task per (instance, method, run); results land in their own slot so
  // the output order does not depend on scheduling.
  struct Task {
    std::size_t file;
    int run;  // -1 greedy, -2 oracle
  };
  std::vector<Task> tasks;
  for (std::size_t f = 0; f < files.size(); ++f) {
    for (int r = 0; r < a.runs; ++r) tasks.push_back({f, r});
    if (a.greedy) tasks.push_back({f, -1});
    if (a.oracle) tasks.push_back({f, -2});
  }
  std::vector<InstanceData> data(files.size());
  for (std::size_t f = 0; f < files.size(); ++f) data[f] = LoadInstance(files[f].string());

  std::vector<std::vector<RunRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::string first_error;
  auto worker = [&] {
    for (std::size_t t; (t = next++) < tasks.size();) {
      const Task& task = tasks[t];
      const std::string name = files[task.file].stem().string();
      try {
        const Instance inst(data[task.file]);
        if (task.run >= 0) {
          MslpConfig cfg;
          cfg.alpha = a.alpha;
          cfg.max_iterations = a.iters;
          cfg.time_limit = a.time_limit;
          cfg.seed = a.seed + static_cast<std::uint64_t>(task.run);
          cfg.cost = ParseCost(a.cost);
          slots[t].push_back(MslpRun(inst, name, cfg, task.run));
        } else if (task.run == -1) {
          slots[t].push_back(GreedyRun(inst, name, ParseCost(a.cost)));
        } else {
          const auto t0 = Clock::now();
          RunRecord r = RecordFor(inst.data(), name, "oracle");
          try {
            const OracleResult res = BruteForce(inst);
            r.feasible = res.feasible;
            r.cost = res.feasible ? res.best.cost : 0.0;
          } catch (const OracleRefused&) {
            continue;  // too large; no record
          }
          r.seconds = Since(t0);
          r.time_to_best = r.seconds;
          r.iterations = 1;
          r.feasible_fraction = r.feasible ? 1.0 : 0.0;
          slots[t].push_back(r);
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mu);
        if (first_error.empty()) first_error = name + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < a.jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (!first_error.empty()) throw std::runtime_error(first_error);

  std::vector<RunRecord> records;
  for (auto& s : slots) records.insert(records.end(), s.begin(), s.end());
  Emit(a.out, RunsToCsv(records));
  std::fprintf(stderr, "%zu instances, %zu records\n", files.size(), records.size());
  return kOk;
}

int RunReport(const ReportArgs& a) {
  const std::vector<RunRecord> runs = RunsFromCsv(ReadFile(ResolveInput(a.runs)));
  std::vector<SolverRecord> solver;
  if (!a.solver.empty()) solver = SolverFromCsv(ReadFile(ResolveInput(a.solver)));
  const Report rep = BuildReport(runs, solver);
  if (!a.groups_out.empty()) WriteFile(a.groups_out, GroupsToCsv(rep.groups));
  if (!a.ranking_out.empty()) WriteFile(a.ranking_out, RankingToCsv(rep.ranking));
  std::cout << ReportText(rep);
  return kOk;
}

}  // namespace pdptwse::cli
