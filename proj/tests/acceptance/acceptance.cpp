// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "pdptwse/generator.hpp"
#include "pdptwse/geometry.hpp"
#include "pdptwse/heuristic.hpp"
#include "pdptwse/io.hpp"
#include "pdptwse/linear_model.hpp"
#include "pdptwse/mip.hpp"
#include "pdptwse/oracle.hpp"
#include "pdptwse/preprocess.hpp"
#include "pdptwse/schedule_lp.hpp"
#include "schedule_oracle.hpp"

namespace pdptwse {
namespace {

namespace fs = std::filesystem;
using testing::SmallCase;

constexpr double kTol = 1e-6;
constexpr int kSmallCases = 48;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

const std::vector<SmallCase>& SmallSet() {
  static const std::vector<SmallCase> cases = testing::SmallInstanceSet(kSmallCases);
  return cases;
}

const std::vector<OracleResult>& Optima() {
  static const std::vector<OracleResult> optima = [] {
    std::vector<OracleResult> out;
    for (const auto& sc : SmallSet()) out.push_back(BruteForce(Instance(sc.data)));
    return out;
  }();
  return optima;
}

double Objective(const LinearModel& m, const std::vector<double>& v) {
  double z = 0.0;
  for (const auto& t : m.objective) z += t.coef * v[t.var];
  return z;
}

Outcome TwoIslandFixture() {
  const auto t0 = std::chrono::steady_clock::now();
  const Instance inst(testing::TwoIslandData());
  const Solution ref = testing::TwoIslandSolution();
  const ValidationReport rep = Validate(inst, ref);
  const ScheduleTimes times = SolveSchedule(BuildScheduleLp(inst, ExtractSequences(ref)));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = rep.ok() && ref.cost == 480.0 && SolutionCost(ref) == 480.0 && times.feasible &&
           times.objective <= 480.0 + kTol && secs < 1.0;
  o.detail = Fmt("violations %zu, cost %.6g, lp %.6g, %.3fs", rep.violations.size(), SolutionCost(ref),
                 times.feasible ? times.objective : NAN, secs);
  return o;
}

Outcome OracleEquivalence() {
  int matched = 0, beaten = 0, compared = 0;
  std::string worst;
  for (std::size_t c = 0; c < SmallSet().size(); ++c) {
    const OracleResult& opt = Optima()[c];
    if (!opt.feasible) continue;
    const Instance inst(SmallSet()[c].data);
    MslpConfig cfg;
    cfg.max_iterations = 60000;
    cfg.seed = 1 + c;
    const MslpResult r = Mslp(inst, cfg);
    ++compared;
    if (!r.best.feasible || !Validate(inst, r.best).ok()) {
      worst = SmallSet()[c].label + " no valid solution";
      continue;
    }
    if (r.best.cost < opt.best.cost - kTol) {
      ++beaten;
      worst = SmallSet()[c].label + " beats the oracle";
    } else if (r.best.cost <= opt.best.cost + kTol) {
      ++matched;
    } else if (worst.empty()) {
      worst = Fmt("%s %.6g vs %.6g", SmallSet()[c].label.c_str(), r.best.cost, opt.best.cost);
    }
  }
  Outcome o;
  o.pass = compared >= 40 && beaten == 0 && matched >= 0.9 * compared;
  o.detail = Fmt("matched %d/%d (%.1f%%), beaten %d", matched, compared, 100.0 * matched / std::max(compared, 1),
                 beaten);
  if (!worst.empty()) o.detail += "; first miss " + worst;
  return o;
}

Outcome PreprocessingSafety() {
  int same = 0, lost = 0, total = 0;
  long with = 0, without = 0;
  for (std::size_t c = 0; c < SmallSet().size(); ++c) {
    const Instance inst(SmallSet()[c].data);
    OracleLimits on;
    on.preprocess = true;
    const OracleResult& off = Optima()[c];
    const OracleResult pre = BruteForce(inst, on);
    ++total;
    without += off.combinations;
    with += pre.combinations;
    if (off.feasible && !pre.feasible) ++lost;
    if (off.feasible == pre.feasible && (!off.feasible || std::abs(off.best.cost - pre.best.cost) <= kTol)) ++same;
  }
  Outcome o;
  o.pass = same == total && lost == 0;
  o.detail = Fmt("identical %d/%d, lost %d, combinations %ld -> %ld", same, total, lost, without, with);
  return o;
}

// Enumerates feasible points of every small case and checks the rows picked
// by `keep` in a model built with `vis`.
Outcome CheckRowsOnPoints(const ViConfig& vis, const std::function<bool(const LinearRow&)>& keep) {
  long points = 0, rows_checked = 0, cuts = 0;
  std::string first;
  for (const auto& sc : SmallSet()) {
    const Instance inst(sc.data);
    const PreprocessResult pre = Preprocess(inst);
    const LinearModel m = BuildMip(inst, pre, vis);
    long kept = 0;
    for (const auto& r : m.rows) kept += keep(r);
    EnumerateFeasiblePoints(inst, {}, [&](const Solution& s) {
      ++points;
      rows_checked += kept;
      const auto v = LiftSolution(m, inst, pre, s);
      for (const auto& bad : ViolatedRows(m, v, kTol)) {
        if (bad.row < 0 || !keep(m.rows[bad.row])) continue;
        ++cuts;
        if (first.empty()) first = sc.label + " " + m.rows[bad.row].name;
      }
      if (std::abs(Objective(m, v) - s.cost) > kTol && first.empty()) first = sc.label + " objective mismatch";
      return true;
    });
  }
  Outcome o;
  o.pass = cuts == 0 && first.empty() && points > 0 && rows_checked > 0;
  o.detail = Fmt("%ld points, %ld row checks, %ld violated", points, rows_checked, cuts);
  if (!first.empty()) o.detail += "; first " + first;
  return o;
}

Outcome ValidInequalities() {
  Outcome o = CheckRowsOnPoints(ViConfig::All(), [](const LinearRow& r) { return r.family != "base"; });
  o.detail = Fmt("%d families; ", kNumViFamilies) + o.detail;
  return o;
}

Outcome BigMSufficiency() {
  return CheckRowsOnPoints(ViConfig::None(), [](const LinearRow& r) { return r.big_m; });
}

Outcome SchedulerExactness() {
  std::mt19937_64 rng(777001);
  int feasible = 0, agree = 0, trials = 200;
  double worst_gap = 0.0, worst_violation = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int K = 1 + static_cast<int>(rng() % 2);
    const Instance inst(testing::LineIslands(rng, n, K, K == 1 ? 200 : 110));
    const Sequences seq = testing::RandomSequences(inst, rng);
    const ScheduleLP lp = BuildScheduleLp(inst, seq);
    const ScheduleTimes times = SolveSchedule(lp);
    const testing::GridResult grid = testing::GridSearch(inst, seq);
    if (times.feasible != grid.feasible) continue;
    if (!times.feasible) {
      ++agree;
      continue;
    }
    ++feasible;
    const double gap = std::abs(times.objective - grid.cost);
    const double viol = MaxViolation(lp, times.values);
    worst_gap = std::max(worst_gap, gap);
    worst_violation = std::max(worst_violation, viol);
    if (gap <= 1e-3 && viol <= kTol) ++agree;
  }
  Outcome o;
  o.pass = agree == trials;
  o.detail = Fmt("agree %d/%d (%d feasible), max gap %.2g, max violation %.2g", agree, trials, feasible, worst_gap,
                 worst_violation);
  return o;
}

Outcome HeuristicDeterminism() {
  // lp_improve over random semi-greedy constructions.
  std::vector<Instance> pool;
  for (const auto& sc : SmallSet()) pool.emplace_back(sc.data);
  const BasePdptw base = LoadLiLim(testing::DataPath("synthetic_type1.txt"));
  for (int s = 0; s < 8; ++s) {
    GenConfig cfg;
    cfg.family = s % 2 ? Family::kFloor : Family::kIsland;
    cfg.requests = 6;
    cfg.seed = 300 + s;
    pool.emplace_back(Generate(base, cfg));
  }
  Rng rng(99);
  int solutions = 0, increased = 0, invalid = 0;
  for (long attempt = 0; solutions < 1000 && attempt < 20000; ++attempt) {
    const Instance& inst = pool[attempt % pool.size()];
    const Solution s = SemiGreedyInsertion(inst, 1.0, rng);
    if (!s.feasible) continue;
    ++solutions;
    const Solution l = LpImprove(inst, s);
    if (l.cost > s.cost + 1e-9) ++increased;
    if (!Validate(inst, l).ok()) ++invalid;
  }

  const Instance& big = pool.back();
  MslpConfig cfg;
  cfg.max_iterations = 3000;
  cfg.seed = 20240611;
  const MslpResult a = Mslp(big, cfg);
  const MslpResult b = Mslp(big, cfg);
  const bool same = a.best.cost == b.best.cost && a.best.routes == b.best.routes &&
                    a.best.machines == b.best.machines && a.stats.feasible == b.stats.feasible &&
                    a.stats.history.size() == b.stats.history.size();
  int rises = 0;
  for (const MslpResult* r : {&a, &b}) {
    for (std::size_t i = 1; i < r->stats.history.size(); ++i) {
      rises += r->stats.history[i].cost > r->stats.history[i - 1].cost;
    }
  }
  Outcome o;
  o.pass = solutions == 1000 && increased == 0 && invalid == 0 && same && rises == 0;
  o.detail = Fmt("lp_improve %d solutions, %d increased, %d invalid; reproducible %s; incumbent rises %d", solutions,
                 increased, invalid, same ? "yes" : "no", rises);
  return o;
}

Outcome GeneratorValidity() {
  const BasePdptw bases[2] = {LoadLiLim(testing::DataPath("synthetic_type1.txt")),
                              LoadLiLim(testing::DataPath("synthetic_type2.txt"))};
  int valid = 0, repaired_ok = 0, idempotent = 0, total = 0, stations = 0, close = 0;
  double min_clear = kInf;
  std::string first;
  for (Family fam : {Family::kIsland, Family::kFloor}) {
    for (int s = 0; s < 100; ++s) {
      GenConfig cfg;
      cfg.family = fam;
      cfg.requests = 4 + 2 * (s % 5);
      cfg.regions = 2 + 2 * (s / 5 % 2);
      cfg.machines = 2 + s / 10 % 3;
      cfg.seed = 5000 + s;
      const BasePdptw& base = bases[s / 50];
      ++total;
      InstanceData raw;
      if (fam == Family::kIsland) {
        const IslandLayout lay = LayoutIslands(base, cfg);
        for (const Machine& m : lay.data.machines) {
          for (const Station& st : m.stations) {
            const double d = Distance(st.pos, lay.hulls[st.region][lay.anchors[st.region]]);
            ++stations;
            min_clear = std::min(min_clear, d);
            close += d < kStationClearance - 1e-9;
          }
        }
        raw = lay.data;
      } else {
        raw = GenMultiFloor(base, cfg);
      }
      const RepairResult r = EnsureFeasibility(raw);
      const InstanceData gen = Generate(base, cfg);
      const bool inv = CheckInstance(gen).empty() && InstanceToJson(gen) == InstanceToJson(r.data);
      valid += inv;
      const Instance inst(r.data);
      const bool clean = r.solution.feasible && Validate(inst, r.solution).ok();
      repaired_ok += clean;
      const RepairResult again = EnsureFeasibility(r.data);
      const bool fixed = !again.changed && InstanceToJson(again.data) == InstanceToJson(r.data);
      idempotent += fixed;
      if (first.empty() && !(inv && clean && fixed)) first = InstanceName(cfg) + Fmt(" seed %d", s);
    }
  }
  Outcome o;
  o.pass = valid == total && repaired_ok == total && idempotent == total && close == 0 && stations > 0;
  o.detail = Fmt("invariants %d/%d, repaired clean %d/%d, idempotent %d/%d, stations %d min clearance %.3f", valid,
                 total, repaired_ok, total, idempotent, total, stations, min_clear);
  if (!first.empty()) o.detail += "; first failure " + first;
  return o;
}

Outcome RclSemantics() {
  int greedy_same = 0, greedy_total = 0;
  for (const auto& sc : SmallSet()) {
    const Instance inst(sc.data);
    Rng rng(3);
    SemiGreedyOptions opt;
    opt.order = GreedyOrder(inst);
    const Solution a = SemiGreedyInsertion(inst, 0.0, rng, opt);
    const Solution g = GreedyInsertion(inst);
    ++greedy_total;
    greedy_same += a.feasible == g.feasible && a.cost == g.cost && a.routes == g.routes && a.machines == g.machines;
  }

  // Threshold formula at several alphas, on every step of random constructions.
  long steps = 0, formula_bad = 0;
  for (double alpha : {0.0, 0.3, 0.7, 1.0}) {
    for (std::size_t c = 0; c < 12; ++c) {
      const Instance inst(SmallSet()[c].data);
      Rng rng(40 + c);
      SemiGreedyOptions opt;
      opt.observer = [&](std::span<const InsertionCandidate> cl, std::span<const std::size_t> rcl, std::size_t) {
        ++steps;
        double lo = kInf, hi = -kInf;
        for (const auto& x : cl) {
          lo = std::min(lo, x.cost);
          hi = std::max(hi, x.cost);
        }
        std::vector<std::size_t> expect;
        for (std::size_t a = 0; a < cl.size(); ++a) {
          if (cl[a].cost <= lo + alpha * (hi - lo) + 1e-9) expect.push_back(a);
        }
        if (alpha == 0.0) expect.resize(1);
        formula_bad += std::vector<std::size_t>(rcl.begin(), rcl.end()) != expect;
      };
      for (int r = 0; r < 20; ++r) SemiGreedyInsertion(inst, alpha, rng, opt);
    }
  }

  // With alpha = 1, candidates of every construction state seen often enough
  // must all be drawn at least once. States are keyed by the choices so far.
  const int draws = 10000;
  long states = 0, unseen = 0;
  std::vector<InstanceData> subjects{testing::LineInstance(2), testing::TwoIslandData()};
  subjects[0].vehicles.resize(1);
  for (const auto& data : subjects) {
    const Instance inst(data);
    std::map<std::vector<int>, std::pair<long, std::vector<int>>> seen;  // state -> visits, hits per candidate
    std::vector<int> path;
    SemiGreedyOptions opt;
    opt.order = GreedyOrder(inst);
    opt.observer = [&](std::span<const InsertionCandidate> cl, std::span<const std::size_t>, std::size_t chosen) {
      auto& [visits, hits] = seen[path];
      hits.resize(cl.size());
      ++visits;
      ++hits[chosen];
      path.push_back(static_cast<int>(chosen));
    };
    Rng rng(5);
    for (int r = 0; r < draws; ++r) {
      path.clear();
      SemiGreedyInsertion(inst, 1.0, rng, opt);
    }
    for (const auto& [state, entry] : seen) {
      const auto& [visits, hits] = entry;
      // Expected hits per candidate of at least 30.
      if (visits < 30 * static_cast<long>(hits.size())) continue;
      ++states;
      for (int h : hits) unseen += h == 0;
    }
  }
  Outcome o;
  o.pass = greedy_same == greedy_total && formula_bad == 0 && steps > 0 && states > 0 && unseen == 0;
  o.detail = Fmt("alpha 0 equals greedy %d/%d; rcl formula %ld/%ld steps; alpha 1 unseen candidates %ld over %ld states",
                 greedy_same, greedy_total, steps - formula_bad, steps, unseen, states);
  return o;
}

// External solvers that read CPLEX LP text, with the pattern of their
// objective line.
struct ExternalSolver {
  std::string binary;
  std::string args;  // {lp} and {out} are substituted
  std::regex objective;
  bool from_file;
};

std::optional<std::string> FindOnPath(const std::string& name) {
  const char* path = std::getenv("PATH");
  if (!path) return std::nullopt;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    const fs::path p = fs::path(dir) / name;
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return p.string();
  }
  return std::nullopt;
}

std::optional<double> RunExternal(const ExternalSolver& s, const std::string& exe, const fs::path& lp,
                                  const fs::path& out) {
  std::string args = s.args;
  args.replace(args.find("{lp}"), 4, lp.string());
  if (auto at = args.find("{out}"); at != std::string::npos) args.replace(at, 5, out.string());
  const std::string cmd = exe + " " + args + " 2>&1";
  std::string text;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    std::array<char, 4096> buf;
    while (std::fgets(buf.data(), buf.size(), pipe)) text += buf.data();
    pclose(pipe);
  }
  if (s.from_file) {
    std::ifstream in(out);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  std::smatch m;
  if (!std::regex_search(text, m, s.objective)) return std::nullopt;
  return std::stod(m[1].str());
}

Outcome EmissionRoundTrip() {
  int identical = 0, total = 0;
  for (const auto& sc : SmallSet()) {
    const Instance inst(sc.data);
    const LinearModel m = BuildMip(inst, Preprocess(inst), ViConfig::All());
    const std::string text = WriteLp(m);
    const LinearModel back = ReadLp(text);
    ++total;
    identical += EquivalentModels(m, back) && WriteLp(back) == text;
  }
  {
    const Instance inst(testing::TwoIslandData());
    const LinearModel m = ScheduleModel(BuildScheduleLp(inst, ExtractSequences(testing::TwoIslandSolution())));
    const std::string text = WriteLp(m);
    ++total;
    identical += WriteLp(ReadLp(text)) == text;
  }
  Outcome o;
  o.pass = identical == total;
  o.detail = Fmt("round trip %d/%d", identical, total);

  const std::vector<ExternalSolver> solvers{
      {"highs", "--model_file {lp}", std::regex(R"(Objective value\s*:\s*([-+0-9.eE]+))"), false},
      {"glpsol", "--lp {lp} -o {out}", std::regex(R"(obj\s*=\s*([-+0-9.eE]+))"), true},
      {"cbc", "{lp} solve solu {out}", std::regex(R"(objective value\s+([-+0-9.eE]+))"), true},
  };
  for (const auto& s : solvers) {
    const auto exe = FindOnPath(s.binary);
    if (!exe) continue;
    const fs::path dir = fs::temp_directory_path() / "pdptwse_acceptance";
    fs::create_directories(dir);
    int agree = 0, solved = 0;
    for (std::size_t c = 0; c < SmallSet().size(); ++c) {
      const OracleResult& opt = Optima()[c];
      if (!opt.feasible) continue;
      const Instance inst(SmallSet()[c].data);
      const fs::path lp = dir / (SmallSet()[c].label + ".lp");
      EmitLpText(BuildMip(inst, Preprocess(inst), ViConfig::Standard()), lp.string());
      const auto z = RunExternal(s, *exe, lp, dir / (SmallSet()[c].label + ".out"));
      ++solved;
      agree += z && std::abs(*z - opt.best.cost) <= kTol * std::max(1.0, opt.best.cost);
    }
    o.pass = o.pass && agree == solved;
    o.detail += Fmt("; %s matches the oracle on %d/%d", s.binary.c_str(), agree, solved);
    return o;
  }
  o.detail += "; external solver check skipped (none installed)";
  return o;
}

}  // namespace
}  // namespace pdptwse

int main() {
  using namespace pdptwse;
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"two-island fixture", TwoIslandFixture},
      {"mslp vs oracle", OracleEquivalence},
      {"preprocessing safety", PreprocessingSafety},
      {"valid inequality soundness", ValidInequalities},
      {"big-M sufficiency", BigMSufficiency},
      {"schedule LP vs grid search", SchedulerExactness},
      {"heuristic monotonicity and determinism", HeuristicDeterminism},
      {"generator validity", GeneratorValidity},
      {"RCL semantics", RclSemantics},
      {"MIP text round trip", EmissionRoundTrip},
  };
  int failed = 0, id = 0;
  for (const auto& c : criteria) {
    ++id;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
