#include "pdptwse/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace pdptwse {

double Rpd(double value, double reference) { return 100.0 * (value - reference) / reference; }

double Arpd(std::span<const double> values, double reference) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += Rpd(v, reference);
  return sum / static_cast<double>(values.size());
}

double GapPercent(double solution, double bound) {
  if (solution == 0.0) return bound == 0.0 ? 0.0 : 100.0;
  return 100.0 * std::abs(solution - bound) / std::abs(solution);
}

void ScoreRanking(std::vector<RankingRow>& rows) {
  if (rows.empty()) return;
  auto scale = [&](double RankingRow::*metric, double RankingRow::*out) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : rows) {
      lo = std::min(lo, r.*metric);
      hi = std::max(hi, r.*metric);
    }
    for (auto& r : rows) r.*out = hi > lo ? 100.0 * (hi - r.*metric) / (hi - lo) : 100.0;
  };
  scale(&RankingRow::arpd, &RankingRow::arpd_score);
  scale(&RankingRow::gap, &RankingRow::gap_score);
  for (auto& r : rows) r.score = (r.feasible_rate + r.arpd_score + r.gap_score) / 3.0;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double Mean(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string Num(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

// Maps header names to column indices; missing required columns throw.
struct Columns {
  std::map<std::string, std::size_t> index;

  explicit Columns(const std::vector<std::string>& header) {
    for (std::size_t c = 0; c < header.size(); ++c) index[header[c]] = c;
  }
  const std::string& Get(const std::vector<std::string>& row, const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) throw ReportError("missing column " + name);
    if (it->second >= row.size()) throw ReportError("short row for column " + name);
    return row[it->second];
  }
  double Num(const std::vector<std::string>& row, const std::string& name) const {
    const std::string& s = Get(row, name);
    if (s.empty()) return kNaN;
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw ReportError("bad number in column " + name + ": " + s);
    }
  }
};

}  // namespace

Report BuildReport(std::span<const RunRecord> runs, std::span<const SolverRecord> solver) {
  Report report;
  std::map<std::string, std::set<std::string>> coverage;
  for (const auto& r : runs) coverage[r.method].insert(r.instance);
  for (const auto& s : solver) coverage[s.method].insert(s.instance);
  if (coverage.empty()) return report;
  const auto& first = coverage.begin()->second;
  for (const auto& [method, instances] : coverage) {
    if (instances != first) {
      throw ReportError("method " + method + " covers a different instance set than " + coverage.begin()->first);
    }
  }

  std::map<std::string, double> reference;
  auto offer = [&](const std::string& inst, double v) {
    auto it = reference.find(inst);
    if (it == reference.end() || v < it->second) reference[inst] = v;
  };
  for (const auto& r : runs) {
    if (r.feasible) offer(r.instance, r.cost);
  }
  for (const auto& s : solver) {
    if (s.feasible) offer(s.instance, s.solution);
  }

  std::map<std::string, std::string> group_of;
  for (const auto& r : runs) group_of[r.instance] = r.group;

  struct Acc {
    std::vector<double> rpd, gap;
    int total = 0, feasible = 0;
  };
  std::map<std::string, Acc> by_method;
  for (const auto& r : runs) {
    Acc& a = by_method[r.method];
    ++a.total;
    if (!r.feasible) continue;
    ++a.feasible;
    a.rpd.push_back(Rpd(r.cost, reference.at(r.instance)));
  }
  for (const auto& s : solver) {
    Acc& a = by_method[s.method];
    ++a.total;
    if (!s.feasible) continue;
    ++a.feasible;
    a.rpd.push_back(Rpd(s.solution, reference.at(s.instance)));
    a.gap.push_back(GapPercent(s.solution, s.bound));
  }
  for (const auto& [method, a] : by_method) {
    RankingRow row;
    row.method = method;
    row.arpd = a.rpd.empty() ? 0.0 : Mean(a.rpd);
    row.gap = a.gap.empty() ? 0.0 : Mean(a.gap);
    row.feasible_rate = a.total ? 100.0 * a.feasible / a.total : 0.0;
    report.ranking.push_back(row);
  }
  ScoreRanking(report.ranking);
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [](const RankingRow& a, const RankingRow& b) { return a.score > b.score; });

  // Per (group, method, instance) aggregates, then means over instances.
  struct InstAcc {
    double min = kNaN;
    std::vector<double> costs, secs, ttb, frac, lpi;
    std::vector<double> solver;
  };
  std::map<std::pair<std::string, std::string>, std::map<std::string, InstAcc>> cells;
  for (const auto& r : runs) {
    InstAcc& a = cells[{r.group, r.method}][r.instance];
    a.secs.push_back(r.seconds);
    a.frac.push_back(r.feasible_fraction);
    if (!r.feasible) continue;
    a.costs.push_back(r.cost);
    a.ttb.push_back(r.time_to_best);
    a.lpi.push_back(r.lp_improvement);
    a.min = std::isnan(a.min) ? r.cost : std::min(a.min, r.cost);
  }
  for (const auto& s : solver) {
    auto it = group_of.find(s.instance);
    const std::string group = it == group_of.end() ? s.instance : it->second;
    InstAcc& a = cells[{group, s.method}][s.instance];
    if (s.feasible) a.solver.push_back(s.solution);
  }
  for (const auto& [key, instances] : cells) {
    GroupSummary g;
    g.group = key.first;
    g.method = key.second;
    g.instances = static_cast<int>(instances.size());
    std::vector<double> solver_v, min_v, mean_v, secs, ttb, frac, lpi;
    for (const auto& [name, a] : instances) {
      if (!a.solver.empty()) solver_v.push_back(Mean(a.solver));
      if (!std::isnan(a.min)) min_v.push_back(a.min);
      if (!a.costs.empty()) mean_v.push_back(Mean(a.costs));
      if (!a.secs.empty()) secs.push_back(Mean(a.secs));
      if (!a.ttb.empty()) ttb.push_back(Mean(a.ttb));
      if (!a.frac.empty()) frac.push_back(Mean(a.frac));
      if (!a.lpi.empty()) lpi.push_back(Mean(a.lpi));
    }
    g.solver_solution = Mean(solver_v);
    g.min_solution = Mean(min_v);
    g.mean_solution = Mean(mean_v);
    g.seconds = Mean(secs);
    g.time_to_best = Mean(ttb);
    g.feasible_fraction = Mean(frac);
    g.lp_improvement = Mean(lpi);
    report.groups.push_back(g);
  }
  return report;
}

std::string RunsToCsv(std::span<const RunRecord> runs) {
  std::string out =
      "instance,group,method,run,seed,feasible,cost,seconds,time_to_best,feasible_fraction,lp_improvement,"
      "iterations\n";
  for (const auto& r : runs) {
    out += r.instance + "," + r.group + "," + r.method + "," + std::to_string(r.run) + "," + std::to_string(r.seed) +
           "," + (r.feasible ? "1" : "0") + "," + (r.feasible ? Num(r.cost) : "") + "," + Num(r.seconds) + "," +
           Num(r.time_to_best) + "," + Num(r.feasible_fraction) + "," + Num(r.lp_improvement) + "," +
           std::to_string(r.iterations) + "\n";
  }
  return out;
}

std::vector<RunRecord> RunsFromCsv(std::string_view text) {
  const auto rows = ParseCsv(text);
  std::vector<RunRecord> out;
  if (rows.empty()) return out;
  const Columns col(rows[0]);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    RunRecord rec;
    rec.instance = col.Get(row, "instance");
    rec.group = col.Get(row, "group");
    rec.method = col.Get(row, "method");
    rec.run = static_cast<int>(col.Num(row, "run"));
    rec.seed = static_cast<std::uint64_t>(std::stoull(col.Get(row, "seed")));
    rec.feasible = col.Get(row, "feasible") == "1";
    rec.cost = rec.feasible ? col.Num(row, "cost") : 0.0;
    rec.seconds = col.Num(row, "seconds");
    rec.time_to_best = col.Num(row, "time_to_best");
    rec.feasible_fraction = col.Num(row, "feasible_fraction");
    rec.lp_improvement = col.Num(row, "lp_improvement");
    rec.iterations = static_cast<long>(col.Num(row, "iterations"));
    out.push_back(rec);
  }
  return out;
}

std::vector<SolverRecord> SolverFromCsv(std::string_view text) {
  const auto rows = ParseCsv(text);
  std::vector<SolverRecord> out;
  if (rows.empty()) return out;
  const Columns col(rows[0]);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    SolverRecord rec;
    rec.instance = col.Get(row, "instance");
    rec.method = col.Get(row, "method");
    rec.solution = col.Num(row, "solution");
    rec.bound = col.Num(row, "bound");
    rec.feasible = !std::isnan(rec.solution);
    if (std::isnan(rec.bound)) rec.bound = rec.solution;
    out.push_back(rec);
  }
  return out;
}

std::string GroupsToCsv(std::span<const GroupSummary> groups) {
  std::string out = "group,method,instances,sol,min_sol,mean_sol,time,ttb,feasible_fraction,lp_improvement\n";
  for (const auto& g : groups) {
    out += g.group + "," + g.method + "," + std::to_string(g.instances) + "," + Num(g.solver_solution) + "," +
           Num(g.min_solution) + "," + Num(g.mean_solution) + "," + Num(g.seconds) + "," + Num(g.time_to_best) + "," +
           Num(g.feasible_fraction) + "," + Num(g.lp_improvement) + "\n";
  }
  return out;
}

std::string RankingToCsv(std::span<const RankingRow> rows) {
  std::string out = "method,arpd,gap,feasible_rate,arpd_score,gap_score,score\n";
  for (const auto& r : rows) {
    out += r.method + "," + Num(r.arpd) + "," + Num(r.gap) + "," + Num(r.feasible_rate) + "," + Num(r.arpd_score) +
           "," + Num(r.gap_score) + "," + Num(r.score) + "\n";
  }
  return out;
}

std::string ReportText(const Report& report) {
  std::ostringstream out;
  char line[256];
  out << "groups\n";
  std::snprintf(line, sizeof line, "  %-18s %-14s %4s %10s %10s %10s %9s %9s\n", "group", "method", "n", "sol",
                "min", "mean", "time", "ttb");
  out << line;
  for (const auto& g : report.groups) {
    std::snprintf(line, sizeof line, "  %-18s %-14s %4d %10.2f %10.2f %10.2f %9.3f %9.3f\n", g.group.c_str(),
                  g.method.c_str(), g.instances, g.solver_solution, g.min_solution, g.mean_solution, g.seconds,
                  g.time_to_best);
    out << line;
  }
  out << "ranking\n";
  std::snprintf(line, sizeof line, "  %-14s %9s %9s %9s %9s\n", "method", "arpd", "gap", "feasible", "score");
  out << line;
  for (const auto& r : report.ranking) {
    std::snprintf(line, sizeof line, "  %-14s %9.3f %9.3f %9.2f %9.2f\n", r.method.c_str(), r.arpd, r.gap,
                  r.feasible_rate, r.score);
    out << line;
  }
  return out.str();
}

}  // namespace pdptwse
