#include "pdptwse/schedule_lp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <tuple>

namespace pdptwse {

Sequences ExtractSequences(const Solution& sol) {
  Sequences seq;
  for (const auto& route : sol.routes) {
    std::vector<NodeId> nodes;
    for (std::size_t p = 1; p + 1 < route.size(); ++p) nodes.push_back(route[p].node);
    seq.routes.push_back(std::move(nodes));
  }
  for (const auto& travels : sol.machines) {
    std::vector<TravelRef> refs;
    for (const Travel& t : travels) refs.push_back({t.from, t.to, t.vehicle});
    seq.machines.push_back(std::move(refs));
  }
  return seq;
}

const char* RowKindName(RowKind kind) {
  switch (kind) {
    case RowKind::kDepartChain: return "depart";
    case RowKind::kChain: return "chain";
    case RowKind::kReturn: return "return";
    case RowKind::kBoard: return "board";
    case RowKind::kBoardFromDepot: return "board0";
    case RowKind::kAlight: return "alight";
    case RowKind::kReturnByMachine: return "return_m";
    case RowKind::kSpacing: return "spacing";
    case RowKind::kDepotOrder: return "order";
  }
  return "row";
}

std::string ScheduleLP::VarName(int v) const {
  const ScheduleVar& x = vars[v];
  std::ostringstream out;
  switch (x.kind) {
    case VarKind::kService: out << "t_" << x.index; break;
    case VarKind::kDepart: out << "t0_" << x.index; break;
    case VarKind::kArrive: out << "tend_" << x.index; break;
    case VarKind::kTravel: {
      const TravelRef& t = sequences.machines[x.index][x.position];
      out << "alpha_" << x.index << "_" << t.from << "_" << t.to;
      break;
    }
  }
  return out.str();
}

std::string ScheduleLP::DescribeConstraint(int id) const {
  std::ostringstream out;
  if (id < static_cast<int>(rows.size())) {
    const ScheduleRow& r = rows[id];
    out << RowKindName(r.kind) << ": " << VarName(r.to) << " >= " << VarName(r.from) << " + " << r.constant;
  } else {
    const int b = id - static_cast<int>(rows.size());
    const int v = b / 2;
    if (b % 2 == 0) {
      out << "bound: " << VarName(v) << " >= " << vars[v].lower;
    } else {
      out << "bound: " << VarName(v) << " <= " << vars[v].upper;
    }
  }
  return out.str();
}

ScheduleLP BuildScheduleLp(const Instance& inst, const Sequences& seq) {
  const int K = inst.num_vehicles();
  const int H = inst.num_machines();
  const NodeId end = inst.depot_end();
  const TimeWindow depot = inst.depot_window();
  if (static_cast<int>(seq.routes.size()) != K || static_cast<int>(seq.machines.size()) != H) {
    throw SequenceError("sequence inconsistency: wrong number of routes or machines");
  }
  ScheduleLP lp;
  lp.sequences = seq;
  lp.service_var.assign(inst.num_nodes(), -1);
  lp.depart_var.resize(K);
  lp.arrive_var.resize(K);
  lp.travel_var.resize(H);

  auto add_var = [&](VarKind kind, int index, int position, double lo, double hi) {
    lp.vars.push_back({kind, index, position, lo, hi});
    return static_cast<int>(lp.vars.size()) - 1;
  };
  for (int k = 0; k < K; ++k) {
    lp.depart_var[k] = add_var(VarKind::kDepart, k, -1, depot.open, depot.close);
    lp.arrive_var[k] = add_var(VarKind::kArrive, k, -1, depot.open, depot.close);
  }
  for (int k = 0; k < K; ++k) {
    for (NodeId v : seq.routes[k]) {
      if (!inst.is_customer(v)) throw SequenceError("sequence inconsistency: route holds a non-customer node");
      if (lp.service_var[v] != -1) throw SequenceError("sequence inconsistency: node routed twice");
      lp.service_var[v] = add_var(VarKind::kService, v, -1, inst.window(v).open, inst.window(v).close);
    }
  }

  std::map<std::tuple<NodeId, NodeId, VehicleId>, std::pair<MachineId, int>> where;
  for (int h = 0; h < H; ++h) {
    for (std::size_t a = 0; a < seq.machines[h].size(); ++a) {
      const TravelRef& t = seq.machines[h][a];
      if (t.from < 0 || t.from >= inst.num_nodes() || t.to < 0 || t.to >= inst.num_nodes() ||
          !inst.is_machine_arc(t.from, t.to)) {
        throw SequenceError("sequence inconsistency: travel on a non-machine arc");
      }
      const auto hs = inst.eligible(t.from, t.to);
      if (std::find(hs.begin(), hs.end(), h) == hs.end()) {
        throw SequenceError("sequence inconsistency: machine not eligible for its travel");
      }
      if (!where.emplace(std::make_tuple(t.from, t.to, t.vehicle), std::make_pair(h, static_cast<int>(a))).second) {
        throw SequenceError("sequence inconsistency: travel listed twice");
      }
      const double lo = a == 0 ? inst.initial_reposition(h, t.from) : 0.0;
      lp.travel_var[h].push_back(add_var(VarKind::kTravel, h, static_cast<int>(a), lo, kInf));
    }
  }

  auto add_row = [&](int to, int from, double c, RowKind kind) { lp.rows.push_back({to, from, c, kind}); };
  std::size_t used_travels = 0;
  for (int k = 0; k < K; ++k) {
    std::vector<NodeId> full{0};
    full.insert(full.end(), seq.routes[k].begin(), seq.routes[k].end());
    full.push_back(end);
    auto var_of = [&](NodeId v) {
      if (v == 0) return lp.depart_var[k];
      if (v == end) return lp.arrive_var[k];
      return lp.service_var[v];
    };
    for (std::size_t p = 0; p + 1 < full.size(); ++p) {
      const NodeId i = full[p], j = full[p + 1];
      const double s = inst.service(i);
      if (!inst.is_machine_arc(i, j)) {
        const RowKind kind = i == 0 ? RowKind::kDepartChain : (j == end ? RowKind::kReturn : RowKind::kChain);
        add_row(var_of(j), var_of(i), s + inst.travel(k, i, j), kind);
        continue;
      }
      auto it = where.find(std::make_tuple(i, j, k));
      if (it == where.end()) throw SequenceError("sequence inconsistency: machine arc without travel");
      ++used_travels;
      const MachineId h = it->second.first;
      const int alpha = lp.travel_var[h][it->second.second];
      add_row(alpha, var_of(i), s + inst.approach(k, i, h), i == 0 ? RowKind::kBoardFromDepot : RowKind::kBoard);
      add_row(var_of(j), alpha, inst.crossing_between(h, i, j) + inst.approach(k, j, h),
              j == end ? RowKind::kReturnByMachine : RowKind::kAlight);
    }
    add_row(lp.arrive_var[k], lp.depart_var[k], 0.0, RowKind::kDepotOrder);
  }
  if (used_travels != where.size()) throw SequenceError("sequence inconsistency: travel matches no route arc");

  for (int h = 0; h < H; ++h) {
    const auto& s = seq.machines[h];
    for (std::size_t a = 1; a < s.size(); ++a) {
      const double gap = inst.crossing_between(h, s[a - 1].from, s[a - 1].to) +
                         inst.crossing_between(h, s[a - 1].to, s[a].from);
      add_row(lp.travel_var[h][a], lp.travel_var[h][a - 1], gap, RowKind::kSpacing);
    }
  }
  return lp;
}

namespace {

constexpr double kRelaxEps = 1e-9;

struct Arc {
  int from;
  int to;
  double gain;
  int id;  // constraint id
};

struct Graph {
  int num_nodes = 0;
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;  // arc indices

  void Add(int from, int to, double gain, int id) {
    out[from].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({from, to, gain, id});
  }
};

Graph BuildGraph(const ScheduleLP& lp) {
  Graph g;
  const int ref = static_cast<int>(lp.vars.size());
  g.num_nodes = ref + 1;
  g.out.resize(g.num_nodes);
  const int rows = static_cast<int>(lp.rows.size());
  for (int r = 0; r < rows; ++r) g.Add(lp.rows[r].from, lp.rows[r].to, lp.rows[r].constant, r);
  for (int v = 0; v < ref; ++v) {
    if (std::isfinite(lp.vars[v].lower)) g.Add(ref, v, lp.vars[v].lower, rows + 2 * v);
    if (std::isfinite(lp.vars[v].upper)) g.Add(v, ref, -lp.vars[v].upper, rows + 2 * v + 1);
  }
  return g;
}

// Residual view of the flow problem: forward arcs are uncapacitated with the
// row gain, backward arcs exist while flow is positive and negate it.
struct Residual {
  const Graph& g;
  std::vector<int> flow;

  explicit Residual(const Graph& graph) : g(graph), flow(graph.arcs.size(), 0) {}
};

// Longest paths from the given starting distances. Returns false and fills
// `cycle` (arc ids of a positive cycle) when one exists.
bool LongestPaths(const Residual& res, std::vector<double>& dist, std::vector<int>& pred_arc,
                  std::vector<char>& pred_backward, std::vector<int>* cycle) {
  const Graph& g = res.g;
  const int N = g.num_nodes;
  pred_arc.assign(N, -1);
  pred_backward.assign(N, 0);
  std::vector<int> count(N, 0);
  std::vector<char> queued(N, 0);
  std::deque<int> queue;
  // Incoming arcs are needed for backward residual arcs.
  static thread_local std::vector<std::vector<int>> in;
  in.assign(N, {});
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    if (res.flow[a] > 0) in[g.arcs[a].to].push_back(static_cast<int>(a));
  }
  for (int v = 0; v < N; ++v) {
    if (dist[v] > -kInf) {
      queue.push_back(v);
      queued[v] = 1;
    }
  }
  auto relax = [&](int u, int v, double gain, int arc, bool backward) -> int {
    const double cand = dist[u] + gain;
    if (cand > dist[v] + kRelaxEps) {
      dist[v] = cand;
      pred_arc[v] = arc;
      pred_backward[v] = backward;
      if (!queued[v]) {
        if (++count[v] > N) return v;
        queued[v] = 1;
        queue.push_back(v);
      }
    }
    return -1;
  };
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    queued[u] = 0;
    int bad = -1;
    for (int a : g.out[u]) {
      bad = relax(u, g.arcs[a].to, g.arcs[a].gain, a, false);
      if (bad >= 0) break;
    }
    if (bad < 0) {
      for (int a : in[u]) {
        bad = relax(u, g.arcs[a].from, -g.arcs[a].gain, a, true);
        if (bad >= 0) break;
      }
    }
    if (bad >= 0) {
      if (cycle != nullptr) {
        int v = bad;
        for (int step = 0; step < N && v >= 0 && pred_arc[v] >= 0; ++step) {
          const Arc& arc = g.arcs[pred_arc[v]];
          v = pred_backward[v] ? arc.to : arc.from;
        }
        const int start = v;
        cycle->clear();
        if (start >= 0) {
          int w = start;
          for (int step = 0; step <= N; ++step) {
            if (pred_arc[w] < 0) break;
            const Arc& arc = g.arcs[pred_arc[w]];
            cycle->push_back(arc.id);
            w = pred_backward[w] ? arc.to : arc.from;
            if (w == start) break;
          }
          std::reverse(cycle->begin(), cycle->end());
        }
      }
      return false;
    }
  }
  return true;
}

}  // namespace

ScheduleTimes SolveSchedule(const ScheduleLP& lp) {
  ScheduleTimes out;
  const Graph g = BuildGraph(lp);
  const int N = g.num_nodes;
  const int ref = N - 1;
  Residual res(g);
  std::vector<double> dist(N, 0.0);
  std::vector<int> pred;
  std::vector<char> back;

  if (!LongestPaths(res, dist, pred, back, &out.conflict)) {
    out.feasible = false;
    return out;
  }

  // Dual: route one unit from every departure to the arrivals along
  // maximum-gain paths.
  const int K = static_cast<int>(lp.depart_var.size());
  std::vector<int> supply(N, 0);
  for (int k = 0; k < K; ++k) {
    supply[lp.depart_var[k]] += 1;
    supply[lp.arrive_var[k]] -= 1;
  }
  for (int round = 0; round < K; ++round) {
    std::fill(dist.begin(), dist.end(), -kInf);
    for (int v = 0; v < N; ++v) {
      if (supply[v] > 0) dist[v] = 0.0;
    }
    if (!LongestPaths(res, dist, pred, back, nullptr)) {
      throw std::runtime_error("schedule solver lost dual feasibility");
    }
    int sink = -1;
    for (int v = 0; v < N; ++v) {
      if (supply[v] < 0 && dist[v] > -kInf && (sink < 0 || dist[v] > dist[sink] + kRelaxEps)) sink = v;
    }
    if (sink < 0) throw std::runtime_error("schedule solver found no augmenting path");
    int v = sink;
    int guard = 0;
    while (pred[v] >= 0) {
      const int a = pred[v];
      if (back[v]) {
        res.flow[a] -= 1;
        v = g.arcs[a].to;
      } else {
        res.flow[a] += 1;
        v = g.arcs[a].from;
      }
      if (++guard > N) throw std::runtime_error("schedule solver path walk did not terminate");
    }
    supply[v] -= 1;
    supply[sink] += 1;
  }

  // Potentials on the final residual graph give the primal optimum.
  std::fill(dist.begin(), dist.end(), 0.0);
  if (!LongestPaths(res, dist, pred, back, nullptr)) {
    throw std::runtime_error("schedule solver residual graph has a positive cycle");
  }
  out.values.resize(lp.vars.size());
  for (std::size_t v = 0; v < lp.vars.size(); ++v) out.values[v] = dist[v] - dist[ref];
  out.objective = 0.0;
  for (int k = 0; k < K; ++k) out.objective += out.values[lp.arrive_var[k]] - out.values[lp.depart_var[k]];
  out.feasible = true;
  return out;
}

double MaxViolation(const ScheduleLP& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (const ScheduleRow& r : lp.rows) worst = std::max(worst, x[r.from] + r.constant - x[r.to]);
  for (std::size_t v = 0; v < lp.vars.size(); ++v) {
    worst = std::max(worst, lp.vars[v].lower - x[v]);
    worst = std::max(worst, x[v] - lp.vars[v].upper);
  }
  return worst;
}

Solution ApplySchedule(const Instance& inst, const ScheduleLP& lp, const ScheduleTimes& times) {
  Solution sol;
  const int K = inst.num_vehicles();
  sol.routes.resize(K);
  for (int k = 0; k < K; ++k) {
    auto& route = sol.routes[k];
    int load = 0;
    route.push_back({0, times.values[lp.depart_var[k]], 0});
    for (NodeId v : lp.sequences.routes[k]) {
      load += inst.demand(v);
      route.push_back({v, times.values[lp.service_var[v]], load});
    }
    route.push_back({inst.depot_end(), times.values[lp.arrive_var[k]], 0});
  }
  sol.machines.resize(inst.num_machines());
  for (int h = 0; h < inst.num_machines(); ++h) {
    for (std::size_t a = 0; a < lp.sequences.machines[h].size(); ++a) {
      const TravelRef& t = lp.sequences.machines[h][a];
      sol.machines[h].push_back({t.from, t.to, t.vehicle, times.values[lp.travel_var[h][a]]});
    }
  }
  sol.cost = SolutionCost(sol);
  sol.feasible = times.feasible;
  return sol;
}

LinearModel ScheduleModel(const ScheduleLP& lp) {
  LinearModel m;
  m.name = "schedule";
  for (std::size_t v = 0; v < lp.vars.size(); ++v) {
    m.AddVar(lp.VarName(static_cast<int>(v)), VarType::kContinuous, lp.vars[v].lower, lp.vars[v].upper);
  }
  const int K = static_cast<int>(lp.depart_var.size());
  for (int k = 0; k < K; ++k) {
    const int c = m.AddVar("C_" + std::to_string(k), VarType::kContinuous, 0.0, kInf);
    m.objective.push_back({c, 1.0});
    LinearRow row;
    row.name = "compl_" + std::to_string(k);
    row.terms = {{c, 1.0}, {lp.arrive_var[k], -1.0}, {lp.depart_var[k], 1.0}};
    row.sense = Sense::kGe;
    row.rhs = 0.0;
    m.AddRow(std::move(row));
  }
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const ScheduleRow& s = lp.rows[r];
    LinearRow row;
    row.name = std::string(RowKindName(s.kind)) + "_" + std::to_string(r);
    row.terms = {{s.to, 1.0}, {s.from, -1.0}};
    row.sense = Sense::kGe;
    row.rhs = s.constant;
    m.AddRow(std::move(row));
  }
  return m;
}

}  // namespace pdptwse
