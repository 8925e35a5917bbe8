#include "pdptwse/oracle.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "pdptwse/preprocess.hpp"
#include "pdptwse/schedule_lp.hpp"

namespace pdptwse {
namespace {

struct MachineArc {
  VehicleId k;
  NodeId i, j;
};

class Enumerator {
 public:
  Enumerator(const Instance& inst, const OracleLimits& limits, bool minimize,
             const std::function<bool(const Solution&)>* visit)
      : inst_(inst), limits_(limits), minimize_(minimize), visit_(visit) {
    if (inst.n() > limits.max_requests) {
      throw OracleRefused("instance has " + std::to_string(inst.n()) + " requests, limit is " +
                          std::to_string(limits.max_requests));
    }
    if (limits.preprocess) {
      try {
        pre_ = Preprocess(inst);
      } catch (const InfeasibleInstance&) {
        empty_ = true;
      }
    }
  }

  void Run() {
    if (empty_) return;
    assign_.assign(inst_.n() + 1, -1);
    Assign(1);
  }

  OracleResult result;
  long points = 0;

 private:
  bool ArcAllowed(NodeId i, NodeId j) const { return !pre_ || pre_->kept(i, j); }

  std::span<const MachineId> Machines(NodeId i, NodeId j) const {
    return pre_ ? pre_->eligible(i, j) : inst_.eligible(i, j);
  }

  void Assign(NodeId r) {
    if (stop_) return;
    if (r > inst_.n()) {
      EnumerateRoutes();
      return;
    }
    for (VehicleId k = 0; k < inst_.num_vehicles(); ++k) {
      if (inst_.demand(r) > inst_.vehicle(k).capacity + kTimeEps) continue;
      assign_[r] = k;
      Assign(r + 1);
    }
  }

  // Every precedence-, capacity- and arc-feasible customer order per vehicle.
  void Orders(VehicleId k, std::vector<NodeId>& cur, std::vector<char>& open, int remaining, int load,
              std::vector<std::vector<NodeId>>& out) const {
    const NodeId last = cur.empty() ? 0 : cur.back();
    if (remaining == 0) {
      if (ArcAllowed(last, inst_.depot_end())) out.push_back(cur);
      return;
    }
    for (NodeId r = 1; r <= inst_.n(); ++r) {
      if (assign_[r] != k) continue;
      for (NodeId v : {r, r + inst_.n()}) {
        const bool is_pick = v == r;
        if (is_pick ? open[r] != 0 : open[r] != 1) continue;
        const int next = load + inst_.demand(v);
        if (next > inst_.vehicle(k).capacity + kTimeEps) continue;
        if (!ArcAllowed(last, v)) continue;
        open[r] = is_pick ? 1 : 2;
        cur.push_back(v);
        Orders(k, cur, open, remaining - 1, next, out);
        cur.pop_back();
        open[r] = is_pick ? 0 : 1;
      }
    }
  }

  void EnumerateRoutes() {
    const int K = inst_.num_vehicles();
    orders_.assign(K, {});
    for (VehicleId k = 0; k < K; ++k) {
      int count = 0;
      for (NodeId r = 1; r <= inst_.n(); ++r) count += assign_[r] == k;
      std::vector<NodeId> cur;
      std::vector<char> open(inst_.n() + 1, 0);
      if (count == 0) {
        if (ArcAllowed(0, inst_.depot_end())) orders_[k].push_back({});
      } else {
        Orders(k, cur, open, 2 * count, 0, orders_[k]);
      }
      // Drop orders that cannot meet windows even with schedule-free machine bounds.
      std::erase_if(orders_[k], [&](const std::vector<NodeId>& o) {
        std::vector<NodeId> path{0};
        path.insert(path.end(), o.begin(), o.end());
        path.push_back(inst_.depot_end());
        return !PathEarliestArrival(inst_, k, path, inst_.depot_window().open).feasible;
      });
      if (orders_[k].empty()) return;
    }
    choice_.assign(K, 0);
    PickOrders(0);
  }

  double RouteBound(VehicleId k, const std::vector<NodeId>& o) const {
    if (o.empty()) return 0.0;
    double sum = 0.0;
    NodeId prev = 0;
    for (NodeId v : o) {
      sum += inst_.service(prev) + inst_.travel(k, prev, v);
      prev = v;
    }
    return sum + inst_.service(prev) + inst_.travel(k, prev, inst_.depot_end());
  }

  void PickOrders(VehicleId k) {
    if (stop_) return;
    if (k == inst_.num_vehicles()) {
      double bound = 0.0;
      for (VehicleId v = 0; v < k; ++v) bound += RouteBound(v, orders_[v][choice_[v]]);
      if (minimize_ && result.feasible && bound >= result.best.cost - kTimeEps) return;
      marcs_.clear();
      for (VehicleId v = 0; v < k; ++v) {
        NodeId prev = 0;
        const auto& o = orders_[v][choice_[v]];
        for (std::size_t a = 0; a <= o.size(); ++a) {
          const NodeId next = a < o.size() ? o[a] : inst_.depot_end();
          if (!(o.empty() && next == inst_.depot_end()) && inst_.is_machine_arc(prev, next)) {
            marcs_.push_back({v, prev, next});
          }
          prev = next;
        }
      }
      machine_of_.assign(marcs_.size(), -1);
      PickMachines(0);
      return;
    }
    for (std::size_t a = 0; a < orders_[k].size(); ++a) {
      choice_[k] = static_cast<int>(a);
      PickOrders(k + 1);
    }
  }

  void PickMachines(std::size_t a) {
    if (stop_) return;
    if (a == marcs_.size()) {
      const int H = inst_.num_machines();
      lists_.assign(H, {});
      for (std::size_t b = 0; b < marcs_.size(); ++b) lists_[machine_of_[b]].push_back(static_cast<int>(b));
      seq_.assign(H, {});
      Interleave(0);
      return;
    }
    for (MachineId h : Machines(marcs_[a].i, marcs_[a].j)) {
      machine_of_[a] = h;
      PickMachines(a + 1);
    }
  }

  // Merges on machine h of the per-vehicle ordered travel lists.
  void Interleave(MachineId h) {
    if (stop_) return;
    if (h == inst_.num_machines()) {
      Evaluate();
      return;
    }
    const auto& items = lists_[h];
    std::vector<char> used(items.size(), 0);
    seq_[h].clear();
    Merge(h, used);
  }

  void Merge(MachineId h, std::vector<char>& used) {
    const auto& items = lists_[h];
    if (seq_[h].size() == items.size()) {
      Interleave(h + 1);
      return;
    }
    for (std::size_t a = 0; a < items.size() && !stop_; ++a) {
      if (used[a]) continue;
      // Travels of one vehicle keep route order: take only its first unused one.
      bool earlier_unused = false;
      for (std::size_t b = 0; b < a; ++b) {
        if (!used[b] && marcs_[items[b]].k == marcs_[items[a]].k) earlier_unused = true;
      }
      if (earlier_unused) continue;
      if (pre_) {
        const MachineArc& x = marcs_[items[a]];
        bool dropped = false;
        for (int prev : seq_[h]) {
          const MachineArc& y = marcs_[prev];
          if (pre_->gamma_dropped({h, y.i, y.j, x.i, x.j})) dropped = true;
        }
        if (dropped) continue;
      }
      used[a] = 1;
      seq_[h].push_back(items[a]);
      Merge(h, used);
      seq_[h].pop_back();
      used[a] = 0;
    }
  }

  void Evaluate() {
    if (++result.combinations > limits_.max_combinations) {
      throw OracleRefused("combination budget of " + std::to_string(limits_.max_combinations) + " exceeded");
    }
    Sequences seq;
    for (VehicleId k = 0; k < inst_.num_vehicles(); ++k) seq.routes.push_back(orders_[k][choice_[k]]);
    seq.machines.resize(inst_.num_machines());
    for (MachineId h = 0; h < inst_.num_machines(); ++h) {
      for (int b : seq_[h]) seq.machines[h].push_back({marcs_[b].i, marcs_[b].j, marcs_[b].k});
    }
    const ScheduleLP lp = BuildScheduleLp(inst_, seq);
    ++result.lp_solves;
    const ScheduleTimes times = SolveSchedule(lp);
    if (!times.feasible) return;
    Solution sol = ApplySchedule(inst_, lp, times);
    ++points;
    if (visit_ && !(*visit_)(sol)) stop_ = true;
    if (minimize_ && (!result.feasible || sol.cost < result.best.cost - kTimeEps)) {
      result.feasible = true;
      result.best = std::move(sol);
    }
  }

  const Instance& inst_;
  OracleLimits limits_;
  bool minimize_;
  const std::function<bool(const Solution&)>* visit_;
  std::optional<PreprocessResult> pre_;
  bool empty_ = false;
  bool stop_ = false;
  std::vector<VehicleId> assign_;
  std::vector<std::vector<std::vector<NodeId>>> orders_;
  std::vector<int> choice_;
  std::vector<MachineArc> marcs_;
  std::vector<MachineId> machine_of_;
  std::vector<std::vector<int>> lists_;
  std::vector<std::vector<int>> seq_;
};

}  // namespace

OracleResult BruteForce(const Instance& inst, const OracleLimits& limits) {
  Enumerator e(inst, limits, true, nullptr);
  e.Run();
  if (!e.result.feasible) e.result.best = EmptySolution(inst);
  e.result.best.feasible = e.result.feasible;
  return e.result;
}

long EnumerateFeasiblePoints(const Instance& inst, const OracleLimits& limits,
                             const std::function<bool(const Solution&)>& visit) {
  Enumerator e(inst, limits, false, &visit);
  e.Run();
  return e.points;
}

}  // namespace pdptwse
