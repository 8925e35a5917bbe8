#include <algorithm>
#include <cmath>
#include <numeric>

#include "pdptwse/heuristic.hpp"

namespace pdptwse {

std::size_t DrawIndex(Rng& rng, std::size_t size) { return static_cast<std::size_t>(rng() % size); }

std::optional<MachineChoice> BestMachineTravel(const Instance& inst, const Solution& sol,
                                               std::span<const std::pair<MachineId, Travel>> pending, VehicleId k,
                                               NodeId i, NodeId j, double t_i, const MachineSearch& search) {
  std::optional<MachineChoice> best;
  const double close_j = search.windows.empty() ? (j == inst.depot_end() ? inst.depot_window().close
                                                                        : inst.window(j).close)
                                                : search.windows[j].close;
  std::vector<Travel> seq;
  for (MachineId h : inst.eligible(i, j)) {
    if (search.machine_limit >= 0 && h >= search.machine_limit) continue;
    seq.clear();
    for (const Travel& t : sol.machines[h]) {
      if (t.vehicle == k && search.disregard && (*search.disregard)[t.from]) continue;
      seq.push_back(t);
    }
    double last_pending = -kInf;
    for (const auto& [ph, t] : pending) {
      if (ph != h) continue;
      seq.push_back(t);
      last_pending = std::max(last_pending, t.start);
    }
    std::stable_sort(seq.begin(), seq.end(), [](const Travel& a, const Travel& b) { return a.start < b.start; });
    std::size_t slot = 0;
    if (last_pending > -kInf) {
      while (slot < seq.size() && seq[slot].start <= last_pending) ++slot;
    }
    const double k_arr = t_i + inst.service(i) + inst.approach(k, i, h);
    const double o = inst.crossing_between(h, i, j);
    const double leave = inst.approach(k, j, h);
    for (; slot <= seq.size(); ++slot) {
      double ready;
      if (slot == 0) {
        ready = inst.initial_reposition(h, i);
      } else {
        const Travel& prev = seq[slot - 1];
        ready = prev.start + inst.crossing_between(h, prev.from, prev.to) + inst.crossing_between(h, prev.to, i);
      }
      const double alpha = std::max(k_arr, ready);
      if (search.stop_on_window && alpha + o + leave > close_j + kTimeEps) break;
      if (slot < seq.size()) {
        const Travel& next = seq[slot];
        if (alpha + o + inst.crossing_between(h, j, next.from) > next.start + kTimeEps) continue;
      }
      MachineChoice c;
      c.machine = h;
      c.travel = {i, j, k, alpha};
      c.wait = alpha - k_arr;
      c.delta = inst.service(i) + inst.approach(k, i, h) + c.wait + o + leave;
      if (!best || c.delta < best->delta) best = c;
      break;
    }
  }
  return best;
}

Inserter::Inserter(const Instance& inst) : inst_(inst) {
  const int N = inst.num_nodes();
  windows_.resize(N);
  for (NodeId i = 0; i < N; ++i) windows_[i] = i == inst.depot_end() ? inst.depot_window() : inst.window(i);
  for (int k = 0; k < inst.num_vehicles(); ++k) {
    capacities_.push_back(inst.vehicle(k).capacity);
  }
  type_capacities_ = capacities_;
  std::sort(type_capacities_.begin(), type_capacities_.end());
  type_capacities_.erase(std::unique(type_capacities_.begin(), type_capacities_.end()), type_capacities_.end());
  disregard_.assign(N, 0);
}

void Inserter::Step(DelayState& st, VehicleId k, NodeId i, double t_i, NodeId j, double t_j) const {
  st.wait += std::max(0.0, t_j - (t_i + inst_.service(i) + inst_.travel(k, i, j)));
  st.slack = std::min(st.slack, st.wait + windows_[j].close - t_j);
}

Inserter::DelayState Inserter::Delay(VehicleId k, const std::vector<Visit>& route, int last) const {
  DelayState st;
  st.slack = windows_[0].close - route[0].start;
  for (int a = 1; a <= last; ++a) Step(st, k, route[a - 1].node, route[a - 1].start, route[a].node, route[a].start);
  return st;
}

InsertionCandidate Inserter::Analyze(const Solution& sol, VehicleId k, int p_pos, int d_pos, NodeId p,
                                     bool detail) {
  const auto& orig = sol.routes[k];
  const int L = static_cast<int>(orig.size());
  const NodeId d = inst_.sibling(p);
  const NodeId end = inst_.depot_end();
  InsertionCandidate c;
  c.vehicle = k;
  c.p_pos = p_pos;
  c.d_pos = d_pos;
  c.pickup = p;
  c.version = sol.version;

  seq_.clear();
  for (int a = 0; a < p_pos - 1; ++a) seq_.push_back(orig[a].node);
  seq_.push_back(p);
  for (int a = p_pos - 1; a < d_pos - 1; ++a) seq_.push_back(orig[a].node);
  seq_.push_back(d);
  for (int a = d_pos - 1; a < L; ++a) seq_.push_back(orig[a].node);

  const int s0 = p_pos - 2;
  std::fill(disregard_.begin(), disregard_.end(), 0);
  for (int a = s0; a + 1 < L; ++a) disregard_[orig[a].node] = 1;
  pending_.clear();

  MachineSearch search;
  search.windows = windows_;
  search.machine_limit = machine_limit_;
  search.stop_on_window = !relaxed_;
  search.disregard = &disregard_;

  const double cap = capacities_[k];
  double t = orig[s0].start;
  int load = orig[s0].load;
  int peak = 0;
  for (int a = 0; a <= s0; ++a) peak = std::max(peak, orig[a].load);
  double shifts = 0.0;
  const bool by_duration = cost_ == InsertionCost::kDuration;
  DelayState delay;
  if (by_duration) delay = Delay(k, orig, s0);
  if (detail) c.route.assign(orig.begin(), orig.begin() + s0 + 1);

  for (std::size_t a = s0; a + 1 < seq_.size(); ++a) {
    const NodeId i = seq_[a];
    const NodeId j = seq_[a + 1];
    double arrival;
    if (inst_.is_machine_arc(i, j)) {
      auto choice = BestMachineTravel(inst_, sol, pending_, k, i, j, t, search);
      if (!choice) return c;
      pending_.emplace_back(choice->machine, choice->travel);
      arrival = choice->travel.start + inst_.crossing_between(choice->machine, i, j) +
                inst_.approach(k, j, choice->machine);
    } else {
      arrival = t + inst_.service(i) + inst_.travel(k, i, j);
    }
    const TimeWindow& w = windows_[j];
    double start = j == end ? arrival : std::max(arrival, w.open);
    if (start > w.close + kTimeEps) {
      if (!relaxed_) return c;
      const double close = std::ceil(start - kTimeEps);
      shifts += close - w.close;
      if (detail) c.window_shifts.emplace_back(j, close);
    }
    load += inst_.demand(j);
    peak = std::max(peak, load);
    if (load > cap + kTimeEps && !relaxed_) return c;
    if (by_duration) Step(delay, k, i, t, j, start);
    t = start;
    if (detail) c.route.push_back({j, start, load});
  }
  c.arrival = t;
  c.peak_load = peak;
  double excess = 0.0;
  if (peak > cap + kTimeEps) {
    // Repair must find a vehicle type large enough for the peak load.
    if (type_capacities_.empty() || type_capacities_.back() < peak - kTimeEps) return c;
    excess = peak - cap;
  }
  c.valid = true;
  c.feasible = shifts == 0.0 && excess == 0.0;
  if (!c.feasible) {
    c.cost = shifts + excess * cap;
  } else {
    switch (cost_) {
      case InsertionCost::kIncrease:
        c.cost = c.arrival - orig.back().start;
        break;
      case InsertionCost::kDuration: {
        const DelayState old = Delay(k, orig, L - 1);
        const double before = orig.back().start - orig[0].start - std::min(old.slack, old.wait);
        const double after = c.arrival - orig[0].start - std::min(delay.slack, delay.wait);
        c.cost = after - before;
        break;
      }
      case InsertionCost::kArrival:
        c.cost = c.arrival;
        break;
    }
  }
  if (detail) {
    c.travels = pending_;
  }
  return c;
}

std::vector<InsertionCandidate> Inserter::CandidateList(const Solution& sol, NodeId p) {
  std::vector<InsertionCandidate> out;
  for (VehicleId k = 0; k < inst_.num_vehicles(); ++k) {
    const int L = static_cast<int>(sol.routes[k].size());
    for (int pp = 2; pp <= L; ++pp) {
      for (int dp = pp; dp <= L; ++dp) {
        InsertionCandidate c = Analyze(sol, k, pp, dp, p, false);
        if (c.valid) out.push_back(std::move(c));
      }
    }
  }
  return out;
}

InsertionCandidate Inserter::Detail(const Solution& sol, const InsertionCandidate& c) {
  return Analyze(sol, c.vehicle, c.p_pos, c.d_pos, c.pickup, true);
}

void Inserter::Apply(Solution& sol, const InsertionCandidate& c) {
  if (c.version != sol.version) throw StaleCandidate("candidate was analyzed against another solution state");
  if (!c.valid || c.route.empty()) throw std::invalid_argument("candidate carries no detailed route");
  const VehicleId k = c.vehicle;
  auto& route = sol.routes[k];
  const int s0 = c.p_pos - 2;
  std::vector<char> gone(inst_.num_nodes(), 0);
  for (std::size_t a = s0; a + 1 < route.size(); ++a) gone[route[a].node] = 1;
  const double old_arrival = route.back().start;
  for (auto& seq : sol.machines) {
    std::erase_if(seq, [&](const Travel& t) { return t.vehicle == k && gone[t.from]; });
  }
  for (const auto& [h, t] : c.travels) sol.machines[h].push_back(t);
  for (auto& seq : sol.machines) {
    std::stable_sort(seq.begin(), seq.end(), [](const Travel& a, const Travel& b) { return a.start < b.start; });
  }
  route = c.route;
  for (const auto& [node, close] : c.window_shifts) {
    TimeWindow& w = windows_[node];
    if (node == inst_.depot_end()) {
      w.close = close;
      windows_[0].close = close;
    } else {
      const double width = w.width();
      w.close = close;
      w.open = close - width;
    }
  }
  if (c.peak_load > capacities_[k] + kTimeEps) {
    capacities_[k] = *std::lower_bound(type_capacities_.begin(), type_capacities_.end(), c.peak_load - kTimeEps);
  }
  sol.cost += c.arrival - old_arrival;
  ++sol.version;
}

std::vector<NodeId> GreedyOrder(const Instance& inst) {
  std::vector<NodeId> order(inst.n());
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return inst.window(a).width() < inst.window(b).width(); });
  return order;
}

Solution GreedyInsertion(const Instance& inst, InsertionCost cost) {
  Inserter ins(inst);
  ins.set_cost(cost);
  Solution sol = EmptySolution(inst);
  for (NodeId p : GreedyOrder(inst)) {
    const auto cl = ins.CandidateList(sol, p);
    const InsertionCandidate* best = nullptr;
    for (const auto& c : cl) {
      if (c.feasible && (!best || c.cost < best->cost)) best = &c;
    }
    if (!best) {
      sol.feasible = false;
      return sol;
    }
    ins.Apply(sol, ins.Detail(sol, *best));
  }
  sol.feasible = true;
  return sol;
}

Solution SemiGreedyInsertion(const Instance& inst, double alpha, Rng& rng, const SemiGreedyOptions& options) {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must lie in [0, 1]");
  std::vector<NodeId> order = options.order;
  if (order.empty()) {
    order.resize(inst.n());
    std::iota(order.begin(), order.end(), 1);
    for (std::size_t a = order.size(); a > 1; --a) std::swap(order[a - 1], order[DrawIndex(rng, a)]);
  }
  Inserter ins(inst);
  ins.set_cost(options.cost);
  Solution sol = EmptySolution(inst);
  std::vector<std::size_t> rcl;
  for (NodeId p : order) {
    auto cl = ins.CandidateList(sol, p);
    std::erase_if(cl, [](const InsertionCandidate& c) { return !c.feasible; });
    if (cl.empty()) {
      sol.feasible = false;
      return sol;
    }
    double cmin = kInf, cmax = -kInf;
    for (const auto& c : cl) {
      cmin = std::min(cmin, c.cost);
      cmax = std::max(cmax, c.cost);
    }
    const double threshold = cmin + alpha * (cmax - cmin);
    rcl.clear();
    for (std::size_t a = 0; a < cl.size(); ++a) {
      if (cl[a].cost <= threshold + 1e-9) rcl.push_back(a);
    }
    // Zero alpha is the deterministic greedy step: ties go to scan order.
    if (alpha == 0.0) rcl.resize(1);
    const std::size_t chosen = rcl[DrawIndex(rng, rcl.size())];
    if (options.observer) options.observer(cl, rcl, chosen);
    ins.Apply(sol, ins.Detail(sol, cl[chosen]));
  }
  sol.feasible = true;
  return sol;
}

}  // namespace pdptwse
