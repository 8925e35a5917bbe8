#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pdptwse/instance.hpp"
#include "pdptwse/solution.hpp"

namespace pdptwse {

using Rng = std::mt19937_64;

// Uniform index in [0, size) drawn as rng() mod size.
std::size_t DrawIndex(Rng& rng, std::size_t size);

struct MachineChoice {
  MachineId machine = -1;
  Travel travel;
  double wait = 0.0;
  double delta = 0.0;  // s_i + dbar + wait + O + dbar
};

struct MachineSearch {
  std::span<const TimeWindow> windows;  // per node in V'
  int machine_limit = -1;               // only machines below this id; -1 for all
  bool stop_on_window = true;           // false in repair mode
  // Travels of the inserting vehicle that are rescheduled (indexed by from node).
  const std::vector<char>* disregard = nullptr;
};

// Earliest non-disruptive crossing of arc (i, j) by vehicle k whose service at
// i starts at t_i, against existing travels plus the pending ones.
std::optional<MachineChoice> BestMachineTravel(const Instance& inst, const Solution& sol,
                                               std::span<const std::pair<MachineId, Travel>> pending, VehicleId k,
                                               NodeId i, NodeId j, double t_i, const MachineSearch& search);

// Quality of a feasible candidate. kIncrease is the growth of the vehicle's
// completion time with departure fixed at the depot opening; kDuration is the
// growth of the route duration once departure is delayed as far as the
// windows allow; kArrival is the absolute depot arrival.
enum class InsertionCost { kIncrease, kDuration, kArrival };

struct InsertionCandidate {
  bool feasible = false;  // every window and capacity respected
  bool valid = false;     // false when rejected outright
  VehicleId vehicle = 0;
  int p_pos = 0;  // 1-based position of the pickup in the new route
  int d_pos = 0;  // 1-based position in the old route before which d goes
  NodeId pickup = 0;
  double cost = 0.0;     // per InsertionCost, or repair cost when infeasible
  double arrival = 0.0;  // depot arrival after insertion
  int peak_load = 0;
  std::uint64_t version = 0;
  // Filled only on detailed analysis.
  std::vector<Visit> route;
  std::vector<std::pair<MachineId, Travel>> travels;
  std::vector<std::pair<NodeId, double>> window_shifts;  // node, new close
};

class StaleCandidate : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Insertion analysis and update over a mutable copy of windows and vehicle
// capacities, so the repair procedure can reuse it.
class Inserter {
 public:
  explicit Inserter(const Instance& inst);

  const Instance& instance() const { return inst_; }
  std::vector<TimeWindow>& windows() { return windows_; }
  std::vector<double>& capacities() { return capacities_; }
  void set_machine_limit(int limit) { machine_limit_ = limit; }
  // Repair mode: window violations and overload become infeasible candidates.
  void set_relaxed(bool relaxed) { relaxed_ = relaxed; }
  void set_cost(InsertionCost cost) { cost_ = cost; }

  InsertionCandidate Analyze(const Solution& sol, VehicleId k, int p_pos, int d_pos, NodeId p, bool detail);
  // Every candidate in scan order: vehicles, then p_pos, then d_pos.
  std::vector<InsertionCandidate> CandidateList(const Solution& sol, NodeId p);
  InsertionCandidate Detail(const Solution& sol, const InsertionCandidate& c);
  void Apply(Solution& sol, const InsertionCandidate& c);

 private:
  const Instance& inst_;
  std::vector<TimeWindow> windows_;
  std::vector<double> capacities_;
  std::vector<double> type_capacities_;
  int machine_limit_ = -1;
  bool relaxed_ = false;
  InsertionCost cost_ = InsertionCost::kDuration;
  std::vector<char> disregard_;
  std::vector<NodeId> seq_;
  std::vector<std::pair<MachineId, Travel>> pending_;

  // Accumulated waiting and departure delay slack along a route prefix.
  struct DelayState {
    double wait = 0.0;
    double slack = kInf;
  };
  DelayState Delay(VehicleId k, const std::vector<Visit>& route, int last) const;
  void Step(DelayState& st, VehicleId k, NodeId i, double t_i, NodeId j, double t_j) const;
};

// Pickups by nondecreasing window width, ties by id.
std::vector<NodeId> GreedyOrder(const Instance& inst);

// Called once per insertion step; rcl and chosen index into cl.
using InsertionObserver =
    std::function<void(std::span<const InsertionCandidate> cl, std::span<const std::size_t> rcl, std::size_t chosen)>;

Solution GreedyInsertion(const Instance& inst, InsertionCost cost = InsertionCost::kDuration);

struct SemiGreedyOptions {
  std::vector<NodeId> order;  // empty: uniform random permutation of pickups
  InsertionObserver observer;
  InsertionCost cost = InsertionCost::kDuration;
};

// The RCL holds feasible candidates within alpha of the cost range above the
// best. With alpha == 0 it holds only the first best, which reproduces greedy.
Solution SemiGreedyInsertion(const Instance& inst, double alpha, Rng& rng, const SemiGreedyOptions& options = {});

// Same sequences, LP-optimal times; cost never increases.
Solution LpImprove(const Instance& inst, const Solution& sol);

struct MslpConfig {
  double alpha = 0.05;
  long max_iterations = 60000;
  double time_limit = 3600.0;  // seconds
  std::uint64_t seed = 1;
  InsertionCost cost = InsertionCost::kDuration;
};

struct IncumbentRecord {
  long iteration = 0;
  double seconds = 0.0;
  double cost = 0.0;
};

struct MslpStats {
  long iterations = 0;
  long feasible = 0;
  double feasible_fraction = 0.0;
  double mean_lp_improvement = 0.0;  // percent, over feasible constructions
  double time_to_best = 0.0;
  double seconds = 0.0;
  std::vector<IncumbentRecord> history;
};

struct MslpResult {
  Solution best;  // feasible == false when no construction succeeded
  MslpStats stats;
};

MslpResult Mslp(const Instance& inst, const MslpConfig& config);

double LpImprovementPercent(double greedy_cost, double lp_cost);

}  // namespace pdptwse
