#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "pdptwse/instance.hpp"

namespace pdptwse {

class InfeasibleInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reason an arc was removed. kKept marks surviving arcs.
enum class ArcRule : std::uint8_t {
  kKept = 0,
  kPriority = 1,
  kPairing = 2,
  kCapacity = 3,
  kTimeWindow = 4,
  kWindowPairing = 5,
  kIndirect = 6,
  kNoMachine = 7,
  kSelf = 8,
};

const char* ArcRuleName(ArcRule rule);

// Shortest-path closure of d^k per vehicle speed. Equals d^k whenever the
// travel times already satisfy the triangle inequality, and is a valid lower
// bound on the time between two nodes visited non-consecutively otherwise.
class TravelBounds {
 public:
  explicit TravelBounds(const Instance& inst);

  double closure(VehicleId k, NodeId i, NodeId j) const {
    return table_[class_of_[k]][i * n_ + j];
  }
  double min_closure(NodeId i, NodeId j) const { return min_[i * n_ + j]; }
  // Number of ordered node pairs where the closure is below d^k (any k).
  int triangle_gaps() const { return gaps_; }

 private:
  int n_ = 0;
  int gaps_ = 0;
  std::vector<int> class_of_;
  std::vector<std::vector<double>> table_;
  std::vector<double> min_;
};

std::vector<TimeWindow> ShrinkWindows(const Instance& inst);
std::vector<TimeWindow> ShrinkWindows(const Instance& inst, const TravelBounds& bounds);

struct PathTiming {
  double arrival = 0.0;
  bool feasible = true;
};

// Earliest-arrival recurrence along a path starting at t_start. Windows
// default to the instance's; travel defaults to d^k of consecutive arcs.
PathTiming PathEarliestArrival(const Instance& inst, VehicleId k, std::span<const NodeId> path, double t_start,
                               std::span<const TimeWindow> windows = {}, const TravelBounds* bounds = nullptr);

struct GammaKey {
  MachineId h;
  NodeId i, j, ip, jp;

  std::uint64_t Pack() const;
  friend auto operator<=>(const GammaKey&, const GammaKey&) = default;
};

struct PreprocessResult {
  int num_nodes = 0;
  std::vector<TimeWindow> windows;              // per node id in V'
  std::vector<ArcRule> arc_rule;                // N*N
  std::vector<std::vector<MachineId>> machines;  // H'_ij per arc, N*N
  std::vector<GammaKey> dropped_gamma;          // sorted
  std::unordered_set<std::uint64_t> dropped_lookup;

  bool kept(NodeId i, NodeId j) const { return arc_rule[i * num_nodes + j] == ArcRule::kKept; }
  ArcRule rule(NodeId i, NodeId j) const { return arc_rule[i * num_nodes + j]; }
  std::span<const MachineId> eligible(NodeId i, NodeId j) const { return machines[i * num_nodes + j]; }
  bool gamma_dropped(const GammaKey& key) const { return dropped_lookup.count(key.Pack()) > 0; }
  std::array<int, 9> RuleCounts() const;
};

std::vector<ArcRule> EliminateArcs(const Instance& inst, std::span<const TimeWindow> windows,
                                   const TravelBounds& bounds);
std::vector<std::vector<MachineId>> FilterMachines(const Instance& inst, std::span<const TimeWindow> windows);
std::vector<GammaKey> DropGammaPairs(const Instance& inst, std::span<const TimeWindow> windows,
                                     const std::vector<ArcRule>& arc_rule,
                                     const std::vector<std::vector<MachineId>>& machines);

struct PreprocessOptions {
  bool drop_gamma = true;
};

// Shrink, eliminate, filter machines, drop gamma pairs. Throws
// InfeasibleInstance when a shrunk window is empty.
PreprocessResult Preprocess(const Instance& inst, PreprocessOptions options = {});
// Original windows, only self-loops and arcs into 0 or out of 2n+1 removed.
PreprocessResult NoPreprocess(const Instance& inst);

std::string PreprocessToJson(const PreprocessResult& pre);
PreprocessResult PreprocessFromJson(std::string_view text);

}  // namespace pdptwse
