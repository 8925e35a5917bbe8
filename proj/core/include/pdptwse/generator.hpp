#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdptwse/instance.hpp"
#include "pdptwse/solution.hpp"

namespace pdptwse {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One row of a Li&Lim file. Pickups have pickup == 0, deliveries delivery == 0.
struct BaseTask {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  int demand = 0;
  double open = 0.0;
  double close = 0.0;
  double service = 0.0;
  int pickup = 0;
  int delivery = 0;
};

struct BasePdptw {
  int vehicles = 0;
  double capacity = 0.0;
  double speed = 1.0;
  int max_customer_id = -1;     // -1: no bound
  std::vector<BaseTask> tasks;  // tasks[0] is the depot
};

// Whitespace-separated Li&Lim layout. Tasks with id above max_customer_id
// (when given) are treated as dummies along with zero-demand customers.
BasePdptw ParseLiLim(std::string_view text, std::optional<int> max_customer_id = std::nullopt);
std::string WriteLiLim(const BasePdptw& base);
BasePdptw LoadLiLim(const std::string& path);

// The first n valid pickups in file order plus their deliveries.
BasePdptw TruncateRequests(const BasePdptw& base, int n);

enum class Family { kIsland, kFloor };

struct GenConfig {
  Family family = Family::kIsland;
  int requests = 6;
  int regions = 2;
  int machines = 3;
  int vehicle_types = 3;
  double capacity_step = 0.2;
  std::uint64_t seed = 1;
};

// "6R_6V_2I_3M" or "6R_6V_2F_3M".
std::string InstanceName(const GenConfig& cfg);

std::vector<Vehicle> GenVehicles(const BasePdptw& base, const GenConfig& cfg, std::mt19937_64& rng);

// Stations are placed this far (at least) from their anchor hull vertex.
inline constexpr double kStationClearance = 2.0;

// Island instance plus the geometry behind its stations.
struct IslandLayout {
  InstanceData data;
  std::vector<std::vector<Point>> hulls;  // per region, counterclockwise
  std::vector<int> anchors;               // hull vertex index per region
};

IslandLayout LayoutIslands(const BasePdptw& base, const GenConfig& cfg);
InstanceData GenMultiIsland(const BasePdptw& base, const GenConfig& cfg);
InstanceData GenMultiFloor(const BasePdptw& base, const GenConfig& cfg);

struct RepairResult {
  InstanceData data;
  bool changed = false;
  int passes = 0;
  Solution solution;  // feasible for data, using only the first max(1, |H|-1) machines
};

// Greedy repair of windows and vehicle types until a construction succeeds
// without changes.
RepairResult EnsureFeasibility(const InstanceData& data);

// Build plus repair.
InstanceData Generate(const BasePdptw& base, const GenConfig& cfg);

}  // namespace pdptwse
