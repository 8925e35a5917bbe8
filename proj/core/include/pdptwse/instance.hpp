#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdptwse {

// Absolute tolerance for every time and load comparison in the library.
inline constexpr double kTimeEps = 1e-6;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

using NodeId = int;
using VehicleId = int;
using MachineId = int;
using RegionId = int;

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double Distance(const Point& a, const Point& b);

struct TimeWindow {
  double open = 0.0;
  double close = 0.0;

  double width() const { return close - open; }
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

struct Node {
  Point pos;
  RegionId region = 0;
  int demand = 0;
  TimeWindow window;
  double service = 0.0;
};

struct Vehicle {
  double capacity = 0.0;
  double speed = 1.0;
};

struct Station {
  RegionId region = 0;
  Point pos;
};

// Station 0 is where the machine waits at time zero.
struct Machine {
  std::vector<Station> stations;
  double speed = 1.0;
};

// Plain description of an instance. Nodes are 0 (depot), 1..n (pickups) and
// n+1..2n (deliveries); the depot copy 2n+1 is implicit.
struct InstanceData {
  std::string name;
  int num_requests = 0;
  int num_regions = 1;
  std::vector<Node> nodes;
  std::vector<Vehicle> vehicles;
  std::vector<Machine> machines;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Returns every broken structural rule or invariant; empty means valid.
std::vector<std::string> CheckInstance(const InstanceData& data);

// Immutable instance with precomputed travel tables. Safe to share.
class Instance {
 public:
  explicit Instance(InstanceData data);

  const InstanceData& data() const { return data_; }
  const std::string& name() const { return data_.name; }

  int n() const { return n_; }
  int num_nodes() const { return num_nodes_; }  // |V'| = 2n + 2
  int depot_end() const { return num_nodes_ - 1; }
  int num_vehicles() const { return static_cast<int>(data_.vehicles.size()); }
  int num_machines() const { return static_cast<int>(data_.machines.size()); }
  int num_regions() const { return data_.num_regions; }

  bool is_pickup(NodeId i) const { return i >= 1 && i <= n_; }
  bool is_delivery(NodeId i) const { return i > n_ && i <= 2 * n_; }
  bool is_customer(NodeId i) const { return i >= 1 && i <= 2 * n_; }
  bool is_depot(NodeId i) const { return i == 0 || i == depot_end(); }
  NodeId sibling(NodeId i) const { return is_pickup(i) ? i + n_ : i - n_; }

  const Node& node(NodeId i) const { return data_.nodes[i == depot_end() ? 0 : i]; }
  RegionId region(NodeId i) const { return node(i).region; }
  int demand(NodeId i) const { return node(i).demand; }
  double service(NodeId i) const { return node(i).service; }
  const TimeWindow& window(NodeId i) const { return node(i).window; }
  const TimeWindow& depot_window() const { return data_.nodes[0].window; }
  const Vehicle& vehicle(VehicleId k) const { return data_.vehicles[k]; }
  const Machine& machine(MachineId h) const { return data_.machines[h]; }

  double max_capacity() const { return max_capacity_; }
  int max_demand() const { return max_demand_; }

  bool is_machine_arc(NodeId i, NodeId j) const { return region(i) != region(j); }

  // Euclidean distance between nodes.
  double distance(NodeId i, NodeId j) const { return dist_[i * num_nodes_ + j]; }

  // d^k_ij: straight travel time, or the schedule-free machine bound d-hat.
  // Infinite when a machine arc has no eligible machine.
  double travel(VehicleId k, NodeId i, NodeId j) const {
    return travel_[speed_class_[k]][i * num_nodes_ + j];
  }
  double min_travel(NodeId i, NodeId j) const { return min_travel_[i * num_nodes_ + j]; }

  // Station index of node i's region on machine h, or -1.
  int station_of(MachineId h, NodeId i) const { return station_[h * num_nodes_ + i]; }
  // d-bar: vehicle k between node i and the station of machine h in its region.
  double approach(VehicleId k, NodeId i, MachineId h) const;
  double min_approach(NodeId i, MachineId h) const;
  // O^h between two stations.
  double crossing(MachineId h, int from_station, int to_station) const {
    return crossing_[h][from_station * machine(h).stations.size() + to_station];
  }
  // O^h between the stations serving the regions of i and j.
  double crossing_between(MachineId h, NodeId i, NodeId j) const {
    return crossing(h, station_of(h, i), station_of(h, j));
  }
  // O^h from the initial station to the station of node i.
  double initial_reposition(MachineId h, NodeId i) const { return crossing(h, 0, station_of(h, i)); }

  // H_ij: machines with stations in both regions, ascending.
  std::span<const MachineId> eligible(NodeId i, NodeId j) const;

  // min over H_ij of d-bar + O + d-bar; throws when H_ij is empty.
  double MachineEdgeBound(VehicleId k, NodeId i, NodeId j) const;

  // Copy of the data with replaced windows (index 0..2n).
  InstanceData WithWindows(std::span<const TimeWindow> windows) const;

 private:
  InstanceData data_;
  int n_ = 0;
  int num_nodes_ = 0;
  double max_capacity_ = 0.0;
  int max_demand_ = 0;
  std::vector<double> dist_;
  std::vector<double> speeds_;
  std::vector<int> speed_class_;
  std::vector<std::vector<double>> travel_;
  std::vector<double> min_travel_;
  std::vector<int> station_;
  std::vector<double> approach_dist_;
  std::vector<std::vector<double>> crossing_;
  std::vector<std::vector<MachineId>> eligible_;  // indexed by region pair
};

// Arc partition over V'. Self-loops are excluded.
struct ArcSets {
  std::vector<std::pair<NodeId, NodeId>> straight;
  std::vector<std::pair<NodeId, NodeId>> machine;
};

ArcSets ClassifyArcs(const Instance& inst);

}  // namespace pdptwse
