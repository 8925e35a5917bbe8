#pragma once

#include <array>
#include <bitset>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdptwse/instance.hpp"
#include "pdptwse/linear_model.hpp"
#include "pdptwse/preprocess.hpp"
#include "pdptwse/solution.hpp"

namespace pdptwse {

struct BigM {
  std::array<double, 8> values{};

  // One-based, M1..M8.
  double operator[](int index) const { return values[index - 1]; }
};

BigM ComputeBigM(const Instance& inst);

// Valid-inequality families.
enum class ViFamily : int {
  kIdle,         // an unused vehicle enters no node
  kArcPair,      // i->j and j->i are not both driven
  kCrossPair,    // a region pair is crossed in one direction only
  kOrderPair,    // two travels on a machine have one order
  kVehiclePath,  // infeasible two-arc path for one vehicle
  kMachinePath,  // two consecutive crossings infeasible for every vehicle
  kStartLb,      // service start after the earliest predecessor finish
  kBoardLb,      // boarding after the earliest possible approach
  kBoardUb,      // boarding early enough to reach the destination window
  kBoardArcLb,   // boarding after the driving vehicle's approach
  kBoardArcUb,   // boarding before the driving vehicle's deadline
  kSuccession,   // forced order between two crossings of a machine
};

inline constexpr int kNumViFamilies = 12;

// Row-name prefix and command-line token, e.g. "vehicle_path".
const char* ViFamilyName(ViFamily family);

class ViConfig {
 public:
  static ViConfig None() { return ViConfig(); }
  static ViConfig All();
  // Every family except kMachinePath; the best-ranked configuration.
  static ViConfig Standard();
  // "none", "all", "standard", or a comma list of family names.
  static ViConfig Parse(std::string_view text);

  bool enabled(ViFamily family) const { return bits_.test(static_cast<int>(family)); }
  void set(ViFamily family, bool on = true) { bits_.set(static_cast<int>(family), on); }
  std::string ToString() const;

  friend bool operator==(const ViConfig&, const ViConfig&) = default;

 private:
  std::bitset<kNumViFamilies> bits_;
};

// 1 when a vehicle cannot reach machine h from i' before the machine can
// be back from crossing (i, j).
bool MuIndicator(const Instance& inst, std::span<const TimeWindow> windows, MachineId h, NodeId i, NodeId j,
                 NodeId ip);

// Full model over the surviving arcs, machines and gamma pairs. Throws
// InfeasibleInstance when a shrunk window is empty.
LinearModel BuildMip(const Instance& inst, const PreprocessResult& pre, const ViConfig& vis);

// MIP variable values for a feasible solution. Unused alpha values sit at
// their valid lower bound.
std::vector<double> LiftSolution(const LinearModel& model, const Instance& inst, const PreprocessResult& pre,
                                 const Solution& sol);

struct RowCheck {
  int row = 0;
  double slack = 0.0;
};

// Rows and bounds violated by more than tol. Bound violations use row = -1 - var.
std::vector<RowCheck> ViolatedRows(const LinearModel& model, const std::vector<double>& values, double tol);

}  // namespace pdptwse
