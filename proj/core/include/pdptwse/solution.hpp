#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdptwse/instance.hpp"

namespace pdptwse {

struct Visit {
  NodeId node = 0;
  double start = 0.0;  // service start; departure at node 0, arrival at 2n+1
  int load = 0;        // load after service

  friend bool operator==(const Visit&, const Visit&) = default;
};

// A loaded machine crossing. Empty repositioning is implicit.
struct Travel {
  NodeId from = 0;
  NodeId to = 0;
  VehicleId vehicle = 0;
  double start = 0.0;

  friend bool operator==(const Travel&, const Travel&) = default;
};

struct Solution {
  bool feasible = false;
  std::vector<std::vector<Visit>> routes;     // per vehicle, 0 ... 2n+1
  std::vector<std::vector<Travel>> machines;  // per machine, ascending start
  double cost = 0.0;
  std::uint64_t version = 0;  // bumped on every in-place update
};

// All vehicles parked at the depot from e_0.
Solution EmptySolution(const Instance& inst);

double SolutionCost(const Solution& sol);

enum class Rule {
  kStructure,
  kCoverage,
  kPairing,
  kCapacity,
  kLoadRecord,
  kTimeWindow,
  kDepotWindow,
  kTravelTime,
  kMachineMissing,
  kMachineEligibility,
  kMachineExclusivity,
  kCost,
};

const char* RuleName(Rule rule);

struct Violation {
  Rule rule;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Rule rule) const;
  std::string ToString() const;
};

ValidationReport Validate(const Instance& inst, const Solution& sol);

}  // namespace pdptwse
