#pragma once

#include <string>
#include <vector>

#include "pdptwse/generator.hpp"
#include "pdptwse/instance.hpp"
#include "pdptwse/solution.hpp"

namespace pdptwse::testing {

std::string DataPath(const std::string& name);

// Two islands, one ship, two requests; the reference solution costs 480.
InstanceData TwoIslandData();
Solution TwoIslandSolution();

// Single-region instance with n requests on a line; handy for hand values.
InstanceData LineInstance(int n, double capacity = 100.0);

struct SmallCase {
  std::string label;
  GenConfig config;
  InstanceData data;
};

// Generated n <= 3 instances cycling over family, z in {1,2}, |H| in {1,2}
// and the two synthetic base files; requests start at a seed-dependent offset.
std::vector<SmallCase> SmallInstanceSet(int count);

// A base file with the first `offset` requests turned into dummies.
BasePdptw ShiftedBase(const BasePdptw& base, int offset);

}  // namespace pdptwse::testing
