#pragma once

#include <functional>
#include <stdexcept>

#include "pdptwse/instance.hpp"
#include "pdptwse/solution.hpp"

namespace pdptwse {

// Budget exceeded; the oracle never answers past it.
class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  int max_requests = 3;
  long max_combinations = 20'000'000;  // discrete schedules examined
  // Restrict the search to arcs, machines and machine orders that survive
  // preprocessing.
  bool preprocess = false;
};

struct OracleResult {
  bool feasible = false;
  Solution best;
  long combinations = 0;
  long lp_solves = 0;
};

// Exact minimum by exhaustive enumeration; each discrete combination gets
// LP-optimal times.
OracleResult BruteForce(const Instance& inst, const OracleLimits& limits = {});

// Calls visit for every feasible discrete combination with LP-optimal times.
// Stops early when visit returns false. Returns the number of points.
long EnumerateFeasiblePoints(const Instance& inst, const OracleLimits& limits,
                             const std::function<bool(const Solution&)>& visit);

}  // namespace pdptwse
