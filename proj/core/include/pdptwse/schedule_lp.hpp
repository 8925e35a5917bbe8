#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pdptwse/instance.hpp"
#include "pdptwse/linear_model.hpp"
#include "pdptwse/solution.hpp"

namespace pdptwse {

struct TravelRef {
  NodeId from = 0;
  NodeId to = 0;
  VehicleId vehicle = 0;

  friend bool operator==(const TravelRef&, const TravelRef&) = default;
};

// Discrete part of a solution: customer order per vehicle and crossing order
// per machine.
struct Sequences {
  std::vector<std::vector<NodeId>> routes;
  std::vector<std::vector<TravelRef>> machines;
};

Sequences ExtractSequences(const Solution& sol);

class SequenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VarKind { kService, kDepart, kArrive, kTravel };

struct ScheduleVar {
  VarKind kind = VarKind::kService;
  int index = 0;      // node, vehicle, or machine
  int position = -1;  // travel position within its machine sequence
  double lower = 0.0;
  double upper = kInf;
};

enum class RowKind {
  kDepartChain,      // t_j >= t0 + d
  kChain,            // t_j >= t_i + s_i + d
  kReturn,           // t_end >= t_i + s_i + d
  kBoard,            // alpha >= t_i + s_i + dbar
  kBoardFromDepot,   // alpha >= t0 + dbar
  kAlight,           // t_j >= alpha + O + dbar
  kReturnByMachine,  // t_end >= alpha + O + dbar
  kSpacing,          // alpha' >= alpha + O + O (empty repositioning)
  kDepotOrder,       // t_end >= t0
};

const char* RowKindName(RowKind kind);

// x[to] - x[from] >= constant.
struct ScheduleRow {
  int to = 0;
  int from = 0;
  double constant = 0.0;
  RowKind kind = RowKind::kChain;
};

struct ScheduleLP {
  std::vector<ScheduleVar> vars;
  std::vector<ScheduleRow> rows;
  std::vector<int> service_var;  // per node id, -1 when not routed
  std::vector<int> depart_var;   // per vehicle
  std::vector<int> arrive_var;   // per vehicle
  std::vector<std::vector<int>> travel_var;  // per machine and position
  Sequences sequences;

  std::string VarName(int v) const;
  // Ids below rows.size() are rows; 2v+rows.size() and 2v+1+rows.size() are
  // the lower and upper bound of variable v.
  std::string DescribeConstraint(int id) const;
};

ScheduleLP BuildScheduleLp(const Instance& inst, const Sequences& seq);

struct ScheduleTimes {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> values;
  std::vector<int> conflict;  // constraint ids forming an infeasible cycle
};

ScheduleTimes SolveSchedule(const ScheduleLP& lp);

// Largest violation of any row or bound by the given values (0 if none).
double MaxViolation(const ScheduleLP& lp, const std::vector<double>& values);

// Solution carrying the sequences with LP times; loads recomputed.
Solution ApplySchedule(const Instance& inst, const ScheduleLP& lp, const ScheduleTimes& times);

// LP with explicit completion variables, for the text writer.
LinearModel ScheduleModel(const ScheduleLP& lp);

}  // namespace pdptwse
