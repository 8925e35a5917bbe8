#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pdptwse {

enum class VarType { kContinuous, kBinary };
enum class Sense { kLe, kGe, kEq };

struct LinearVar {
  std::string name;
  VarType type = VarType::kContinuous;
  double lower = 0.0;
  double upper = 0.0;
};

struct LinearTerm {
  int var = 0;
  double coef = 0.0;
};

struct LinearRow {
  std::string name;
  std::vector<LinearTerm> terms;  // ascending var index, no zeros
  Sense sense = Sense::kLe;
  double rhs = 0.0;
  // Metadata, not written to text.
  std::string family;
  bool big_m = false;
};

class LinearModel {
 public:
  std::string name;
  std::vector<LinearVar> vars;
  std::vector<LinearRow> rows;
  std::vector<LinearTerm> objective;  // minimized

  int AddVar(std::string var_name, VarType type, double lower, double upper);
  int FindVar(const std::string& var_name) const;
  // Merges duplicate terms, drops zeros and sorts by variable.
  void AddRow(LinearRow row);

 private:
  std::unordered_map<std::string, int> index_;
};

class LpFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CPLEX-style LP text with 12 significant digits. Every variable is listed in
// the bounds section in index order so that reading restores the ordering.
std::string WriteLp(const LinearModel& model);
LinearModel ReadLp(std::string_view text);
void EmitLpText(const LinearModel& model, const std::string& path);

double RowActivity(const LinearRow& row, const std::vector<double>& values);
// Signed slack: non-negative when the row holds.
double RowSlack(const LinearRow& row, const std::vector<double>& values);

// Structural equality after rounding every number to 12 significant digits.
bool EquivalentModels(const LinearModel& a, const LinearModel& b);

}  // namespace pdptwse
