#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "pdptwse/instance.hpp"
#include "pdptwse/solution.hpp"

namespace pdptwse {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON documents; numbers are written in shortest round-trip form.
std::string InstanceToJson(const InstanceData& data);
InstanceData InstanceFromJson(std::string_view text);
std::string SolutionToJson(const Solution& sol);
Solution SolutionFromJson(std::string_view text);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

InstanceData LoadInstance(const std::string& path);
void SaveInstance(const std::string& path, const InstanceData& data);
Solution LoadSolution(const std::string& path);
void SaveSolution(const std::string& path, const Solution& sol);

}  // namespace pdptwse
