#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pdptwse::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2, kInternal = 3 };

// Bad arguments or unreadable inputs; exits with kUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resolves a relative input path against PDPTWSE_DATA_DIR when it does not
// exist relative to the working directory.
std::string ResolveInput(const std::string& path);

struct GenArgs {
  std::string family = "island";
  std::string base;
  int n = 6;
  int z = 2;
  int machines = 3;
  int vehicle_types = 3;
  double capacity_step = 0.2;
  std::uint64_t seed = 1;
  bool no_repair = false;
  std::string out;
};

struct PreprocessArgs {
  std::string instance;
  std::string out;
  bool keep_gamma = false;
};

struct EmitArgs {
  std::string instance;
  std::string vi = "standard";
  std::string sidecar;
  bool no_preprocess = false;
  std::string out;
};

struct HeurArgs {
  std::string instance;
  double alpha = 0.05;
  long iters = 60000;
  double time_limit = 3600.0;
  std::uint64_t seed = 1;
  int runs = 1;
  std::string cost = "duration";
  bool greedy = false;
  std::string records;
  std::string solution;
};

struct OracleArgs {
  std::string instance;
  int max_requests = 3;
  long budget = 20'000'000;
  bool preprocess = false;
  std::string solution;
};

struct ValidateArgs {
  std::string instance;
  std::string solution;
};

struct ScheduleArgs {
  std::string instance;
  std::string solution;
  std::string out;
  std::string lp_out;
};

struct BenchArgs {
  std::string dir;
  int runs = 10;
  double alpha = 0.05;
  long iters = 60000;
  double time_limit = 3600.0;
  std::uint64_t seed = 1;
  std::string cost = "duration";
  int jobs = 1;
  bool greedy = false;
  bool oracle = false;
  std::string out;
};

struct ReportArgs {
  std::string runs;
  std::string solver;
  std::string groups_out;
  std::string ranking_out;
};

int RunGen(const GenArgs& a);
int RunPreprocess(const PreprocessArgs& a);
int RunEmitMip(const EmitArgs& a);
int RunHeur(const HeurArgs& a);
int RunOracle(const OracleArgs& a);
int RunValidate(const ValidateArgs& a);
int RunSchedule(const ScheduleArgs& a);
int RunBench(const BenchArgs& a);
int RunReport(const ReportArgs& a);

}  // namespace pdptwse::cli
