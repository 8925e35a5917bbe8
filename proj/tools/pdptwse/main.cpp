#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pdptwse/generator.hpp"
#include "pdptwse/instance.hpp"
#include "pdptwse/io.hpp"
#include "pdptwse/linear_model.hpp"
#include "pdptwse/preprocess.hpp"
#include "pdptwse/report.hpp"

using namespace pdptwse::cli;

int main(int argc, char** argv) {
  CLI::App app{"Pickup and delivery with time windows and scheduled edges: generation, models, heuristics."};
  app.require_subcommand(1);
  app.footer("Relative input paths that do not exist are looked up under $PDPTWSE_DATA_DIR.\n"
             "Exit codes: 0 ok, 1 infeasible or validation failure, 2 usage, 3 internal error.");
  int code = kOk;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance from a Li&Lim base file");
  g->add_option("--family", gen.family, "island or floor")->check(CLI::IsMember({"island", "floor"}));
  g->add_option("--base", gen.base, "Li&Lim base file")->required();
  g->add_option("--n", gen.n, "number of requests")->check(CLI::PositiveNumber);
  g->add_option("--z", gen.z, "number of regions")->check(CLI::PositiveNumber);
  g->add_option("--machines", gen.machines, "number of machines")->check(CLI::PositiveNumber);
  g->add_option("--vehicle-types", gen.vehicle_types, "number of vehicle types")->check(CLI::PositiveNumber);
  g->add_option("--capacity-step", gen.capacity_step, "relative capacity step between types");
  g->add_option("--seed", gen.seed, "random seed");
  g->add_flag("--no-repair", gen.no_repair, "skip the feasibility repair");
  g->add_option("--out", gen.out, "instance JSON (stdout when omitted)");
  g->callback([&] { code = RunGen(gen); });

  PreprocessArgs pre;
  auto* p = app.add_subcommand("preprocess", "Report reductions and write the sidecar used by emit-mip");
  p->add_option("instance", pre.instance, "instance JSON")->required();
  p->add_option("--out", pre.out, "sidecar JSON with shrunk windows and removed arcs");
  p->add_flag("--keep-gamma", pre.keep_gamma, "keep every machine order pair");
  p->callback([&] { code = RunPreprocess(pre); });

  EmitArgs emit;
  auto* e = app.add_subcommand("emit-mip", "Write the MIP as LP text");
  e->add_option("instance", emit.instance, "instance JSON")->required();
  e->add_option("--vi", emit.vi, "none, all, standard, or a comma list of families");
  e->add_option("--sidecar", emit.sidecar, "preprocess sidecar to use instead of recomputing");
  e->add_flag("--no-preprocess", emit.no_preprocess, "build over the unreduced arc set");
  e->add_option("--out", emit.out, "LP file (stdout when omitted)");
  e->callback([&] { code = RunEmitMip(emit); });

  HeurArgs heur;
  auto* h = app.add_subcommand("heur", "Run the multi-start semi-greedy heuristic");
  h->add_option("instance", heur.instance, "instance JSON")->required();
  h->add_option("--alpha", heur.alpha, "RCL width in [0, 1]");
  h->add_option("--iters", heur.iters, "iterations per run")->check(CLI::PositiveNumber);
  h->add_option("--time-limit", heur.time_limit, "seconds per run");
  h->add_option("--seed", heur.seed, "seed of the first run; run r uses seed + r");
  h->add_option("--runs", heur.runs, "independent runs")->check(CLI::PositiveNumber);
  h->add_option("--cost", heur.cost, "candidate cost: duration, increase or arrival")
      ->check(CLI::IsMember({"duration", "increase", "arrival"}));
  h->add_flag("--greedy", heur.greedy, "single greedy construction plus LP improvement");
  h->add_option("--records", heur.records, "run records CSV (stdout when omitted)");
  h->add_option("--solution", heur.solution, "write the best solution JSON");
  h->callback([&] { code = RunHeur(heur); });

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Exact optimum of a tiny instance by enumeration");
  o->add_option("instance", orc.instance, "instance JSON")->required();
  o->add_option("--max-requests", orc.max_requests, "refuse above this many requests");
  o->add_option("--budget", orc.budget, "refuse above this many discrete combinations");
  o->add_flag("--preprocess", orc.preprocess, "search only the reduced arc set");
  o->add_option("--solution", orc.solution, "write the optimal solution JSON");
  o->callback([&] { code = RunOracle(orc); });

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Check a solution against every rule");
  v->add_option("instance", val.instance, "instance JSON")->required();
  v->add_option("solution", val.solution, "solution JSON")->required();
  v->callback([&] { code = RunValidate(val); });

  ScheduleArgs sch;
  auto* s = app.add_subcommand("schedule", "Optimal times for the sequences of a solution");
  s->add_option("instance", sch.instance, "instance JSON")->required();
  s->add_option("solution", sch.solution, "solution JSON")->required();
  s->add_option("--out", sch.out, "rescheduled solution JSON (stdout when omitted)");
  s->add_option("--lp-out", sch.lp_out, "write the timing LP as LP text");
  s->callback([&] { code = RunSchedule(sch); });

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run the heuristic over every instance JSON in a directory");
  b->add_option("dir", bench.dir, "instance directory")->required();
  b->add_option("--runs", bench.runs, "independent runs per instance")->check(CLI::PositiveNumber);
  b->add_option("--alpha", bench.alpha, "RCL width in [0, 1]");
  b->add_option("--iters", bench.iters, "iterations per run")->check(CLI::PositiveNumber);
  b->add_option("--time-limit", bench.time_limit, "seconds per run");
  b->add_option("--seed", bench.seed, "seed of the first run; run r uses seed + r");
  b->add_option("--cost", bench.cost, "candidate cost: duration, increase or arrival")
      ->check(CLI::IsMember({"duration", "increase", "arrival"}));
  b->add_option("--jobs", bench.jobs, "concurrent runs")->check(CLI::PositiveNumber);
  b->add_flag("--greedy", bench.greedy, "add a greedy record per instance");
  b->add_flag("--oracle", bench.oracle, "add an oracle record per instance small enough");
  b->add_option("--out", bench.out, "run records CSV (stdout when omitted)");
  b->callback([&] { code = RunBench(bench); });

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "Group means and method ranking from run records");
  r->add_option("runs", rep.runs, "run records CSV")->required();
  r->add_option("--solver", rep.solver, "external solver CSV with instance, method, solution, bound");
  r->add_option("--groups-out", rep.groups_out, "group summary CSV");
  r->add_option("--ranking-out", rep.ranking_out, "ranking CSV");
  r->callback([&] { code = RunReport(rep); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kUsage;
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const pdptwse::InfeasibleInstance& err) {
    std::cerr << "infeasible: " << err.what() << "\n";
    return kFailed;
  } catch (const pdptwse::ReportError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kFailed;
  } catch (const pdptwse::FormatError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const pdptwse::InstanceError& err) {
    std::cerr << "invalid instance: " << err.what() << "\n";
    return kUsage;
  } catch (const pdptwse::GenerationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const pdptwse::LpFormatError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kInternal;
  }
  return code;
}
