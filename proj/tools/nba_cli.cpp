// Command-line front end: generation, validation, costing, solving, MILP
// export, and the Cloud-WAN total-unimodularity check. stdout carries one
// machine-readable JSON document per invocation; diagnostics go to stderr.
// Exit codes: 0 ok, 1 infeasible/unsolved/negative result, 2 input error,
// 3 resource (budget) error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nba/nba.hpp"

namespace {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("NBA_LOG");
  if (!env) return LogLevel::Info;
  std::string v = env;
  if (v == "error") return LogLevel::Error;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Info;
}

void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) <= static_cast<int>(log_level())) std::cerr << msg << "\n";
}

nba::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nba::InputError("cannot open '" + path + "'");
  nba::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw nba::InputError("'" + path + "': " + e.what());
  }
  return j;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw nba::InputError("cannot write '" + path + "'");
  out << body;
}

std::string schema_of(const nba::json& j) {
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string()) {
    throw nba::InputError("input file carries no schema field");
  }
  return j["schema"].get<std::string>();
}

void emit(const nba::json& j) { std::cout << nba::dump_json(j); }

int run_gen(const std::string& spec_path, const std::string& out_path) {
  nba::GenSpec spec = nba::genspec_from_json(read_json_file(spec_path));
  nba::json doc = nba::generate_to_json(spec);
  std::string body = nba::dump_json(doc);
  if (!out_path.empty()) write_file(out_path, body);
  nba::json summary;
  summary["schema"] = doc["schema"];
  summary["seed"] = spec.seed;
  summary["bytes"] = body.size();
  if (!out_path.empty()) summary["out"] = out_path;
  emit(out_path.empty() ? doc : summary);
  return 0;
}

int run_validate(const std::string& instance_path, const std::string& plan_path) {
  nba::json doc = read_json_file(instance_path);
  std::string schema = schema_of(doc);
  if (schema == "nba-cdn/1") {
    nba::cdn_from_json(doc);
  } else if (schema == "nba-lvdn/1") {
    nba::lvdn_from_json(doc);
  } else if (schema == "nba-rtcn/1") {
    nba::rtcn_from_json(doc);
  } else if (schema == "nba-cwan/1") {
    nba::cloudwan_from_json(doc);
  } else if (schema == "nba-instance/1") {
    nba::Instance inst = nba::instance_from_json(doc);
    if (!plan_path.empty()) {
      nba::AllocationPlan plan = nba::plan_from_json(read_json_file(plan_path));
      std::vector<nba::Violation> violations = nba::check_feasible(inst, plan);
      emit(nba::violations_to_json(violations));
      if (!violations.empty()) {
        log(LogLevel::Info, "plan infeasible: " + std::to_string(violations.size()) +
                                " violation(s)");
        return 1;
      }
      log(LogLevel::Info, "plan feasible");
      return 0;
    }
  } else {
    throw nba::InputError("unknown schema '" + schema + "'");
  }
  if (!plan_path.empty() && schema != "nba-instance/1") {
    throw nba::InputError("--plan only applies to nba-instance/1 inputs");
  }
  nba::json ok;
  ok["schema"] = "nba-validate/1";
  ok["ok"] = true;
  emit(ok);
  log(LogLevel::Info, "instance valid (" + schema + ")");
  return 0;
}

int run_cost(const std::string& instance_path, const std::string& plan_path) {
  nba::Instance inst = nba::instance_from_json(read_json_file(instance_path));
  nba::AllocationPlan plan = nba::plan_from_json(read_json_file(plan_path));
  nba::Rat cost = nba::total_cost(inst, plan);
  nba::json out;
  out["cost"] = nba::rat_to_json(cost);
  emit(out);
  return 0;
}

int run_solve(const std::string& instance_path, const std::string& strategy,
              std::uint64_t seed, int workers, const std::string& out_path,
              const std::string& report_path) {
  nba::json doc = read_json_file(instance_path);
  std::string schema = schema_of(doc);

  if (schema == "nba-cdn/1") {
    if (strategy == "local") throw nba::InputError("cdn: strategies are exact|greedy");
    nba::CdnInstance cdn = nba::cdn_from_json(doc);
    nba::CdnSolveReport report = nba::cdn_solve(
        cdn, strategy == "exact" ? nba::ScenarioStrategy::Exact : nba::ScenarioStrategy::Greedy);
    nba::json body = nba::cdn_assignment_to_json(report.assignment);
    if (!out_path.empty()) write_file(out_path, nba::dump_json(body));
    nba::json out;
    out["schema"] = "nba-report/1";
    out["status"] = nba::solve_status_str(report.status);
    out["cost"] = nba::rat_to_json(report.cost);
    out["assignment"] = std::move(body);
    if (!report_path.empty()) write_file(report_path, nba::dump_json(out));
    emit(out);
    return report.status == nba::SolveStatus::Infeasible ? 1 : 0;
  }
  if (schema == "nba-cwan/1") {
    if (strategy == "local") throw nba::InputError("cwan: strategies are exact|greedy");
    nba::CloudWanInstance cw = nba::cloudwan_from_json(doc);
    nba::CwanSolveReport report = nba::cloudwan_solve(
        cw, strategy == "exact" ? nba::ScenarioStrategy::Exact : nba::ScenarioStrategy::Greedy);
    nba::json body = nba::cloudwan_flows_to_json(report.flows);
    if (!out_path.empty()) write_file(out_path, nba::dump_json(body));
    nba::json out;
    out["schema"] = "nba-report/1";
    out["status"] = nba::solve_status_str(report.status);
    out["cost"] = nba::rat_to_json(report.cost);
    out["flows"] = std::move(body);
    if (!report_path.empty()) write_file(report_path, nba::dump_json(out));
    emit(out);
    return report.status == nba::SolveStatus::Infeasible ? 1 : 0;
  }

  nba::Instance inst;
  if (schema == "nba-instance/1") {
    inst = nba::instance_from_json(doc);
  } else if (schema == "nba-lvdn/1") {
    inst = nba::lvdn_lower(nba::lvdn_from_json(doc));
    log(LogLevel::Debug, "lowered lvdn instance to " +
                             std::to_string(inst.network.node_count) + " nodes");
  } else if (schema == "nba-rtcn/1") {
    inst = nba::lvdn_lower(nba::rtcn_expand(nba::rtcn_from_json(doc)));
    log(LogLevel::Debug, "expanded rtcn instance to " +
                             std::to_string(inst.network.node_count) + " nodes");
  } else {
    throw nba::InputError("solve: unsupported schema '" + schema + "'");
  }

  nba::SolveReport report;
  if (strategy == "exact") {
    nba::SolveLimits limits;
    limits.workers = workers;
    report = nba::solve_exact(inst, limits);
  } else if (strategy == "greedy") {
    report = nba::solve_greedy(inst, seed);
  } else if (strategy == "local") {
    report = nba::solve_greedy(inst, seed);
    if (report.status != nba::SolveStatus::Infeasible) {
      report = nba::improve_local(inst, report.plan);
    }
  } else {
    throw nba::InputError("unknown strategy '" + strategy + "'");
  }

  if (!out_path.empty() && report.status != nba::SolveStatus::Infeasible) {
    write_file(out_path, nba::dump_json(nba::plan_to_json(report.plan)));
  }
  nba::json out = nba::report_to_json(report);
  if (!report_path.empty()) write_file(report_path, nba::dump_json(out));
  emit(out);
  log(LogLevel::Info, std::string("status ") + nba::solve_status_str(report.status) +
                          ", cost " + nba::rat_str(report.cost));
  return report.status == nba::SolveStatus::Infeasible ? 1 : 0;
}

int run_export(const std::string& instance_path, const std::string& format,
               const std::string& out_path) {
  nba::json doc = read_json_file(instance_path);
  std::string schema = schema_of(doc);
  nba::Instance inst;
  if (schema == "nba-instance/1") {
    inst = nba::instance_from_json(doc);
  } else if (schema == "nba-lvdn/1") {
    inst = nba::lvdn_lower(nba::lvdn_from_json(doc));
  } else if (schema == "nba-rtcn/1") {
    inst = nba::lvdn_lower(nba::rtcn_expand(nba::rtcn_from_json(doc)));
  } else {
    throw nba::InputError("export-milp: unsupported schema '" + schema + "'");
  }
  nba::MilpModel model = nba::encode(inst);
  std::string body = format == "mps" ? nba::export_mps(model) : nba::export_lp(model);
  if (!out_path.empty()) write_file(out_path, body);
  nba::json out;
  out["format"] = format;
  out["variables"] = model.vars.size();
  out["constraints"] = model.rows.size();
  out["bytes"] = body.size();
  if (!out_path.empty()) out["out"] = out_path;
  emit(out);
  if (out_path.empty()) std::cerr << body;  // no file requested: text on stderr
  return 0;
}

int run_check_tu(const std::string& instance_path, int slot, int max_sub) {
  nba::CloudWanInstance cw = nba::cloudwan_from_json(read_json_file(instance_path));
  nba::TuResult result = nba::check_totally_unimodular(cw, slot, max_sub);
  nba::json out;
  out["schema"] = "nba-tu/1";
  out["slot"] = slot;
  out["max_submatrix"] = max_sub;
  out["totally_unimodular"] = result.totally_unimodular;
  if (result.witness) {
    nba::json w;
    w["rows"] = result.witness->row_index;
    w["cols"] = result.witness->col_index;
    w["det"] = result.witness->det;
    out["witness"] = std::move(w);
  }
  emit(out);
  return result.totally_unimodular ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network bandwidth allocation toolkit"};
  app.require_subcommand(1);

  std::string spec_path, instance_path, plan_path, out_path, report_path;
  std::string strategy = "exact", format = "lp";
  std::uint64_t seed = 0;
  int workers = 1, slot = 1, max_sub = 6;

  CLI::App* gen = app.add_subcommand("gen", "generate a seeded instance");
  gen->add_option("--spec", spec_path, "generator spec (nba-genspec/1)")->required();
  gen->add_option("--out", out_path, "output instance file");

  CLI::App* validate = app.add_subcommand("validate", "validate an instance or a plan");
  validate->add_option("--instance", instance_path, "instance file")->required();
  validate->add_option("--plan", plan_path, "plan file (nba-plan/1)");

  CLI::App* cost = app.add_subcommand("cost", "evaluate the billed cost of a plan");
  cost->add_option("--instance", instance_path, "instance file")->required();
  cost->add_option("--plan", plan_path, "plan file")->required();

  CLI::App* solve = app.add_subcommand("solve", "run a solver");
  solve->add_option("--instance", instance_path, "instance file")->required();
  solve->add_option("--strategy", strategy, "exact|greedy|local")
      ->check(CLI::IsMember({"exact", "greedy", "local"}));
  solve->add_option("--seed", seed, "heuristic seed");
  solve->add_option("--workers", workers, "exact-solver worker threads")
      ->check(CLI::PositiveNumber);
  solve->add_option("--out", out_path, "plan output file");
  solve->add_option("--report", report_path, "report output file");

  CLI::App* milp = app.add_subcommand("export-milp", "emit the linearized model");
  milp->add_option("--instance", instance_path, "instance file")->required();
  milp->add_option("--format", format, "lp|mps")->check(CLI::IsMember({"lp", "mps"}));
  milp->add_option("--out", out_path, "model output file");

  CLI::App* tu = app.add_subcommand("check-tu", "total-unimodularity check (cloud-wan)");
  tu->add_option("--instance", instance_path, "nba-cwan/1 instance")->required();
  tu->add_option("--slot", slot, "slot to check");
  tu->add_option("--max-sub", max_sub, "largest submatrix size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    nba::json err;
    err["error"] = "usage";
    err["detail"] = e.what();
    emit(err);
    return 2;
  }

  try {
    if (gen->parsed()) return run_gen(spec_path, out_path);
    if (validate->parsed()) return run_validate(instance_path, plan_path);
    if (cost->parsed()) return run_cost(instance_path, plan_path);
    if (solve->parsed()) {
      return run_solve(instance_path, strategy, seed, workers, out_path, report_path);
    }
    if (milp->parsed()) return run_export(instance_path, format, out_path);
    if (tu->parsed()) return run_check_tu(instance_path, slot, max_sub);
  } catch (const nba::ResourceError& e) {
    log(LogLevel::Error, std::string("resource error: ") + e.what());
    nba::json err;
    err["error"] = "resource";
    err["detail"] = e.what();
    emit(err);
    return 3;
  } catch (const nba::InputError& e) {
    log(LogLevel::Error, std::string("input error: ") + e.what());
    nba::json err;
    err["error"] = "input";
    err["detail"] = e.what();
    emit(err);
    return 2;
  } catch (const nba::PreconditionError& e) {
    log(LogLevel::Error, std::string("precondition error: ") + e.what());
    nba::json err;
    err["error"] = "precondition";
    err["detail"] = e.what();
    emit(err);
    return 2;
  } catch (const std::exception& e) {
    log(LogLevel::Error, std::string("error: ") + e.what());
    nba::json err;
    err["error"] = "internal";
    err["detail"] = e.what();
    emit(err);
    return 2;
  }
  return 0;
}
