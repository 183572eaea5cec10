#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nba/io.hpp"

#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = NBA_TEST_TMP;

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  fs::create_directories(kTmp);
  fs::path out_file = kTmp / "stdout.txt";
  std::string cmd = std::string(NBA_CLI_PATH) + " " + args + " > " + out_file.string() + " 2> " +
                    (kTmp / "stderr.txt").string();
  int raw = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::ostringstream body;
  body << in.rdbuf();
  return {WEXITSTATUS(raw), body.str()};
}

std::string write_file(const std::string& name, const std::string& body) {
  fs::create_directories(kTmp);
  fs::path path = kTmp / name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

std::string genspec_body(const char* kind, std::uint64_t seed) {
  nba::json j;
  j["schema"] = "nba-genspec/1";
  j["kind"] = kind;
  j["seed"] = seed;
  j["n"] = 3;
  j["p"] = 2;
  j["edge_density_pct"] = 70;
  j["max_sources"] = 2;
  j["max_dests"] = 2;
  j["customers_per_slot"] = 2;
  return nba::dump_json(j);
}

}  // namespace

TEST_CASE("gen is deterministic and produces a validating instance") {
  std::string spec = write_file("spec.json", genspec_body("generic", 11));
  fs::path inst = kTmp / "inst.json";
  RunResult first = run_cli("gen --spec " + spec + " --out " + inst.string());
  REQUIRE(first.exit_code == 0);
  std::string once = slurp(inst);
  RunResult second = run_cli("gen --spec " + spec + " --out " + inst.string());
  REQUIRE(second.exit_code == 0);
  CHECK(slurp(inst) == once);

  RunResult validated = run_cli("validate --instance " + inst.string());
  CHECK(validated.exit_code == 0);
  CHECK(nba::json::parse(validated.out)["ok"] == true);
}

TEST_CASE("solve, validate, and cost agree end to end") {
  std::string spec = write_file("spec2.json", genspec_body("generic", 12));
  fs::path inst = kTmp / "inst2.json";
  REQUIRE(run_cli("gen --spec " + spec + " --out " + inst.string()).exit_code == 0);

  fs::path plan = kTmp / "plan.json";
  fs::path report = kTmp / "report.json";
  RunResult solved = run_cli("solve --instance " + inst.string() +
                             " --strategy exact --out " + plan.string() + " --report " +
                             report.string());
  REQUIRE(solved.exit_code == 0);
  nba::json report_json = nba::json::parse(solved.out);
  CHECK(report_json["status"] == "ProvenOptimal");

  CHECK(run_cli("validate --instance " + inst.string() + " --plan " + plan.string()).exit_code ==
        0);

  RunResult cost = run_cli("cost --instance " + inst.string() + " --plan " + plan.string());
  REQUIRE(cost.exit_code == 0);
  CHECK(nba::json::parse(cost.out)["cost"] == report_json["cost"]);

  // Identical solve runs produce byte-identical plan files.
  std::string plan_once = slurp(plan);
  REQUIRE(run_cli("solve --instance " + inst.string() + " --strategy exact --out " +
                  plan.string())
              .exit_code == 0);
  CHECK(slurp(plan) == plan_once);
}

TEST_CASE("cost of the documented chain plan is 3") {
  std::string inst =
      write_file("triangle.json", nba::dump_json(nba::instance_to_json(fixtures::triangle())));
  std::string plan =
      write_file("chain.json", nba::dump_json(nba::plan_to_json(fixtures::triangle_chain())));
  RunResult cost = run_cli("cost --instance " + inst + " --plan " + plan);
  REQUIRE(cost.exit_code == 0);
  CHECK(nba::json::parse(cost.out)["cost"] == nba::json(3));
}

TEST_CASE("capacity violations exit 1 with the violation document") {
  std::string inst = write_file(
      "tight.json", nba::dump_json(nba::instance_to_json(fixtures::two_node(nba::Rat(12),
                                                                            nba::Rat(10)))));
  nba::AllocationPlan p;
  p.at(1, 1) = {nba::Edge{1, 2}};
  std::string plan = write_file("tight_plan.json", nba::dump_json(nba::plan_to_json(p)));
  RunResult r = run_cli("validate --instance " + inst + " --plan " + plan);
  CHECK(r.exit_code == 1);
  nba::json j = nba::json::parse(r.out);
  CHECK(j["schema"] == "nba-violations/1");
  CHECK(j["violations"].size() == 2);
}

TEST_CASE("greedy and local strategies run the pipeline") {
  std::string spec = write_file("spec3.json", genspec_body("generic", 13));
  fs::path inst = kTmp / "inst3.json";
  REQUIRE(run_cli("gen --spec " + spec + " --out " + inst.string()).exit_code == 0);
  for (const char* strategy : {"greedy", "local"}) {
    fs::path plan = kTmp / (std::string("plan_") + strategy + ".json");
    RunResult r = run_cli("solve --instance " + inst.string() + " --strategy " + strategy +
                          " --seed 3 --out " + plan.string());
    REQUIRE(r.exit_code == 0);
    CHECK(run_cli("validate --instance " + inst.string() + " --plan " + plan.string())
              .exit_code == 0);
  }
}

TEST_CASE("export-milp writes both formats") {
  std::string inst =
      write_file("triangle2.json", nba::dump_json(nba::instance_to_json(fixtures::triangle())));
  fs::path lp = kTmp / "model.lp";
  fs::path mps = kTmp / "model.mps";
  REQUIRE(run_cli("export-milp --instance " + inst + " --format lp --out " + lp.string())
              .exit_code == 0);
  REQUIRE(run_cli("export-milp --instance " + inst + " --format mps --out " + mps.string())
              .exit_code == 0);
  CHECK(slurp(lp).find("Minimize") == 0);
  CHECK(slurp(mps).find("ENDATA") != std::string::npos);
}

TEST_CASE("scenario schemas dispatch through solve") {
  for (const char* kind : {"cdn", "lvdn", "rtcn", "cwan"}) {
    std::string spec = write_file(std::string("spec_") + kind + ".json", genspec_body(kind, 21));
    fs::path inst = kTmp / (std::string("inst_") + kind + ".json");
    REQUIRE(run_cli("gen --spec " + spec + " --out " + inst.string()).exit_code == 0);
    REQUIRE(run_cli("validate --instance " + inst.string()).exit_code == 0);
    std::string strategy = std::string(kind) == "cdn" || std::string(kind) == "cwan"
                               ? "greedy"
                               : "exact";
    RunResult r = run_cli("solve --instance " + inst.string() + " --strategy " + strategy);
    CHECK(r.exit_code == 0);
  }
}

TEST_CASE("check-tu reports the slot matrix verdict") {
  std::string spec = write_file("spec_tu.json", genspec_body("cwan", 31));
  fs::path inst = kTmp / "inst_tu.json";
  REQUIRE(run_cli("gen --spec " + spec + " --out " + inst.string()).exit_code == 0);
  RunResult r = run_cli("check-tu --instance " + inst.string() + " --slot 1 --max-sub 4");
  REQUIRE(r.exit_code == 0);
  CHECK(nba::json::parse(r.out)["totally_unimodular"] == true);
}

TEST_CASE("input problems exit 2") {
  CHECK(run_cli("cost --instance /nonexistent.json --plan /nonexistent.json").exit_code == 2);
  std::string junk = write_file("junk.json", "{not json");
  CHECK(run_cli("validate --instance " + junk).exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  std::string wrong = write_file("wrong_schema.json", "{\"schema\": \"nba-wat/1\"}\n");
  CHECK(run_cli("validate --instance " + wrong).exit_code == 2);
}

TEST_CASE("plan shape problems surface as ForeignEdge violations") {
  std::string inst =
      write_file("triangle3.json", nba::dump_json(nba::instance_to_json(fixtures::triangle())));
  nba::AllocationPlan p;
  p.at(1, 2) = {nba::Edge{1, 2}};  // source 2 does not exist in slot 1
  std::string plan = write_file("foreign.json", nba::dump_json(nba::plan_to_json(p)));
  RunResult r = run_cli("validate --instance " + inst + " --plan " + plan);
  CHECK(r.exit_code == 1);
  nba::json j = nba::json::parse(r.out);
  REQUIRE(j["violations"].size() == 1);
  CHECK(j["violations"][0]["kind"] == "ForeignEdge");
}

TEST_CASE("multi-worker exact solve reports the same cost") {
  std::string spec = write_file("spec_w.json", genspec_body("generic", 40));
  fs::path inst = kTmp / "inst_w.json";
  REQUIRE(run_cli("gen --spec " + spec + " --out " + inst.string()).exit_code == 0);
  RunResult one = run_cli("solve --instance " + inst.string() + " --strategy exact");
  RunResult four = run_cli("solve --instance " + inst.string() + " --strategy exact --workers 4");
  REQUIRE(one.exit_code == 0);
  REQUIRE(four.exit_code == 0);
  CHECK(nba::json::parse(one.out)["cost"] == nba::json::parse(four.out)["cost"]);
}

TEST_CASE("string rationals in instances work through the pipeline") {
  nba::Instance inst = fixtures::two_node(nba::Rat(3), nba::Rat(10));
  inst.network.unit_price[0] = nba::Rat(7, 2);
  inst.billing.percentile = nba::Rat(1, 2);  // serialized as "1/2"
  std::string path = write_file("frac.json", nba::dump_json(nba::instance_to_json(inst)));
  CHECK(run_cli("validate --instance " + path).exit_code == 0);
  fs::path plan = kTmp / "frac_plan.json";
  REQUIRE(run_cli("solve --instance " + path + " --strategy exact --out " + plan.string())
              .exit_code == 0);
  RunResult cost = run_cli("cost --instance " + path + " --plan " + plan.string());
  REQUIRE(cost.exit_code == 0);
  // u1 = 7/2 egress 3, u2 = 1 ingress 3: 21/2 + 3 = 27/2.
  CHECK(nba::json::parse(cost.out)["cost"] == nba::json("27/2"));
}
