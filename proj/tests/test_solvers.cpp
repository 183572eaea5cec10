#include <catch2/catch_amalgamated.hpp>

#include "nba/gen.hpp"
#include "nba/io.hpp"
#include "nba/solvers.hpp"

#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/plans.hpp"

using nba::AllocationPlan;
using nba::Edge;
using nba::GenSpec;
using nba::Instance;
using nba::Rat;
using nba::SolveLimits;
using nba::SolveReport;
using nba::SolveStatus;

namespace {

GenSpec tiny_spec(std::uint64_t seed) {
  GenSpec spec;
  spec.seed = seed;
  spec.node_count = 3 + static_cast<int>(seed % 2);  // 3 or 4
  spec.sample_count = 1 + static_cast<int>(seed % 2);
  spec.edge_density_pct = 60;
  spec.min_sources = 1;
  spec.max_sources = 2;
  spec.min_dests = 1;
  spec.max_dests = 2;
  return spec;
}

}  // namespace

TEST_CASE("exact solver finds the triangle chain") {
  Instance inst = fixtures::triangle();
  SolveReport report = nba::solve_exact(inst);
  REQUIRE(report.status == SolveStatus::ProvenOptimal);
  CHECK(report.cost == Rat(3));
  CHECK(nba::total_cost(inst, report.plan) == Rat(3));
  CHECK(nba::check_feasible(inst, report.plan).empty());
  CHECK(nba::is_directed_tree(inst, report.plan, 1, 1).ok);
}

TEST_CASE("source without destinations contributes an empty allocation") {
  Instance inst = fixtures::triangle();
  fixtures::add_source(inst, 1, 2, Rat(5), {});
  inst.validate();
  SolveReport report = nba::solve_exact(inst);
  REQUIRE(report.status == SolveStatus::ProvenOptimal);
  CHECK(report.cost == Rat(3));  // same optimum as without the idle source
  REQUIRE(report.plan.find(1, 2) != nullptr);
  CHECK(report.plan.find(1, 2)->empty());
}

TEST_CASE("unreachable destination is infeasible") {
  Instance inst = fixtures::simple(3, 1);
  inst.demands[0].edges.insert({1, 2});
  inst.network.base_edges.insert({1, 2});
  fixtures::add_source(inst, 1, 1, Rat(1), {3});
  inst.validate();
  SolveReport report = nba::solve_exact(inst);
  CHECK(report.status == SolveStatus::Infeasible);
}

TEST_CASE("exact matches the structure-agnostic oracle on seeded instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Instance inst = nba::generate_instance(tiny_spec(seed));
    auto brute = oracle::brute_force_optimum(inst);
    SolveReport report = nba::solve_exact(inst);
    if (!brute.cost.has_value()) {
      CHECK(report.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(report.status == SolveStatus::ProvenOptimal);
    CHECK(report.cost == *brute.cost);
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("search node budget raises a resource error with counts") {
  Instance inst = fixtures::triangle();
  SolveLimits limits;
  limits.max_search_nodes = 1;
  try {
    nba::solve_exact(inst, limits);
    FAIL("expected ResourceError");
  } catch (const nba::ResourceError& e) {
    CHECK(std::string(e.what()).find('1') != std::string::npos);
  }
}

TEST_CASE("parallel workers report the same optimum value") {
  Instance inst = nba::generate_instance(tiny_spec(7));
  SolveLimits one, four;
  four.workers = 4;
  SolveReport a = nba::solve_exact(inst, one);
  SolveReport b = nba::solve_exact(inst, four);
  REQUIRE(a.status == b.status);
  if (a.status == SolveStatus::ProvenOptimal) CHECK(a.cost == b.cost);
}

TEST_CASE("greedy finds the chain on the triangle") {
  Instance inst = fixtures::triangle();
  SolveReport report = nba::solve_greedy(inst, 1);
  REQUIRE(report.status == SolveStatus::Heuristic);
  CHECK(report.cost == Rat(3));
  CHECK(nba::check_feasible(inst, report.plan).empty());
}

TEST_CASE("greedy is feasible and never beats exact") {
  for (std::uint64_t seed = 30; seed < 50; ++seed) {
    Instance inst = nba::generate_instance(tiny_spec(seed));
    SolveReport greedy = nba::solve_greedy(inst, seed);
    SolveReport exact = nba::solve_exact(inst);
    if (greedy.status == SolveStatus::Infeasible) continue;
    CHECK(nba::check_feasible(inst, greedy.plan).empty());
    REQUIRE(exact.status == SolveStatus::ProvenOptimal);
    CHECK(greedy.cost >= exact.cost);
  }
}

TEST_CASE("greedy is deterministic for a fixed seed") {
  Instance inst = nba::generate_instance(tiny_spec(11));
  SolveReport a = nba::solve_greedy(inst, 5);
  SolveReport b = nba::solve_greedy(inst, 5);
  CHECK(nba::dump_json(nba::plan_to_json(a.plan)) == nba::dump_json(nba::plan_to_json(b.plan)));
  CHECK(a.cost == b.cost);
}

TEST_CASE("local search walks the star down to the chain") {
  Instance inst = fixtures::triangle();
  AllocationPlan star = fixtures::triangle_star();
  REQUIRE(nba::total_cost(inst, star) == Rat(4));
  SolveReport report = nba::improve_local(inst, star);
  CHECK(report.cost == Rat(3));
  CHECK(nba::check_feasible(inst, report.plan).empty());
  for (size_t i = 1; i < report.stats.cost_trace.size(); ++i) {
    CHECK(report.stats.cost_trace[i] <= report.stats.cost_trace[i - 1]);
  }
}

TEST_CASE("local search leaves an optimal plan unchanged") {
  Instance inst = fixtures::triangle();
  AllocationPlan chain = fixtures::triangle_chain();
  SolveReport report = nba::improve_local(inst, chain);
  CHECK(report.cost == Rat(3));
  CHECK(report.plan.at(1, 1) == chain.at(1, 1));
  CHECK(report.stats.moves_applied == 0);
}

TEST_CASE("local search rejects infeasible input with the violations listed") {
  Instance inst = fixtures::triangle();
  AllocationPlan empty;
  CHECK_THROWS_AS(nba::improve_local(inst, empty), nba::PreconditionError);
}

TEST_CASE("heuristic sandwich and monotone traces on seeded instances") {
  for (std::uint64_t seed = 60; seed < 80; ++seed) {
    Instance inst = nba::generate_instance(tiny_spec(seed));
    SolveReport greedy = nba::solve_greedy(inst, seed);
    if (greedy.status == SolveStatus::Infeasible) continue;
    SolveReport local = nba::improve_local(inst, greedy.plan);
    SolveReport exact = nba::solve_exact(inst);
    REQUIRE(exact.status == SolveStatus::ProvenOptimal);
    CHECK(exact.cost <= local.cost);
    CHECK(local.cost <= greedy.cost);
    for (size_t i = 1; i < local.stats.cost_trace.size(); ++i) {
      CHECK(local.stats.cost_trace[i] <= local.stats.cost_trace[i - 1]);
    }
    // Local search output is feasible and pruned.
    CHECK(nba::check_feasible(inst, local.plan).empty());
    for (const auto& [t, per_source] : local.plan.edges) {
      for (const auto& [s, es] : per_source) {
        nba::detail::Degrees deg = nba::detail::degrees(es);
        CHECK(deg.indeg(s) == 0);
        for (const auto& [node, indeg] : deg.in) CHECK(indeg <= 1);
      }
    }
  }
}

TEST_CASE("optimal plans are directed trees per source and slot") {
  for (std::uint64_t seed = 100; seed < 115; ++seed) {
    Instance inst = nba::generate_instance(tiny_spec(seed));
    SolveReport report = nba::solve_exact(inst);
    if (report.status != SolveStatus::ProvenOptimal) continue;
    for (int t = 1; t <= inst.billing.sample_count; ++t) {
      for (const auto& sd : inst.demand(t).sources) {
        CHECK(nba::is_directed_tree(inst, report.plan, t, sd.source).ok);
      }
    }
  }
}

TEST_CASE("reported cost always matches an independent recomputation") {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    Instance inst = nba::generate_instance(tiny_spec(seed));
    SolveReport exact = nba::solve_exact(inst);
    if (exact.status == SolveStatus::ProvenOptimal) {
      CHECK(exact.cost == nba::total_cost(inst, exact.plan));
    }
    SolveReport greedy = nba::solve_greedy(inst, seed);
    if (greedy.status == SolveStatus::Heuristic) {
      CHECK(greedy.cost == nba::total_cost(inst, greedy.plan));
    }
  }
}

TEST_CASE("capacity coupling across sources yields Infeasible") {
  // Each demand alone fits; together they overload node 3's ingress.
  Instance inst = fixtures::simple(3, 1, Rat(6));
  inst.demands[0].edges = {Edge{1, 3}, Edge{2, 3}};
  inst.network.base_edges = {Edge{1, 3}, Edge{2, 3}};
  fixtures::add_source(inst, 1, 1, Rat(4), {3});
  fixtures::add_source(inst, 1, 2, Rat(4), {3});
  inst.validate();
  SolveReport report = nba::solve_exact(inst);
  CHECK(report.status == SolveStatus::Infeasible);
  CHECK(nba::solve_greedy(inst, 0).status == SolveStatus::Infeasible);
}

TEST_CASE("a fifty-percent percentile frees half the cycle") {
  Instance inst = fixtures::simple(2, 4, Rat(1000));
  inst.billing.percentile = Rat(1, 2);  // k = 2 of 4 samples free
  for (int t = 1; t <= 4; ++t) {
    inst.demands[static_cast<size_t>(t - 1)].edges.insert({1, 2});
    inst.network.base_edges.insert({1, 2});
    fixtures::add_source(inst, t, 1, Rat(t == 1 || t == 2 ? 50 : 2), {2});
  }
  inst.validate();
  SolveReport report = nba::solve_exact(inst);
  REQUIRE(report.status == SolveStatus::ProvenOptimal);
  CHECK(report.cost == Rat(4));  // both spikes fall into free samples
}

TEST_CASE("exact matches the oracle under binding capacities") {
  int feasible = 0, infeasible = 0;
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    GenSpec spec = tiny_spec(seed);
    spec.min_cap = 3;
    spec.max_cap = 8;  // tight: trees compete for headroom
    spec.min_weight = 2;
    spec.max_weight = 5;
    Instance inst = nba::generate_instance(spec);
    auto brute = oracle::brute_force_optimum(inst);
    SolveReport report = nba::solve_exact(inst);
    if (!brute.cost.has_value()) {
      CHECK(report.status == SolveStatus::Infeasible);
      ++infeasible;
    } else {
      REQUIRE(report.status == SolveStatus::ProvenOptimal);
      CHECK(report.cost == *brute.cost);
      ++feasible;
    }
  }
  // The sweep must actually exercise both outcomes.
  CHECK(feasible >= 5);
  CHECK(infeasible >= 5);
}
