#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "nba/gen.hpp"
#include "nba/io.hpp"
#include "nba/milp.hpp"
#include "nba/solvers.hpp"

#include "support/fixtures.hpp"
#include "support/lp_reader.hpp"
#include "support/oracle.hpp"
#include "support/plans.hpp"

using nba::encode;
using nba::Edge;
using nba::Instance;
using nba::MilpModel;
using nba::MilpStatus;
using nba::Rat;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// The model itself in the readers' common representation.
lpread::ParsedModel as_parsed(const MilpModel& m) {
  lpread::ParsedModel out;
  for (const auto& term : m.objective) {
    out.objective[m.vars[static_cast<size_t>(term.var)].name] += term.coef;
  }
  for (const auto& row : m.rows) {
    lpread::ParsedRow pr;
    pr.name = row.name;
    pr.sense = row.sense == nba::RowSense::LessEqual ? '<'
               : row.sense == nba::RowSense::GreaterEqual ? '>'
                                                          : '=';
    pr.rhs = row.rhs;
    for (const auto& term : row.terms) {
      pr.coefs[m.vars[static_cast<size_t>(term.var)].name] += term.coef;
    }
    out.rows.push_back(std::move(pr));
  }
  for (const auto& v : m.vars) {
    if (v.kind == nba::VarKind::Binary) out.binaries.insert(v.name);
  }
  return out;
}

// p slots, one forced edge (1,2), per-slot weights. Exercises the discard
// machinery whenever p >= 20.
Instance forced_chain(const std::vector<long long>& weights) {
  Instance inst = fixtures::simple(2, static_cast<int>(weights.size()), Rat(1'000'000));
  for (size_t t = 0; t < weights.size(); ++t) {
    inst.demands[t].edges.insert({1, 2});
    inst.network.base_edges.insert({1, 2});
    fixtures::add_source(inst, static_cast<int>(t + 1), 1, Rat(weights[t]), {2});
  }
  inst.validate();
  return inst;
}

nba::GenSpec tiny_spec(std::uint64_t seed) {
  nba::GenSpec spec;
  spec.seed = seed;
  spec.node_count = 3;
  spec.sample_count = 1;
  spec.edge_density_pct = 70;
  spec.max_sources = 2;
  spec.max_dests = 2;
  return spec;
}

}  // namespace

TEST_CASE("triangle model has the documented shape") {
  MilpModel m = encode(fixtures::triangle());
  int f = 0, y = 0, ord = 0, z = 0;
  for (const auto& v : m.vars) {
    switch (v.role) {
      case nba::VarRole::EdgeChoice: ++f; break;
      case nba::VarRole::NodePeak: ++y; break;
      case nba::VarRole::NodeOrder: ++ord; break;
      default: ++z; break;
    }
  }
  CHECK(f == 6);   // 1 slot x 1 source x 6 edges
  CHECK(y == 3);   // one peak per node
  CHECK(z == 0);   // k = 0: discard binaries omitted
  CHECK(ord == 3);
  // k = 0 peak rows bind y directly to the loads.
  for (const auto& row : m.rows) {
    if (row.role == nba::RowRole::PeakOut || row.role == nba::RowRole::PeakIn) {
      for (const auto& term : row.terms) {
        CHECK(m.vars[static_cast<size_t>(term.var)].role != nba::VarRole::DiscardOut);
        CHECK(m.vars[static_cast<size_t>(term.var)].role != nba::VarRole::DiscardIn);
      }
    }
  }
}

TEST_CASE("discard binaries appear exactly p times per node and direction") {
  Instance inst = forced_chain({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 10});
  REQUIRE(inst.billing.discard_count() == 1);
  MilpModel m = encode(inst);
  int budget_rows = 0;
  for (const auto& row : m.rows) {
    if (row.role == nba::RowRole::DiscardBudgetOut || row.role == nba::RowRole::DiscardBudgetIn) {
      ++budget_rows;
      CHECK(row.terms.size() == 20);  // |T| binaries per node per direction
      CHECK(row.rhs == Rat(1));
    }
  }
  CHECK(budget_rows == 4);  // 2 nodes x 2 directions
}

TEST_CASE("exports match the reviewed golden files") {
  MilpModel m = encode(fixtures::triangle());
  CHECK(nba::export_lp(m) == slurp(std::string(NBA_GOLDEN_DIR) + "/triangle.lp"));
  CHECK(nba::export_mps(m) == slurp(std::string(NBA_GOLDEN_DIR) + "/triangle.mps"));
}

TEST_CASE("exports are deterministic") {
  Instance a = fixtures::triangle();
  Instance b = fixtures::triangle();
  CHECK(nba::export_lp(encode(a)) == nba::export_lp(encode(b)));
  CHECK(nba::export_mps(encode(a)) == nba::export_mps(encode(b)));
}

TEST_CASE("empty model exports are parseable skeletons") {
  Instance inst = fixtures::simple(2, 1);
  fixtures::complete_slot_edges(inst, 1);
  inst.validate();  // no sources anywhere
  MilpModel m = encode(inst);
  std::string lp = nba::export_lp(m);
  std::string mps = nba::export_mps(m);
  lpread::ParsedModel from_lp = lpread::parse_lp(lp);
  lpread::ParsedModel from_mps = lpread::parse_mps(mps);
  CHECK(from_lp == from_mps);
  CHECK(from_lp.rows.empty() == false);  // peak rows for the two billed nodes remain
}

TEST_CASE("LP and MPS round-trip to the same coefficient matrix as the model") {
  for (Instance inst : {fixtures::triangle(),
                        forced_chain({1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 3, 9}),
                        nba::generate_instance(tiny_spec(5))}) {
    MilpModel m = encode(inst);
    lpread::ParsedModel reference = as_parsed(m);
    lpread::ParsedModel from_lp = lpread::parse_lp(nba::export_lp(m));
    lpread::ParsedModel from_mps = lpread::parse_mps(nba::export_mps(m));
    CHECK(from_lp == reference);
    CHECK(from_mps == reference);
    CHECK(from_lp == from_mps);
  }
}

TEST_CASE("internal solver proves the triangle optimum") {
  MilpModel m = encode(fixtures::triangle());
  nba::MilpResult r = nba::solve_milp_internal(m, 1'000'000);
  REQUIRE(r.status == MilpStatus::Optimal);
  CHECK(r.objective == Rat(3));
  // The winning assignment's edge part is a feasible plan of matching cost.
  Instance inst = fixtures::triangle();
  nba::AllocationPlan plan;
  for (const auto& [name, value] : r.assignment) {
    if (name.rfind("f_", 0) == 0 && value == Rat(1)) {
      int idx = m.var_by_name(name);
      REQUIRE(idx >= 0);
      const nba::MilpVar& v = m.vars[static_cast<size_t>(idx)];
      plan.at(v.slot, v.source).insert(v.edge);
    }
  }
  CHECK(nba::check_feasible(inst, plan).empty());
  CHECK(nba::total_cost(inst, plan) == r.objective);
}

TEST_CASE("zero node budget returns Unsolved") {
  MilpModel m = encode(fixtures::triangle());
  CHECK(nba::solve_milp_internal(m, 0).status == MilpStatus::Unsolved);
}

TEST_CASE("internal solver equals brute force on seeded instances") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = nba::generate_instance(tiny_spec(seed));
    auto brute = oracle::brute_force_optimum(inst);
    nba::MilpResult r = nba::solve_milp_internal(encode(inst), 50'000'000);
    if (!brute.cost) {
      CHECK(r.status == MilpStatus::Infeasible);
    } else {
      REQUIRE(r.status == MilpStatus::Optimal);
      CHECK(r.objective == *brute.cost);
    }
  }
}

TEST_CASE("discard linearization realizes the free-slot effect") {
  // One spike within the free budget: billed like the flat series. Forced
  // plan, so the oracle is just the plan cost.
  std::vector<long long> flat(20, 2), spiked(20, 2);
  spiked[7] = 19;
  Instance flat_inst = forced_chain(flat);
  Instance spiked_inst = forced_chain(spiked);
  nba::MilpResult a = nba::solve_milp_internal(encode(flat_inst), 10'000'000);
  nba::MilpResult b = nba::solve_milp_internal(encode(spiked_inst), 10'000'000);
  REQUIRE(a.status == MilpStatus::Optimal);
  REQUIRE(b.status == MilpStatus::Optimal);
  CHECK(a.objective == b.objective);
  auto brute = oracle::brute_force_optimum(spiked_inst);
  REQUIRE(brute.cost.has_value());
  CHECK(b.objective == *brute.cost);
  // The winning assignment discards the spike slot on both directions.
  CHECK(b.assignment.at("zout_n1_t8") == Rat(1));
  CHECK(b.assignment.at("zin_n2_t8") == Rat(1));
}

TEST_CASE("pruned feasible plans satisfy every row with y at the billed value") {
  nba::SplitMix64 rng(0xf00dULL);
  Instance inst = nba::generate_instance(tiny_spec(21));
  MilpModel m = encode(inst);
  int mapped = 0;
  for (int iter = 0; iter < 60 && mapped < 25; ++iter) {
    auto plan_opt = testplans::random_feasible_plan(inst, rng);
    if (!plan_opt) continue;
    nba::AllocationPlan plan = nba::prune_plan(inst, *plan_opt);
    ++mapped;

    // Assemble the assignment the encoding promises exists.
    std::map<std::string, Rat> assign;
    for (const auto& v : m.vars) {
      if (v.role == nba::VarRole::EdgeChoice) {
        const std::set<Edge>* es = plan.find(v.slot, v.source);
        assign[v.name] = Rat(es && es->count(v.edge) ? 1 : 0);
      }
    }
    nba::BandwidthSeries series = nba::bandwidth_series(inst, plan);
    for (nba::NodeId i = 1; i <= inst.network.node_count; ++i) {
      assign["y_n" + std::to_string(i)] = nba::node_billed_value(inst, series, i);
    }
    // Discards: drop the largest k loads per node/direction (ties to the
    // earlier slot).
    int k = inst.billing.discard_count();
    if (k > 0) {
      for (nba::NodeId i = 1; i <= inst.network.node_count; ++i) {
        for (int dir = 0; dir < 2; ++dir) {
          std::vector<std::pair<Rat, int>> loads;
          for (int t = 1; t <= inst.billing.sample_count; ++t) {
            const auto& row = dir ? series.ingress : series.egress;
            loads.push_back({row[static_cast<size_t>(i - 1)][static_cast<size_t>(t - 1)], t});
          }
          std::sort(loads.begin(), loads.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
          });
          for (size_t r = 0; r < loads.size(); ++r) {
            std::string name = (dir ? "zin_n" : "zout_n") + std::to_string(i) + "_t" +
                               std::to_string(loads[r].second);
            if (m.var_by_name(name) >= 0) assign[name] = Rat(r < static_cast<size_t>(k) ? 1 : 0);
          }
        }
      }
    }
    // Orders: depth from the source in the pruned per-(slot, source) tree.
    for (const auto& v : m.vars) {
      if (v.role != nba::VarRole::NodeOrder) continue;
      const std::set<Edge>* es = plan.find(v.slot, v.source);
      Rat depth(0);
      if (es) {
        std::map<nba::NodeId, nba::NodeId> parent;
        for (const Edge& e : *es) parent[e.head] = e.tail;
        nba::NodeId walk = v.node;
        int guard = 0;
        while (walk != v.source && parent.count(walk) && ++guard <= inst.network.node_count) {
          depth += Rat(1);
          walk = parent.at(walk);
        }
        if (walk != v.source) depth = Rat(0);  // untouched node
      }
      assign[v.name] = depth;
    }

    for (const auto& row : m.rows) {
      Rat lhs(0);
      for (const auto& term : row.terms) {
        lhs += term.coef * assign.at(m.vars[static_cast<size_t>(term.var)].name);
      }
      bool ok = row.sense == nba::RowSense::LessEqual    ? lhs <= row.rhs
                : row.sense == nba::RowSense::GreaterEqual ? lhs >= row.rhs
                                                           : lhs == row.rhs;
      if (!ok) {
        CAPTURE(row.name, nba::rat_str(lhs), nba::rat_str(row.rhs));
        FAIL_CHECK("row violated by mapped plan");
      }
    }
    // Objective at this assignment equals the plan cost.
    Rat obj(0);
    for (const auto& term : m.objective) {
      obj += term.coef * assign.at(m.vars[static_cast<size_t>(term.var)].name);
    }
    CHECK(obj == nba::total_cost(inst, plan));
  }
  REQUIRE(mapped >= 10);
}

TEST_CASE("variable and row counts follow the documented formulas") {
  for (std::uint64_t seed : {3ULL, 8ULL, 15ULL}) {
    nba::GenSpec spec = tiny_spec(seed);
    spec.sample_count = 2;
    Instance inst = nba::generate_instance(spec);
    MilpModel m = encode(inst);
    int p = inst.billing.sample_count;
    int k = inst.billing.discard_count();
    int n = inst.network.node_count;

    long long f_expect = 0, ord_expect = 0;
    long long src_expect = 0, dst_expect = 0, ecap_expect = 0, icap_expect = 0, rep_expect = 0;
    long long feed_expect = 0, mtz_expect = 0;
    for (int t = 1; t <= p; ++t) {
      const nba::SlotDemand& d = inst.demand(t);
      std::set<nba::NodeId> touched;
      for (const Edge& e : d.edges) {
        touched.insert(e.tail);
        touched.insert(e.head);
      }
      f_expect += static_cast<long long>(d.sources.size()) * static_cast<long long>(d.edges.size());
      ord_expect += static_cast<long long>(d.sources.size()) * static_cast<long long>(touched.size());
      for (const auto& sd : d.sources) {
        if (!sd.dests.empty()) ++src_expect;
        dst_expect += static_cast<long long>(sd.dests.size());
        for (nba::NodeId j = 1; j <= n; ++j) {
          if (sd.dests.count(j)) continue;
          bool has_in = false;
          for (const Edge& e : d.edges) {
            if (e.head == j) has_in = true;
          }
          if (has_in) ++rep_expect;
        }
        for (const Edge& e : d.edges) {
          if (e.tail != sd.source) ++feed_expect;
          if (e.head != sd.source) ++mtz_expect;
        }
      }
      for (nba::NodeId i = 1; i <= n; ++i) {
        bool out = false, in = false;
        for (const Edge& e : d.edges) {
          out = out || e.tail == i;
          in = in || e.head == i;
        }
        if (out && !d.sources.empty()) ++ecap_expect;
        if (in && !d.sources.empty()) ++icap_expect;
      }
    }

    std::map<nba::VarRole, long long> vars;
    for (const auto& v : m.vars) ++vars[v.role];
    CHECK(vars[nba::VarRole::EdgeChoice] == f_expect);
    CHECK(vars[nba::VarRole::NodePeak] == n);
    CHECK(vars[nba::VarRole::NodeOrder] == ord_expect);
    long long z_expect = k > 0 ? 2LL * n * p : 0;
    CHECK(vars[nba::VarRole::DiscardOut] + vars[nba::VarRole::DiscardIn] == z_expect);

    std::map<nba::RowRole, long long> rows;
    for (const auto& row : m.rows) ++rows[row.role];
    CHECK(rows[nba::RowRole::SourceOut] == src_expect);
    CHECK(rows[nba::RowRole::DestCover] == dst_expect);
    CHECK(rows[nba::RowRole::EgressCap] == ecap_expect);
    CHECK(rows[nba::RowRole::IngressCap] == icap_expect);
    CHECK(rows[nba::RowRole::Replication] == rep_expect);
    CHECK(rows[nba::RowRole::EdgeFeed] == feed_expect);
    CHECK(rows[nba::RowRole::ReachOrder] == mtz_expect);
    CHECK(rows[nba::RowRole::PeakOut] == static_cast<long long>(n) * p);
    CHECK(rows[nba::RowRole::PeakIn] == static_cast<long long>(n) * p);
    long long budget_expect = k > 0 ? 2LL * n : 0;
    CHECK(rows[nba::RowRole::DiscardBudgetOut] + rows[nba::RowRole::DiscardBudgetIn] ==
          budget_expect);
  }
}

TEST_CASE("an instance with no sources solves to zero") {
  Instance inst = fixtures::simple(2, 1);
  fixtures::complete_slot_edges(inst, 1);
  inst.validate();
  nba::MilpResult r = nba::solve_milp_internal(encode(inst), 1000);
  REQUIRE(r.status == MilpStatus::Optimal);
  CHECK(r.objective == Rat(0));
}
