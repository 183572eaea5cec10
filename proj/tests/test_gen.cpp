#include <catch2/catch_amalgamated.hpp>

#include "nba/gen.hpp"
#include "nba/io.hpp"
#include "nba/solvers.hpp"

using nba::GenSpec;
using nba::Instance;
using nba::Rat;

TEST_CASE("identical specs generate byte-identical documents for every kind") {
  for (auto kind : {GenSpec::Kind::Generic, GenSpec::Kind::Cdn, GenSpec::Kind::Lvdn,
                    GenSpec::Kind::Rtcn, GenSpec::Kind::CloudWan}) {
    GenSpec spec;
    spec.kind = kind;
    spec.seed = 20260102;
    spec.node_count = 4;
    spec.sample_count = 3;
    spec.customers_per_slot = 2;
    spec.max_sources = 2;
    spec.max_dests = 2;
    std::string a = nba::dump_json(nba::generate_to_json(spec));
    std::string b = nba::dump_json(nba::generate_to_json(spec));
    CHECK(a == b);
    GenSpec other = spec;
    other.seed = spec.seed + 1;
    CHECK(nba::dump_json(nba::generate_to_json(other)) != a);
  }
}

TEST_CASE("density 100 gives the complete digraph in every slot") {
  GenSpec spec;
  spec.seed = 7;
  spec.node_count = 4;
  spec.sample_count = 2;
  spec.edge_density_pct = 100;
  Instance inst = nba::generate_instance(spec);
  for (const auto& d : inst.demands) {
    CHECK(d.edges.size() == 12);  // 4 * 3 ordered pairs
  }
}

TEST_CASE("every generated instance validates and feasible mode is solvable") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.node_count = 2 + static_cast<int>(seed % 3);
    spec.sample_count = 1 + static_cast<int>(seed % 2);
    spec.edge_density_pct = 30 + static_cast<int>(seed % 60);
    spec.max_sources = 2;
    spec.max_dests = spec.node_count - 1;
    Instance inst = nba::generate_instance(spec);  // validate() runs inside
    nba::SolveReport greedy = nba::solve_greedy(inst, seed);
    CHECK(greedy.status == nba::SolveStatus::Heuristic);
    CHECK(nba::check_feasible(inst, greedy.plan).empty());
  }
}

TEST_CASE("dest reachability is repaired even at low density") {
  for (std::uint64_t seed = 50; seed <= 70; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.node_count = 5;
    spec.sample_count = 2;
    spec.edge_density_pct = 10;
    spec.max_dests = 3;
    Instance inst = nba::generate_instance(spec);
    for (const auto& d : inst.demands) {
      for (const auto& sd : d.sources) {
        std::set<nba::NodeId> reach = nba::detail::reachable_from(d.edges, sd.source);
        for (nba::NodeId dst : sd.dests) CHECK(reach.count(dst) == 1);
      }
    }
  }
}

TEST_CASE("bursty spikes within the free budget do not raise the optimal cost") {
  // Two-node forced topology, p = 20 (one free sample per node/direction).
  GenSpec base;
  base.node_count = 2;
  base.sample_count = 20;
  base.edge_density_pct = 100;
  base.min_dests = 1;
  base.max_dests = 1;
  base.min_weight = 2;
  base.max_weight = 2;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GenSpec flat = base, spiked = base;
    flat.seed = spiked.seed = seed;
    spiked.pattern = GenSpec::Pattern::Bursty;
    spiked.spike_count = 1;  // within the k = 1 budget
    spiked.spike_multiplier = 10;
    Instance flat_inst = nba::generate_instance(flat);
    Instance spiked_inst = nba::generate_instance(spiked);
    nba::SolveReport a = nba::solve_exact(flat_inst);
    nba::SolveReport b = nba::solve_exact(spiked_inst);
    REQUIRE(a.status == nba::SolveStatus::ProvenOptimal);
    REQUIRE(b.status == nba::SolveStatus::ProvenOptimal);
    CHECK(a.cost == b.cost);
  }
}

TEST_CASE("diurnal peaks multiply the weights in the peak window") {
  GenSpec spec;
  spec.seed = 5;
  spec.node_count = 2;
  spec.sample_count = 48;
  spec.pattern = GenSpec::Pattern::Diurnal;
  spec.peak_slots = 3;
  spec.peak_multiplier = 4;
  spec.min_weight = 1;
  spec.max_weight = 1;
  Instance inst = nba::generate_instance(spec);
  for (int t = 1; t <= 48; ++t) {
    bool peak = ((t - 1) % 24) < 3;
    for (const auto& sd : inst.demand(t).sources) {
      CHECK(sd.weight == (peak ? Rat(4) : Rat(1)));
    }
  }
}

TEST_CASE("contradictory knobs are rejected") {
  GenSpec spec;
  spec.node_count = 3;
  spec.max_dests = 3;  // |D_s| <= n - 1 = 2
  CHECK_THROWS_AS(nba::generate_instance(spec), nba::InputError);
  GenSpec bad_caps;
  bad_caps.min_cap = 5;
  bad_caps.max_cap = 0;
  CHECK_THROWS_AS(nba::generate_instance(bad_caps), nba::InputError);
}

TEST_CASE("capacity range knob produces caps inside the range") {
  GenSpec spec;
  spec.seed = 9;
  spec.node_count = 3;
  spec.min_cap = 50;
  spec.max_cap = 60;
  Instance inst = nba::generate_instance(spec);
  for (const Rat& c : inst.network.egress_cap) {
    CHECK(c >= Rat(50));
    CHECK(c <= Rat(60));
  }
}
