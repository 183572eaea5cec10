#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "nba/feasibility.hpp"
#include "nba/model.hpp"
#include "nba/rng.hpp"
#include "nba/scenarios/cdn.hpp"
#include "nba/scenarios/cloudwan.hpp"
#include "nba/scenarios/lvdn.hpp"
#include "nba/scenarios/rtcn.hpp"

namespace nba {

// Seeded synthetic instances. Identical specs generate byte-identical
// output: every draw goes through labeled SplitMix64 substreams, so adding a
// knob never shifts unrelated draws.
struct GenSpec {
  enum class Kind { Generic, Cdn, Lvdn, Rtcn, CloudWan };
  enum class Pattern { Uniform, Diurnal, Bursty };

  std::uint64_t seed = 1;
  Kind kind = Kind::Generic;

  int node_count = 3;       // nodes / servers / PoPs
  int sample_count = 1;     // p
  Rat percentile = Rat(19, 20);
  int edge_density_pct = 100;

  int min_sources = 1, max_sources = 1;  // |S^(t)| range
  int min_dests = 1, max_dests = 1;      // |D_s^(t)| range

  Pattern pattern = Pattern::Uniform;
  int peak_slots = 0;            // diurnal: leading slots of each day
  long long peak_multiplier = 2;
  int spike_count = 0;           // bursty: slots at 10x
  long long spike_multiplier = 10;

  long long min_weight = 1, max_weight = 4;
  long long min_price = 1, max_price = 3;
  long long min_cap = 0, max_cap = 0;  // 0,0: derive non-binding capacities

  bool ensure_feasible = true;

  int customers_per_slot = 2;  // cdn customers / lvdn viewers pool / cwan clients
  int group_count = 1;         // rtcn
  int group_size = 2;          // rtcn
  bool allow_group_overlap = false;

  void validate() const {
    if (node_count < 1) throw InputError("genspec: node_count must be positive");
    if (sample_count < 1) throw InputError("genspec: sample_count must be positive");
    if (edge_density_pct < 0 || edge_density_pct > 100) {
      throw InputError("genspec: edge_density_pct must lie in 0..100");
    }
    if (min_sources < 0 || max_sources < min_sources) {
      throw InputError("genspec: bad source count range");
    }
    if (min_dests < 0 || max_dests < min_dests) throw InputError("genspec: bad dest range");
    if (kind == Kind::Generic && max_dests > node_count - 1) {
      throw InputError("genspec: |D_s| can be at most n-1");
    }
    if (kind == Kind::Generic && max_sources > node_count) {
      throw InputError("genspec: |S| can be at most n");
    }
    if (min_weight < 1 || max_weight < min_weight) throw InputError("genspec: bad weight range");
    if (min_price < 1 || max_price < min_price) throw InputError("genspec: bad price range");
    if ((min_cap == 0) != (max_cap == 0) || max_cap < min_cap) {
      throw InputError("genspec: bad capacity range");
    }
    if (kind == Kind::Rtcn && group_size < 2) {
      throw InputError("genspec: rtcn groups need at least two members");
    }
  }
};

namespace detail {

// Weight multiplier of a slot under the configured demand pattern.
inline long long pattern_multiplier(const GenSpec& spec, int t,
                                    const std::set<int>& spike_slots) {
  switch (spec.pattern) {
    case GenSpec::Pattern::Uniform: return 1;
    case GenSpec::Pattern::Diurnal: {
      int day = std::min(spec.sample_count, 24);
      return ((t - 1) % day) < spec.peak_slots ? spec.peak_multiplier : 1;
    }
    case GenSpec::Pattern::Bursty: return spike_slots.count(t) ? spec.spike_multiplier : 1;
  }
  return 1;
}

inline std::set<int> pick_spike_slots(const GenSpec& spec, SplitMix64& rng) {
  std::set<int> out;
  int want = std::min(spec.spike_count, spec.sample_count);
  while (static_cast<int>(out.size()) < want) {
    out.insert(static_cast<int>(rng.range(1, spec.sample_count)));
  }
  return out;
}

inline std::vector<NodeId> sample_distinct(SplitMix64& rng, int count,
                                           const std::vector<NodeId>& pool) {
  std::vector<NodeId> rest = pool;
  std::vector<NodeId> out;
  for (int i = 0; i < count && !rest.empty(); ++i) {
    size_t at = static_cast<size_t>(rng.below(rest.size()));
    out.push_back(rest[at]);
    rest.erase(rest.begin() + static_cast<long>(at));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline Instance generate_instance(const GenSpec& spec) {
  spec.validate();
  if (spec.kind != GenSpec::Kind::Generic) {
    throw InputError("generate_instance: spec kind is not generic");
  }
  SplitMix64 root(spec.seed);
  SplitMix64 price_rng = root.split(1);
  SplitMix64 edge_rng = root.split(2);
  SplitMix64 demand_rng = root.split(3);
  SplitMix64 pattern_rng = root.split(4);
  SplitMix64 cap_rng = root.split(5);

  Instance inst;
  int n = spec.node_count;
  inst.network.node_count = n;
  for (int i = 0; i < n; ++i) {
    inst.network.unit_price.push_back(Rat(price_rng.range(spec.min_price, spec.max_price)));
  }
  inst.billing.sample_count = spec.sample_count;
  inst.billing.percentile = spec.percentile;

  std::vector<NodeId> all_nodes;
  for (NodeId v = 1; v <= n; ++v) all_nodes.push_back(v);
  std::set<int> spikes = detail::pick_spike_slots(spec, pattern_rng);

  Rat max_slot_weight(0);
  for (int t = 1; t <= spec.sample_count; ++t) {
    SlotDemand d;
    d.slot = t;
    for (NodeId i = 1; i <= n; ++i) {
      for (NodeId j = 1; j <= n; ++j) {
        if (i == j) continue;
        if (edge_rng.chance(static_cast<std::uint64_t>(spec.edge_density_pct), 100)) {
          d.edges.insert({i, j});
        }
      }
    }

    int source_count = static_cast<int>(demand_rng.range(spec.min_sources, spec.max_sources));
    std::vector<NodeId> sources = detail::sample_distinct(demand_rng, source_count, all_nodes);
    Rat slot_weight(0);
    for (NodeId s : sources) {
      SourceDemand sd;
      sd.source = s;
      std::vector<NodeId> others;
      for (NodeId v : all_nodes) {
        if (v != s) others.push_back(v);
      }
      int dest_count = static_cast<int>(demand_rng.range(spec.min_dests, spec.max_dests));
      for (NodeId v : detail::sample_distinct(demand_rng, dest_count, others)) {
        sd.dests.insert(v);
      }
      long long base = demand_rng.range(spec.min_weight, spec.max_weight);
      sd.weight = Rat(base * detail::pattern_multiplier(spec, t, spikes));
      slot_weight += sd.weight;
      d.sources.push_back(std::move(sd));
    }
    if (slot_weight > max_slot_weight) max_slot_weight = slot_weight;

    if (spec.ensure_feasible) {
      // Reachability repair: every destination must be coverable in E^(t).
      for (auto& sd : d.sources) {
        for (;;) {
          std::set<NodeId> reach = detail::reachable_from(d.edges, sd.source);
          NodeId missing = 0;
          for (NodeId dst : sd.dests) {
            if (reach.count(dst) == 0) {
              missing = dst;
              break;
            }
          }
          if (missing == 0) break;
          std::vector<NodeId> reachable(reach.begin(), reach.end());
          NodeId from = reachable[static_cast<size_t>(edge_rng.below(reachable.size()))];
          if (from == missing) from = sd.source;
          d.edges.insert({from, missing});
        }
      }
    }
    for (const Edge& e : d.edges) inst.network.base_edges.insert(e);
    inst.demands.push_back(std::move(d));
  }

  for (int i = 0; i < n; ++i) {
    Rat cap;
    if (spec.min_cap == 0) {
      // Non-binding: no tree can load a node beyond (n-1) * total slot weight.
      cap = max_slot_weight * Rat(n) + Rat(1);
      (void)cap_rng;
    } else {
      cap = Rat(cap_rng.range(spec.min_cap, spec.max_cap));
    }
    inst.network.egress_cap.push_back(cap);
    inst.network.ingress_cap.push_back(cap);
  }

  inst.validate();
  return inst;
}

inline CdnInstance generate_cdn(const GenSpec& spec) {
  spec.validate();
  SplitMix64 root(spec.seed);
  SplitMix64 tree_rng = root.split(11);
  SplitMix64 price_rng = root.split(12);
  SplitMix64 demand_rng = root.split(13);
  SplitMix64 miss_rng = root.split(14);
  SplitMix64 pattern_rng = root.split(15);

  CdnInstance cdn;
  cdn.server_count = std::max(2, spec.node_count);
  cdn.root = 1;
  cdn.parent.push_back(0);
  for (NodeId v = 2; v <= cdn.server_count; ++v) {
    cdn.parent.push_back(static_cast<NodeId>(tree_rng.range(1, v - 1)));
  }
  Rat total_demand(0);
  for (int i = 0; i < cdn.server_count; ++i) {
    cdn.unit_price.push_back(Rat(price_rng.range(spec.min_price, spec.max_price)));
  }
  cdn.billing.sample_count = spec.sample_count;
  cdn.billing.percentile = spec.percentile;

  std::vector<NodeId> leaves = cdn.edge_servers();
  std::set<int> spikes = detail::pick_spike_slots(spec, pattern_rng);
  for (int t = 1; t <= spec.sample_count; ++t) {
    CdnInstance::Slot slot;
    slot.slot = t;
    for (int i = 0; i < cdn.server_count; ++i) {
      slot.miss.push_back(Rat(miss_rng.range(0, 100), 100));
    }
    for (int c = 0; c < spec.customers_per_slot; ++c) {
      CdnInstance::Customer cu;
      cu.id = cdn.server_count + c + 1;
      long long base = demand_rng.range(spec.min_weight, spec.max_weight);
      cu.weight = Rat(base * detail::pattern_multiplier(spec, t, spikes));
      total_demand += cu.weight;
      for (NodeId leaf : leaves) {
        if (demand_rng.chance(static_cast<std::uint64_t>(spec.edge_density_pct), 100)) {
          cu.eligible.insert(leaf);
        }
      }
      if (cu.eligible.empty()) {
        cu.eligible.insert(leaves[static_cast<size_t>(demand_rng.below(leaves.size()))]);
      }
      slot.customers.push_back(std::move(cu));
    }
    cdn.slots.push_back(std::move(slot));
  }
  for (int i = 0; i < cdn.server_count; ++i) {
    cdn.egress_cap.push_back(total_demand + Rat(1));
  }
  cdn.validate();
  return cdn;
}

inline LvdnInstance generate_lvdn(const GenSpec& spec) {
  spec.validate();
  SplitMix64 root(spec.seed);
  SplitMix64 price_rng = root.split(21);
  SplitMix64 demand_rng = root.split(22);
  SplitMix64 edge_rng = root.split(23);
  SplitMix64 pattern_rng = root.split(24);

  LvdnInstance lvdn;
  lvdn.server_count = spec.node_count;
  Rat total_weight(0);
  for (int i = 0; i < lvdn.server_count; ++i) {
    lvdn.unit_price.push_back(Rat(price_rng.range(spec.min_price, spec.max_price)));
  }
  lvdn.billing.sample_count = spec.sample_count;
  lvdn.billing.percentile = spec.percentile;

  std::set<int> spikes = detail::pick_spike_slots(spec, pattern_rng);
  for (int t = 1; t <= spec.sample_count; ++t) {
    LvdnInstance::Slot slot;
    slot.slot = t;
    int producer_count =
        std::max<long long>(1, demand_rng.range(spec.min_sources, spec.max_sources));
    int viewer_count = std::max(1, spec.customers_per_slot);
    NodeId first_producer = lvdn.server_count + 1;
    NodeId first_viewer = first_producer + producer_count;

    // Inner-domain mesh between servers.
    for (NodeId a = 1; a <= lvdn.server_count; ++a) {
      for (NodeId b = 1; b <= lvdn.server_count; ++b) {
        if (a != b) slot.edges.insert({a, b});
      }
    }
    std::vector<NodeId> viewer_pool;
    for (int v = 0; v < viewer_count; ++v) viewer_pool.push_back(first_viewer + v);

    for (int pi = 0; pi < producer_count; ++pi) {
      LvdnInstance::Demand d;
      d.producer = first_producer + pi;
      long long base = demand_rng.range(spec.min_weight, spec.max_weight);
      d.weight = Rat(base * detail::pattern_multiplier(spec, t, spikes));
      total_weight += d.weight;
      int want = static_cast<int>(demand_rng.range(spec.min_dests, spec.max_dests));
      want = std::max(1, std::min<int>(want, viewer_count));
      for (NodeId v : detail::sample_distinct(demand_rng, want, viewer_pool)) d.viewers.insert(v);

      // Ingest eligibility: producer -> servers.
      bool any = false;
      for (NodeId srv = 1; srv <= lvdn.server_count; ++srv) {
        if (edge_rng.chance(static_cast<std::uint64_t>(spec.edge_density_pct), 100)) {
          slot.edges.insert({d.producer, srv});
          any = true;
        }
      }
      if (!any) {
        slot.edges.insert(
            {d.producer, static_cast<NodeId>(edge_rng.range(1, lvdn.server_count))});
      }
      slot.producers.push_back(std::move(d));
    }
    // Delivery eligibility: servers -> viewers, at least one in-edge each.
    for (NodeId v : viewer_pool) {
      bool any = false;
      for (NodeId srv = 1; srv <= lvdn.server_count; ++srv) {
        if (edge_rng.chance(static_cast<std::uint64_t>(spec.edge_density_pct), 100)) {
          slot.edges.insert({srv, v});
          any = true;
        }
      }
      if (!any) {
        slot.edges.insert({static_cast<NodeId>(edge_rng.range(1, lvdn.server_count)), v});
      }
    }
    lvdn.slots.push_back(std::move(slot));
  }
  for (int i = 0; i < lvdn.server_count; ++i) {
    lvdn.egress_cap.push_back(total_weight * Rat(spec.node_count + spec.customers_per_slot) +
                              Rat(1));
  }
  lvdn.validate();
  return lvdn;
}

inline RtcnInstance generate_rtcn(const GenSpec& spec) {
  spec.validate();
  SplitMix64 root(spec.seed);
  SplitMix64 price_rng = root.split(31);
  SplitMix64 demand_rng = root.split(32);
  SplitMix64 edge_rng = root.split(33);
  SplitMix64 group_rng = root.split(34);

  RtcnInstance rtcn;
  rtcn.server_count = spec.node_count;
  Rat total_weight(0);
  for (int i = 0; i < rtcn.server_count; ++i) {
    rtcn.unit_price.push_back(Rat(price_rng.range(spec.min_price, spec.max_price)));
  }
  rtcn.billing.sample_count = spec.sample_count;
  rtcn.billing.percentile = spec.percentile;

  for (int t = 1; t <= spec.sample_count; ++t) {
    RtcnInstance::Slot slot;
    slot.slot = t;
    int participant_count = spec.allow_group_overlap
                                ? std::max(spec.group_size, spec.group_size + spec.group_count - 1)
                                : spec.group_count * spec.group_size;
    std::vector<NodeId> participants;
    for (int i = 0; i < participant_count; ++i) {
      RtcnInstance::Participant pt;
      pt.id = rtcn.server_count + i + 1;
      pt.weight = Rat(demand_rng.range(spec.min_weight, spec.max_weight));
      total_weight += pt.weight;
      participants.push_back(pt.id);
      slot.participants.push_back(pt);
    }
    if (spec.allow_group_overlap) {
      for (int g = 0; g < spec.group_count; ++g) {
        slot.groups.push_back(detail::sample_distinct(group_rng, spec.group_size, participants));
      }
    } else {
      for (int g = 0; g < spec.group_count; ++g) {
        std::vector<NodeId> group;
        for (int i = 0; i < spec.group_size; ++i) {
          group.push_back(participants[static_cast<size_t>(g * spec.group_size + i)]);
        }
        slot.groups.push_back(std::move(group));
      }
    }

    for (NodeId a = 1; a <= rtcn.server_count; ++a) {
      for (NodeId b = 1; b <= rtcn.server_count; ++b) {
        if (a != b) slot.edges.insert({a, b});
      }
    }
    for (NodeId pt : participants) {
      bool any_up = false, any_down = false;
      for (NodeId srv = 1; srv <= rtcn.server_count; ++srv) {
        if (edge_rng.chance(static_cast<std::uint64_t>(spec.edge_density_pct), 100)) {
          slot.edges.insert({pt, srv});
          any_up = true;
        }
        if (edge_rng.chance(static_cast<std::uint64_t>(spec.edge_density_pct), 100)) {
          slot.edges.insert({srv, pt});
          any_down = true;
        }
      }
      if (!any_up) {
        slot.edges.insert({pt, static_cast<NodeId>(edge_rng.range(1, rtcn.server_count))});
      }
      if (!any_down) {
        slot.edges.insert({static_cast<NodeId>(edge_rng.range(1, rtcn.server_count)), pt});
      }
    }
    rtcn.slots.push_back(std::move(slot));
  }
  int fanout = spec.group_count * spec.group_size * std::max(1, spec.group_size - 1) + 1;
  for (int i = 0; i < rtcn.server_count; ++i) {
    rtcn.egress_cap.push_back(total_weight * Rat(fanout) + Rat(1));
  }
  rtcn.validate();
  return rtcn;
}

inline CloudWanInstance generate_cloudwan(const GenSpec& spec) {
  spec.validate();
  SplitMix64 root(spec.seed);
  SplitMix64 price_rng = root.split(41);
  SplitMix64 demand_rng = root.split(42);
  SplitMix64 edge_rng = root.split(43);
  SplitMix64 pattern_rng = root.split(44);

  CloudWanInstance cw;
  cw.pop_count = spec.node_count;
  cw.client_count = std::max(1, spec.customers_per_slot);
  for (int i = 0; i < cw.pop_count; ++i) {
    cw.unit_price.push_back(Rat(price_rng.range(spec.min_price, spec.max_price)));
  }
  cw.billing.sample_count = spec.sample_count;
  cw.billing.percentile = spec.percentile;

  long long max_total = 0;
  std::set<int> spikes = detail::pick_spike_slots(spec, pattern_rng);
  for (int t = 1; t <= spec.sample_count; ++t) {
    CloudWanInstance::Slot slot;
    slot.slot = t;
    long long total = 0;
    for (int j = 1; j <= cw.client_count; ++j) {
      long long base = demand_rng.range(spec.min_weight, spec.max_weight);
      long long d = base * detail::pattern_multiplier(spec, t, spikes);
      slot.demand.push_back(d);
      total += d;
      NodeId cid = cw.client_id(j);
      bool any = false;
      for (int i = 1; i <= cw.pop_count; ++i) {
        if (edge_rng.chance(static_cast<std::uint64_t>(spec.edge_density_pct), 100)) {
          slot.edges.insert({i, cid});
          any = true;
        }
      }
      if (!any) slot.edges.insert({static_cast<int>(edge_rng.range(1, cw.pop_count)), cid});
    }
    max_total = std::max(max_total, total);
    cw.slots.push_back(std::move(slot));
  }
  for (int i = 0; i < cw.pop_count; ++i) {
    if (spec.min_cap == 0) {
      cw.egress_cap.push_back(max_total + 1);
    } else {
      cw.egress_cap.push_back(demand_rng.range(spec.min_cap, spec.max_cap));
    }
  }
  cw.validate();
  return cw;
}

}  // namespace nba
