#pragma once

#include <algorithm>
#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nba/cost.hpp"
#include "nba/feasibility.hpp"
#include "nba/model.hpp"
#include "nba/percentile.hpp"

namespace nba {

enum class SolveStatus { ProvenOptimal, Heuristic, Infeasible };
enum class ScenarioStrategy { Exact, Greedy };

inline const char* solve_status_str(SolveStatus s) {
  switch (s) {
    case SolveStatus::ProvenOptimal: return "ProvenOptimal";
    case SolveStatus::Heuristic: return "Heuristic";
    case SolveStatus::Infeasible: return "Infeasible";
  }
  return "?";
}

struct SolveStats {
  long long plans_enumerated = 0;  // full assignments costed
  long long search_nodes = 0;      // branch-and-bound tree nodes
  long long moves_applied = 0;     // local-search moves taken
  double wall_ms = 0;
  std::vector<Rat> cost_trace;     // local search: cost after each move
};

struct SolveReport {
  AllocationPlan plan;
  Rat cost;
  SolveStatus status = SolveStatus::Infeasible;
  SolveStats stats;
};

struct SolveLimits {
  long long max_candidates_per_demand = 2'000'000;  // arborescence enumeration budget
  long long max_search_nodes = 200'000'000;          // cross-product search budget
  int workers = 1;
};

namespace detail {

struct DemandKey {
  int slot;
  NodeId source;
};

// All out-arborescences of (V, E^(t)) rooted at the source that span the
// destination set and have no other leaves (a non-destination leaf would
// break the replication rule). A source with no destinations yields exactly
// the empty allocation.
inline std::vector<std::set<Edge>> enumerate_arborescences(const Instance& instance, int t,
                                                           const SourceDemand& sd,
                                                           const SolveLimits& limits) {
  if (sd.dests.empty()) return {{}};

  const SlotDemand& d = instance.demand(t);
  std::set<NodeId> reach = reachable_from(d.edges, sd.source);
  for (NodeId dst : sd.dests) {
    if (reach.count(dst) == 0) return {};  // no covering arborescence exists
  }

  std::vector<NodeId> relays;  // optional intermediate nodes
  for (NodeId v : reach) {
    if (v != sd.source && sd.dests.count(v) == 0) relays.push_back(v);
  }
  if (relays.size() > 20) {
    throw ResourceError("arborescence enumeration: " + std::to_string(relays.size()) +
                        " candidate relay nodes exceed the supported 20");
  }

  std::vector<std::set<Edge>> out;
  long long combos_tried = 0;

  for (std::uint64_t mask = 0; mask < (1ULL << relays.size()); ++mask) {
    std::set<NodeId> members{sd.source};
    for (NodeId dst : sd.dests) members.insert(dst);
    for (size_t b = 0; b < relays.size(); ++b) {
      if (mask & (1ULL << b)) members.insert(relays[b]);
    }

    // Parent edge candidates per non-root member.
    std::vector<NodeId> ordered(members.begin(), members.end());
    ordered.erase(std::find(ordered.begin(), ordered.end(), sd.source));
    std::vector<std::vector<Edge>> parents(ordered.size());
    bool viable = true;
    for (size_t i = 0; i < ordered.size(); ++i) {
      for (const Edge& e : d.edges) {
        if (e.head == ordered[i] && members.count(e.tail) > 0) parents[i].push_back(e);
      }
      if (parents[i].empty()) {
        viable = false;
        break;
      }
    }
    if (!viable) continue;

    std::set<Edge> chosen;
    auto descend = [&](auto&& self, size_t depth) -> void {
      if (depth == ordered.size()) {
        if (++combos_tried > limits.max_candidates_per_demand) {
          throw ResourceError("arborescence enumeration exceeded " +
                              std::to_string(limits.max_candidates_per_demand) +
                              " combinations for slot " + std::to_string(t) + " source " +
                              std::to_string(sd.source));
        }
        // In-degrees are exactly one by construction, so the choice is an
        // arborescence iff every member is reachable from the root. Leaves
        // must be destinations.
        std::set<NodeId> r = reachable_from(chosen, sd.source);
        if (r.size() != members.size()) return;
        Degrees deg = degrees(chosen);
        for (NodeId v : members) {
          if (v != sd.source && deg.outdeg(v) == 0 && sd.dests.count(v) == 0) return;
        }
        if (instance.rules.source_single_out && deg.outdeg(sd.source) != 1) return;
        out.push_back(chosen);
        return;
      }
      for (const Edge& e : parents[depth]) {
        chosen.insert(e);
        self(self, depth + 1);
        chosen.erase(e);
      }
    };
    descend(descend, 0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct LoadState {
  // [node-1][slot-1]
  std::vector<std::vector<Rat>> egress, ingress;

  explicit LoadState(const Instance& instance)
      : egress(static_cast<size_t>(instance.network.node_count),
               std::vector<Rat>(static_cast<size_t>(instance.billing.sample_count), Rat(0))),
        ingress(egress) {}

  bool apply(const Instance& instance, int t, const Rat& w, const std::set<Edge>& edges,
             bool check_caps) {
    if (check_caps) {
      for (const Edge& e : edges) {
        if (egress[static_cast<size_t>(e.tail - 1)][static_cast<size_t>(t - 1)] + w >
            instance.network.egress_cap[static_cast<size_t>(e.tail - 1)]) {
          return false;
        }
        if (ingress[static_cast<size_t>(e.head - 1)][static_cast<size_t>(t - 1)] + w >
            instance.network.ingress_cap[static_cast<size_t>(e.head - 1)]) {
          return false;
        }
      }
      // Re-check cumulatively; several edges of one tree can share a node.
      std::map<NodeId, Rat> out_add, in_add;
      for (const Edge& e : edges) {
        out_add[e.tail] += w;
        in_add[e.head] += w;
      }
      for (const auto& [v, add] : out_add) {
        if (egress[static_cast<size_t>(v - 1)][static_cast<size_t>(t - 1)] + add >
            instance.network.egress_cap[static_cast<size_t>(v - 1)]) {
          return false;
        }
      }
      for (const auto& [v, add] : in_add) {
        if (ingress[static_cast<size_t>(v - 1)][static_cast<size_t>(t - 1)] + add >
            instance.network.ingress_cap[static_cast<size_t>(v - 1)]) {
          return false;
        }
      }
    }
    for (const Edge& e : edges) {
      egress[static_cast<size_t>(e.tail - 1)][static_cast<size_t>(t - 1)] += w;
      ingress[static_cast<size_t>(e.head - 1)][static_cast<size_t>(t - 1)] += w;
    }
    return true;
  }

  void revert(int t, const Rat& w, const std::set<Edge>& edges) {
    for (const Edge& e : edges) {
      egress[static_cast<size_t>(e.tail - 1)][static_cast<size_t>(t - 1)] -= w;
      ingress[static_cast<size_t>(e.head - 1)][static_cast<size_t>(t - 1)] -= w;
    }
  }

  // Cost of the loads accumulated so far. Loads only grow as demands are
  // assigned and the billed percentile is monotone, so this is an admissible
  // lower bound for every completion.
  Rat cost(const Instance& instance) const {
    Rat total(0);
    for (NodeId i = 1; i <= instance.network.node_count; ++i) {
      if (!instance.rules.bills(i)) continue;
      Rat v = q_percentile(egress[static_cast<size_t>(i - 1)], instance.billing);
      if (!instance.rules.egress_only) {
        Rat in = q_percentile(ingress[static_cast<size_t>(i - 1)], instance.billing);
        if (in > v) v = in;
      }
      total += instance.network.unit_price[static_cast<size_t>(i - 1)] * v;
    }
    return total;
  }
};

struct ExactSearch {
  ExactSearch(const Instance& inst, const std::vector<DemandKey>& ks,
              const std::vector<std::vector<std::set<Edge>>>& cands, const SolveLimits& lims)
      : instance(inst), keys(ks), candidates(cands), limits(lims) {}

  const Instance& instance;
  const std::vector<DemandKey>& keys;
  const std::vector<std::vector<std::set<Edge>>>& candidates;
  const SolveLimits& limits;

  std::mutex best_mutex;
  std::optional<Rat> best_cost;
  std::vector<size_t> best_choice;
  long long search_nodes = 0;
  long long plans_enumerated = 0;

  void dfs(size_t depth, LoadState& loads, std::vector<size_t>& choice, long long& nodes,
           long long& leaves) {
    if (++nodes > limits.max_search_nodes) {
      throw ResourceError("exact search exceeded " + std::to_string(limits.max_search_nodes) +
                          " nodes (visited " + std::to_string(nodes) + ")");
    }
    if (depth == keys.size()) {
      ++leaves;
      Rat c = loads.cost(instance);
      std::lock_guard<std::mutex> lock(best_mutex);
      if (!best_cost || c < *best_cost) {
        best_cost = c;
        best_choice = choice;
      }
      return;
    }
    const DemandKey& key = keys[depth];
    const Rat& w = instance.demand(key.slot).find_source(key.source)->weight;
    for (size_t i = 0; i < candidates[depth].size(); ++i) {
      const std::set<Edge>& edges = candidates[depth][i];
      if (!loads.apply(instance, key.slot, w, edges, /*check_caps=*/true)) continue;
      bool prune = false;
      {
        Rat lb = loads.cost(instance);
        std::lock_guard<std::mutex> lock(best_mutex);
        prune = best_cost && lb >= *best_cost;
      }
      if (!prune) {
        choice[depth] = i;
        dfs(depth + 1, loads, choice, nodes, leaves);
      }
      loads.revert(key.slot, w, edges);
    }
  }
};

}  // namespace detail

// Exhaustive optimizer for desk-scale instances. Per (slot, source) it
// enumerates covering out-arborescences (optimal allocations are directed
// trees; the structure-agnostic oracle in the test suite guards this
// restriction) and then branch-and-bounds over the cross product, which is
// where the percentile coupling across slots and sources lives.
inline SolveReport solve_exact(const Instance& instance, const SolveLimits& limits = {}) {
  auto started = std::chrono::steady_clock::now();
  instance.validate();

  std::vector<detail::DemandKey> keys;
  std::vector<std::vector<std::set<Edge>>> candidates;
  bool infeasible = false;
  for (int t = 1; t <= instance.billing.sample_count && !infeasible; ++t) {
    for (const auto& sd : instance.demand(t).sources) {
      keys.push_back({t, sd.source});
      candidates.push_back(detail::enumerate_arborescences(instance, t, sd, limits));
      if (candidates.back().empty()) infeasible = true;
    }
  }

  SolveReport report;
  if (infeasible) {
    report.status = SolveStatus::Infeasible;
    report.cost = Rat(0);
    report.stats.wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    return report;
  }

  // Cheap-first ordering gives the search a good incumbent early.
  for (size_t d = 0; d < keys.size(); ++d) {
    const Rat& w = instance.demand(keys[d].slot).find_source(keys[d].source)->weight;
    std::vector<std::pair<Rat, size_t>> order;
    for (size_t i = 0; i < candidates[d].size(); ++i) {
      detail::LoadState solo(instance);
      solo.apply(instance, keys[d].slot, w, candidates[d][i], false);
      order.push_back({solo.cost(instance), i});
    }
    std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return candidates[d][a.second] < candidates[d][b.second];
    });
    std::vector<std::set<Edge>> sorted;
    sorted.reserve(candidates[d].size());
    for (const auto& [cost, i] : order) sorted.push_back(std::move(candidates[d][i]));
    candidates[d] = std::move(sorted);
  }

  detail::ExactSearch search(instance, keys, candidates, limits);
  int workers = std::max(1, limits.workers);
  if (workers == 1 || keys.empty() || candidates[0].size() <= 1) {
    detail::LoadState loads(instance);
    std::vector<size_t> choice(keys.size(), 0);
    search.dfs(0, loads, choice, search.search_nodes, search.plans_enumerated);
  } else {
    // Split the first level across workers; the optimum value is the min of
    // mins, so it is schedule independent even though the incumbent plan for
    // tied optima is not.
    std::vector<std::thread> threads;
    std::vector<long long> nodes(static_cast<size_t>(workers), 0);
    std::vector<long long> leaves(static_cast<size_t>(workers), 0);
    std::mutex error_mutex;
    std::optional<std::string> error;
    for (int wk = 0; wk < workers; ++wk) {
      threads.emplace_back([&, wk]() {
        try {
          detail::LoadState loads(instance);
          std::vector<size_t> choice(keys.size(), 0);
          const detail::DemandKey& key = keys[0];
          const Rat& w = instance.demand(key.slot).find_source(key.source)->weight;
          for (size_t i = static_cast<size_t>(wk); i < candidates[0].size();
               i += static_cast<size_t>(workers)) {
            const std::set<Edge>& edges = candidates[0][i];
            if (!loads.apply(instance, key.slot, w, edges, true)) continue;
            choice[0] = i;
            search.dfs(1, loads, choice, nodes[static_cast<size_t>(wk)],
                       leaves[static_cast<size_t>(wk)]);
            loads.revert(key.slot, w, edges);
          }
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = e.what();
        }
      });
    }
    for (auto& th : threads) th.join();
    if (error) throw ResourceError(*error);
    for (int wk = 0; wk < workers; ++wk) {
      search.search_nodes += nodes[static_cast<size_t>(wk)];
      search.plans_enumerated += leaves[static_cast<size_t>(wk)];
    }
  }

  report.stats.search_nodes = search.search_nodes;
  report.stats.plans_enumerated = search.plans_enumerated;
  if (!search.best_cost) {
    report.status = SolveStatus::Infeasible;  // capacities admit no combination
    report.cost = Rat(0);
  } else {
    for (size_t d = 0; d < keys.size(); ++d) {
      report.plan.at(keys[d].slot, keys[d].source) = candidates[d][search.best_choice[d]];
    }
    report.status = SolveStatus::ProvenOptimal;
    report.cost = total_cost(instance, report.plan);  // independent recomputation
  }
  report.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

// Percentile-aware construction heuristic. Slots in order, sources by
// descending weight; each (slot, source) grows a tree by cheapest
// attachment, where an edge's price is the exact marginal billed cost given
// everything allocated so far (free slots included, via the incremental
// trackers). The seed is accepted for interface stability; the policy is
// fully deterministic and does not consume randomness.
inline SolveReport solve_greedy(const Instance& instance, std::uint64_t /*seed*/ = 0) {
  auto started = std::chrono::steady_clock::now();
  instance.validate();

  int n = instance.network.node_count;
  int p = instance.billing.sample_count;
  int k = instance.billing.discard_count();
  std::vector<PercentileTracker> out_track, in_track;
  for (int i = 0; i < n; ++i) {
    out_track.emplace_back(p, k);
    in_track.emplace_back(p, k);
  }

  auto node_billed = [&](NodeId i) {
    Rat v = out_track[static_cast<size_t>(i - 1)].billed();
    if (!instance.rules.egress_only) {
      Rat in = in_track[static_cast<size_t>(i - 1)].billed();
      if (in > v) v = in;
    }
    return v;
  };
  auto node_billed_after = [&](NodeId i, int t, const Rat& w, bool as_tail) {
    Rat v = as_tail ? out_track[static_cast<size_t>(i - 1)].billed_if_added(t, w)
                    : out_track[static_cast<size_t>(i - 1)].billed();
    if (!instance.rules.egress_only) {
      Rat in = as_tail ? in_track[static_cast<size_t>(i - 1)].billed()
                       : in_track[static_cast<size_t>(i - 1)].billed_if_added(t, w);
      if (in > v) v = in;
    }
    return v;
  };

  SolveReport report;
  report.status = SolveStatus::Heuristic;

  for (int t = 1; t <= p; ++t) {
    const SlotDemand& d = instance.demand(t);
    std::vector<const SourceDemand*> order;
    for (const auto& sd : d.sources) order.push_back(&sd);
    std::stable_sort(order.begin(), order.end(), [](const SourceDemand* a, const SourceDemand* b) {
      if (a->weight != b->weight) return a->weight > b->weight;
      return a->source < b->source;
    });

    for (const SourceDemand* sd : order) {
      std::set<Edge>& chosen = report.plan.at(t, sd->source);
      std::set<NodeId> tree{sd->source};
      size_t covered = 0;
      for (NodeId dst : sd->dests) {
        if (tree.count(dst)) ++covered;
      }
      while (covered < sd->dests.size()) {
        const Edge* best = nullptr;
        Rat best_delta;
        for (const Edge& e : d.edges) {
          if (tree.count(e.tail) == 0 || tree.count(e.head) != 0) continue;
          if (instance.rules.source_single_out && e.tail == sd->source) {
            detail::Degrees deg = detail::degrees(chosen);
            if (deg.outdeg(sd->source) >= 1) continue;
          }
          // Capacity guard.
          if (out_track[static_cast<size_t>(e.tail - 1)].slot(t) + sd->weight >
              instance.network.egress_cap[static_cast<size_t>(e.tail - 1)]) {
            continue;
          }
          if (in_track[static_cast<size_t>(e.head - 1)].slot(t) + sd->weight >
              instance.network.ingress_cap[static_cast<size_t>(e.head - 1)]) {
            continue;
          }
          Rat delta(0);
          if (instance.rules.bills(e.tail)) {
            delta += instance.network.unit_price[static_cast<size_t>(e.tail - 1)] *
                     (node_billed_after(e.tail, t, sd->weight, true) - node_billed(e.tail));
          }
          if (instance.rules.bills(e.head)) {
            delta += instance.network.unit_price[static_cast<size_t>(e.head - 1)] *
                     (node_billed_after(e.head, t, sd->weight, false) - node_billed(e.head));
          }
          if (!best || delta < best_delta || (delta == best_delta && e < *best)) {
            best = &e;
            best_delta = delta;
          }
        }
        if (!best) {
          report.status = SolveStatus::Infeasible;
          report.plan = AllocationPlan{};
          report.cost = Rat(0);
          report.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - started)
                                     .count();
          return report;
        }
        chosen.insert(*best);
        tree.insert(best->head);
        out_track[static_cast<size_t>(best->tail - 1)].add(t, sd->weight);
        in_track[static_cast<size_t>(best->head - 1)].add(t, sd->weight);
        if (sd->dests.count(best->head)) ++covered;
      }
      // Attachment may have grown branches that never reached a destination.
      for (bool changed = true; changed;) {
        changed = false;
        detail::Degrees deg = detail::degrees(chosen);
        for (auto it = chosen.begin(); it != chosen.end();) {
          if (sd->dests.count(it->head) == 0 && deg.outdeg(it->head) == 0) {
            out_track[static_cast<size_t>(it->tail - 1)].add(t, -sd->weight);
            in_track[static_cast<size_t>(it->head - 1)].add(t, -sd->weight);
            it = chosen.erase(it);
            changed = true;
          } else {
            ++it;
          }
        }
      }
    }
  }

  report.cost = total_cost(instance, report.plan);
  report.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

struct LocalSearchBudget {
  long long max_moves = 10'000;
};

namespace detail {

// Real deliverability: every destination reachable from its source within
// the chosen edge set, per (slot, source). The constraint system alone
// cannot see a self-feeding cycle, so moves validate reachability too.
inline bool plan_delivers(const Instance& instance, const AllocationPlan& plan) {
  for (int t = 1; t <= instance.billing.sample_count; ++t) {
    for (const auto& sd : instance.demand(t).sources) {
      static const std::set<Edge> kEmpty;
      const std::set<Edge>* es = plan.find(t, sd.source);
      if (!covers_all_dests(es ? *es : kEmpty, sd.source, sd.dests)) return false;
    }
  }
  return true;
}

}  // namespace detail

// First-improvement hill climbing over three move families: the in-edge
// deletion from the pruning argument, subtree reattachment under a different
// parent, and peak-slot rerouting (retarget the edges of the slot a node is
// currently billed for). Cost is non-increasing move to move; the result is
// pruned before it is returned.
inline SolveReport improve_local(const Instance& instance, const AllocationPlan& start,
                                 const LocalSearchBudget& budget = {}) {
  auto started = std::chrono::steady_clock::now();
  {
    std::vector<Violation> violations = check_feasible(instance, start);
    if (!violations.empty()) {
      std::string msg = "improve_local requires a feasible plan; violations:";
      for (const auto& v : violations) msg += "\n  " + v.str();
      throw PreconditionError(msg);
    }
  }

  AllocationPlan plan = start;
  Rat cost = total_cost(instance, plan);
  SolveReport report;
  report.stats.cost_trace.push_back(cost);

  auto try_accept = [&](AllocationPlan&& candidate) {
    if (!check_feasible(instance, candidate).empty()) return false;
    if (!detail::plan_delivers(instance, candidate)) return false;
    Rat c = total_cost(instance, candidate);
    if (c >= cost) return false;
    plan = std::move(candidate);
    cost = c;
    ++report.stats.moves_applied;
    report.stats.cost_trace.push_back(cost);
    return true;
  };

  bool improved = true;
  while (improved && report.stats.moves_applied < budget.max_moves) {
    improved = false;

    // m1: delete one in-edge of an over-fed node.
    for (const auto& [t, per_source] : plan.edges) {
      for (const auto& [s, edges] : per_source) {
        detail::Degrees deg = detail::degrees(edges);
        for (const Edge& e : edges) {
          if (deg.indeg(e.head) < 2) continue;
          AllocationPlan candidate = plan;
          candidate.at(t, s).erase(e);
          if (try_accept(std::move(candidate))) {
            improved = true;
            break;
          }
        }
        if (improved) break;
      }
      if (improved) break;
    }
    if (improved) continue;

    // m2: reattach a node under a different parent edge.
    for (const auto& [t, per_source] : plan.edges) {
      const SlotDemand& d = instance.demand(t);
      for (const auto& [s, edges] : per_source) {
        for (const Edge& old_edge : edges) {
          for (const Edge& alt : d.edges) {
            if (alt.head != old_edge.head || alt.tail == old_edge.tail) continue;
            AllocationPlan candidate = plan;
            auto& set = candidate.at(t, s);
            set.erase(old_edge);
            set.insert(alt);
            if (try_accept(std::move(candidate))) {
              improved = true;
              break;
            }
          }
          if (improved) break;
        }
        if (improved) break;
      }
      if (improved) break;
    }
    if (improved) continue;

    // m3: reroute the slot a node is currently billed for, freeing that slot.
    BandwidthSeries series = bandwidth_series(instance, plan);
    for (NodeId i = 1; i <= instance.network.node_count && !improved; ++i) {
      if (!instance.rules.bills(i)) continue;
      Rat billed = node_billed_value(instance, series, i);
      if (billed == Rat(0)) continue;
      int peak_slot = 0;
      for (int t = 1; t <= instance.billing.sample_count; ++t) {
        const Rat& out = series.egress[static_cast<size_t>(i - 1)][static_cast<size_t>(t - 1)];
        const Rat& in = series.ingress[static_cast<size_t>(i - 1)][static_cast<size_t>(t - 1)];
        Rat v = instance.rules.egress_only ? out : (out > in ? out : in);
        if (v == billed) {
          peak_slot = t;
          break;
        }
      }
      if (peak_slot == 0) continue;
      const SlotDemand& d = instance.demand(peak_slot);
      auto slot_it = plan.edges.find(peak_slot);
      if (slot_it == plan.edges.end()) continue;
      for (const auto& [s, edges] : slot_it->second) {
        for (const Edge& old_edge : edges) {
          if (old_edge.tail != i && old_edge.head != i) continue;
          for (const Edge& alt : d.edges) {
            if (alt.head != old_edge.head || alt.tail == old_edge.tail) continue;
            AllocationPlan candidate = plan;
            auto& set = candidate.at(peak_slot, s);
            set.erase(old_edge);
            set.insert(alt);
            if (try_accept(std::move(candidate))) {
              improved = true;
              break;
            }
          }
          if (improved) break;
        }
        if (improved) break;
      }
    }
  }

  report.plan = prune_plan(instance, plan);
  report.cost = total_cost(instance, report.plan);
  if (report.cost != report.stats.cost_trace.back()) {
    report.stats.cost_trace.push_back(report.cost);
  }
  report.status = SolveStatus::Heuristic;
  report.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

}  // namespace nba
