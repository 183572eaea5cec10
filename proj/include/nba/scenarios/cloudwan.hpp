#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "nba/model.hpp"
#include "nba/percentile.hpp"
#include "nba/solvers.hpp"

namespace nba {

// Cloud WAN egress scheduling: PoPs serve client traffic over a bipartite
// eligibility graph; flows are nonnegative integers (an absent edge carries
// zero), demands must be met exactly, and only PoP egress is billed.
struct CloudWanInstance {
  int pop_count = 0;     // PoPs 1..m
  int client_count = 0;  // clients m+1..m+clients
  std::vector<Rat> unit_price;     // per PoP
  std::vector<long long> egress_cap;  // per PoP, integral (flows are integers)
  BillingConfig billing;

  struct Slot {
    int slot = 0;
    std::set<Edge> edges;            // E^(t), PoP -> client
    std::vector<long long> demand;   // d_j per client, nonnegative
  };
  std::vector<Slot> slots;

  NodeId client_id(int j) const { return pop_count + j; }  // j is 1-based

  void validate() const {
    if (pop_count <= 0) throw InputError("cwan: need at least one PoP");
    if (client_count <= 0) throw InputError("cwan: need at least one client");
    if (static_cast<int>(unit_price.size()) != pop_count ||
        static_cast<int>(egress_cap.size()) != pop_count) {
      throw InputError("cwan: per-PoP arrays must have one entry per PoP");
    }
    for (int i = 0; i < pop_count; ++i) {
      if (unit_price[static_cast<size_t>(i)] <= Rat(0) || egress_cap[static_cast<size_t>(i)] <= 0) {
        throw InputError("cwan: prices and capacities must be positive");
      }
    }
    billing.validate();
    if (static_cast<int>(slots.size()) != billing.sample_count) {
      throw InputError("cwan: expected one slot entry per sample");
    }
    for (int t = 1; t <= billing.sample_count; ++t) {
      const Slot& sl = slots[static_cast<size_t>(t - 1)];
      if (sl.slot != t) throw InputError("cwan: slot " + std::to_string(t) + " mislabeled");
      if (static_cast<int>(sl.demand.size()) != client_count) {
        throw InputError("cwan: slot " + std::to_string(t) + " needs one demand per client");
      }
      for (long long d : sl.demand) {
        if (d < 0) throw InputError("cwan: demands must be nonnegative");
      }
      for (const Edge& e : sl.edges) {
        if (e.tail < 1 || e.tail > pop_count || e.head <= pop_count ||
            e.head > pop_count + client_count) {
          throw InputError("cwan: edge " + edge_str(e) + " is not PoP -> client");
        }
      }
    }
  }
};

// Integer flows per slot: edge -> amount (only nonzero entries stored).
struct CloudWanFlows {
  std::map<int, std::map<Edge, long long>> flow;
};

struct CwanSolveReport {
  CloudWanFlows flows;
  Rat cost;
  SolveStatus status = SolveStatus::Infeasible;
  SolveStats stats;
};

namespace detail {

// Max-flow (BFS augmenting paths) on the tiny bipartite transport network:
// source -> PoP i with capacity load[i], PoP -> client for eligible edges,
// client j -> sink with capacity d[j]. Saturating all demands with
// sum(load) == sum(d) forces PoP egress == load exactly.
class BipartiteFill {
 public:
  BipartiteFill(const CloudWanInstance& cw, int t) : cw_(cw) {
    const auto& sl = cw.slots[static_cast<size_t>(t - 1)];
    node_count_ = 2 + cw.pop_count + cw.client_count;
    cap_.assign(static_cast<size_t>(node_count_),
                std::vector<long long>(static_cast<size_t>(node_count_), 0));
    for (const Edge& e : sl.edges) {
      cap_[static_cast<size_t>(pop_vertex(e.tail))][static_cast<size_t>(client_vertex(e.head))] =
          1LL << 60;
    }
    for (int j = 1; j <= cw.client_count; ++j) {
      cap_[static_cast<size_t>(client_vertex(cw.client_id(j)))][static_cast<size_t>(sink())] =
          sl.demand[static_cast<size_t>(j - 1)];
    }
  }

  // Attempts to push every demand with the given PoP loads; returns the
  // realized flow per edge if all demands are met.
  std::optional<std::map<Edge, long long>> fill(const std::vector<long long>& load) {
    auto cap = cap_;
    long long want = 0;
    for (int i = 1; i <= cw_.pop_count; ++i) {
      cap[static_cast<size_t>(source())][static_cast<size_t>(pop_vertex(i))] =
          load[static_cast<size_t>(i - 1)];
    }
    for (int j = 1; j <= cw_.client_count; ++j) {
      want += cap[static_cast<size_t>(client_vertex(cw_.client_id(j)))][static_cast<size_t>(sink())];
    }
    long long pushed = 0;
    while (pushed < want) {
      // BFS for an augmenting path.
      std::vector<int> prev(static_cast<size_t>(node_count_), -1);
      std::vector<int> queue{source()};
      prev[static_cast<size_t>(source())] = source();
      for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (int w = 0; w < node_count_; ++w) {
          if (prev[static_cast<size_t>(w)] == -1 && cap[static_cast<size_t>(v)][static_cast<size_t>(w)] > 0) {
            prev[static_cast<size_t>(w)] = v;
            queue.push_back(w);
          }
        }
      }
      if (prev[static_cast<size_t>(sink())] == -1) break;
      long long bottleneck = 1LL << 62;
      for (int v = sink(); v != source(); v = prev[static_cast<size_t>(v)]) {
        bottleneck = std::min(bottleneck,
                              cap[static_cast<size_t>(prev[static_cast<size_t>(v)])][static_cast<size_t>(v)]);
      }
      for (int v = sink(); v != source(); v = prev[static_cast<size_t>(v)]) {
        cap[static_cast<size_t>(prev[static_cast<size_t>(v)])][static_cast<size_t>(v)] -= bottleneck;
        cap[static_cast<size_t>(v)][static_cast<size_t>(prev[static_cast<size_t>(v)])] += bottleneck;
      }
      pushed += bottleneck;
    }
    if (pushed < want) return std::nullopt;
    std::map<Edge, long long> result;
    for (const auto& [e, base] : edge_caps()) {
      // Net flow on the forward arc is the consumed capacity.
      long long used = base - cap[static_cast<size_t>(pop_vertex(e.tail))]
                                 [static_cast<size_t>(client_vertex(e.head))];
      if (used > 0) result[e] = used;
    }
    return result;
  }

 private:
  int source() const { return 0; }
  int sink() const { return 1; }
  int pop_vertex(NodeId i) const { return 1 + i; }
  int client_vertex(NodeId id) const { return 1 + cw_.pop_count + (id - cw_.pop_count); }

  std::map<Edge, long long> edge_caps() const {
    std::map<Edge, long long> out;
    for (int i = 1; i <= cw_.pop_count; ++i) {
      for (int j = 1; j <= cw_.client_count; ++j) {
        NodeId cid = cw_.client_id(j);
        long long c = cap_[static_cast<size_t>(pop_vertex(i))][static_cast<size_t>(client_vertex(cid))];
        if (c > 0) out[{i, cid}] = c;
      }
    }
    return out;
  }

  const CloudWanInstance& cw_;
  int node_count_ = 0;
  std::vector<std::vector<long long>> cap_;
};

}  // namespace detail

// Exact and greedy Cloud-WAN solvers. The exact path enumerates per-slot PoP
// load vectors (feasibility of a slot depends only on the load vector, which
// a max-flow check certifies) and branch-and-bounds across slots on the
// billed percentile.
inline CwanSolveReport cloudwan_solve(const CloudWanInstance& cw, ScenarioStrategy strategy,
                                      const SolveLimits& limits = {}) {
  auto started = std::chrono::steady_clock::now();
  cw.validate();
  int p = cw.billing.sample_count;
  int k = cw.billing.discard_count();

  CwanSolveReport report;

  // Quick necessary check, reported with the offending slot.
  for (int t = 1; t <= p; ++t) {
    const auto& sl = cw.slots[static_cast<size_t>(t - 1)];
    long long total_demand = 0, total_cap = 0;
    for (long long d : sl.demand) total_demand += d;
    for (long long c : cw.egress_cap) total_cap += c;
    if (total_demand > total_cap) {
      report.status = SolveStatus::Infeasible;
      report.cost = Rat(0);
      report.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
      return report;
    }
  }

  if (strategy == ScenarioStrategy::Greedy) {
    std::vector<PercentileTracker> track;
    for (int i = 0; i < cw.pop_count; ++i) track.emplace_back(p, k);
    for (int t = 1; t <= p; ++t) {
      const auto& sl = cw.slots[static_cast<size_t>(t - 1)];
      std::vector<int> order;
      for (int j = 1; j <= cw.client_count; ++j) order.push_back(j);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        long long da = sl.demand[static_cast<size_t>(a - 1)];
        long long db = sl.demand[static_cast<size_t>(b - 1)];
        if (da != db) return da > db;
        return a < b;
      });
      for (int j : order) {
        long long remaining = sl.demand[static_cast<size_t>(j - 1)];
        NodeId cid = cw.client_id(j);
        while (remaining > 0) {
          // Water-fill one unit into the cheapest eligible PoP with headroom.
          int best = 0;
          Rat best_delta;
          for (int i = 1; i <= cw.pop_count; ++i) {
            if (sl.edges.count({i, cid}) == 0) continue;
            auto& tr = track[static_cast<size_t>(i - 1)];
            if (tr.slot(t) + Rat(1) > Rat(cw.egress_cap[static_cast<size_t>(i - 1)])) continue;
            Rat delta = cw.unit_price[static_cast<size_t>(i - 1)] *
                        (tr.billed_if_added(t, Rat(1)) - tr.billed());
            if (best == 0 || delta < best_delta || (delta == best_delta && i < best)) {
              best = i;
              best_delta = delta;
            }
          }
          if (best == 0) {
            report.status = SolveStatus::Infeasible;
            report.flows.flow.clear();
            report.cost = Rat(0);
            report.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                       std::chrono::steady_clock::now() - started)
                                       .count();
            return report;
          }
          track[static_cast<size_t>(best - 1)].add(t, Rat(1));
          report.flows.flow[t][{best, cid}] += 1;
          --remaining;
        }
      }
    }
    report.status = SolveStatus::Heuristic;
    Rat cost(0);
    for (int i = 1; i <= cw.pop_count; ++i) {
      cost += cw.unit_price[static_cast<size_t>(i - 1)] * track[static_cast<size_t>(i - 1)].billed();
    }
    report.cost = cost;
    report.stats.wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    return report;
  }

  // Exact: feasible load vectors per slot.
  struct SlotOption {
    std::vector<long long> load;
    std::map<Edge, long long> flow;
  };
  std::vector<std::vector<SlotOption>> per_slot(static_cast<size_t>(p));
  for (int t = 1; t <= p; ++t) {
    const auto& sl = cw.slots[static_cast<size_t>(t - 1)];
    long long total_demand = 0;
    for (long long d : sl.demand) total_demand += d;
    detail::BipartiteFill filler(cw, t);

    std::vector<long long> load(static_cast<size_t>(cw.pop_count), 0);
    long long tried = 0;
    auto rec = [&](auto&& self, int i, long long remaining) -> void {
      if (i == cw.pop_count) {
        if (remaining != 0) return;
        if (++tried > limits.max_candidates_per_demand) {
          throw ResourceError("cwan: slot " + std::to_string(t) +
                              " load enumeration exceeded " +
                              std::to_string(limits.max_candidates_per_demand));
        }
        if (auto flow = filler.fill(load)) {
          per_slot[static_cast<size_t>(t - 1)].push_back({load, std::move(*flow)});
        }
        return;
      }
      long long cap = cw.egress_cap[static_cast<size_t>(i)];
      long long hi = std::min(cap, remaining);
      for (long long v = 0; v <= hi; ++v) {
        load[static_cast<size_t>(i)] = v;
        self(self, i + 1, remaining - v);
      }
      load[static_cast<size_t>(i)] = 0;
    };
    rec(rec, 0, total_demand);
    if (per_slot[static_cast<size_t>(t - 1)].empty()) {
      report.status = SolveStatus::Infeasible;
      report.cost = Rat(0);
      report.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
      return report;
    }
  }

  std::vector<std::vector<Rat>> series(static_cast<size_t>(cw.pop_count),
                                       std::vector<Rat>(static_cast<size_t>(p), Rat(0)));
  auto partial_cost = [&]() {
    Rat total(0);
    for (int i = 1; i <= cw.pop_count; ++i) {
      total += cw.unit_price[static_cast<size_t>(i - 1)] *
               q_percentile(series[static_cast<size_t>(i - 1)], cw.billing);
    }
    return total;
  };

  std::optional<Rat> best;
  std::vector<size_t> choice(static_cast<size_t>(p), 0), best_choice(static_cast<size_t>(p), 0);
  long long nodes = 0, leaves = 0;
  auto dfs = [&](auto&& self, int t) -> void {
    if (++nodes > limits.max_search_nodes) {
      throw ResourceError("cwan: cross-slot search exceeded " +
                          std::to_string(limits.max_search_nodes) + " nodes");
    }
    if (t > p) {
      ++leaves;
      Rat c = partial_cost();
      if (!best || c < *best) {
        best = c;
        best_choice = choice;
      }
      return;
    }
    auto& cands = per_slot[static_cast<size_t>(t - 1)];
    for (size_t ci = 0; ci < cands.size(); ++ci) {
      for (int i = 1; i <= cw.pop_count; ++i) {
        series[static_cast<size_t>(i - 1)][static_cast<size_t>(t - 1)] =
            Rat(cands[ci].load[static_cast<size_t>(i - 1)]);
      }
      if (!best || partial_cost() < *best) {
        choice[static_cast<size_t>(t - 1)] = ci;
        self(self, t + 1);
      }
      for (int i = 1; i <= cw.pop_count; ++i) {
        series[static_cast<size_t>(i - 1)][static_cast<size_t>(t - 1)] = Rat(0);
      }
    }
  };
  dfs(dfs, 1);

  report.stats.search_nodes = nodes;
  report.stats.plans_enumerated = leaves;
  if (!best) {
    report.status = SolveStatus::Infeasible;
    report.cost = Rat(0);
  } else {
    report.status = SolveStatus::ProvenOptimal;
    for (int t = 1; t <= p; ++t) {
      const SlotOption& opt = per_slot[static_cast<size_t>(t - 1)][best_choice[static_cast<size_t>(t - 1)]];
      if (!opt.flow.empty()) report.flows.flow[t] = opt.flow;
    }
    report.cost = *best;
  }
  report.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

// ---- Total unimodularity ----

struct IntMatrix {
  int rows = 0, cols = 0;
  std::vector<long long> data;

  long long& at(int r, int c) { return data[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
  long long at(int r, int c) const {
    return data[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)];
  }
};

// Constraint matrix of one slot: a demand-equality row per client over its
// eligible edges, then a capacity row per PoP over its outgoing edges.
// Columns follow the sorted edge order of E^(t).
inline IntMatrix cloudwan_slot_matrix(const CloudWanInstance& cw, int t) {
  cw.validate();
  if (t < 1 || t > cw.billing.sample_count) {
    throw InputError("cwan: slot " + std::to_string(t) + " out of range");
  }
  const auto& sl = cw.slots[static_cast<size_t>(t - 1)];
  std::vector<Edge> cols(sl.edges.begin(), sl.edges.end());
  IntMatrix m;
  m.rows = cw.client_count + cw.pop_count;
  m.cols = static_cast<int>(cols.size());
  m.data.assign(static_cast<size_t>(m.rows) * static_cast<size_t>(m.cols), 0);
  for (int c = 0; c < m.cols; ++c) {
    const Edge& e = cols[static_cast<size_t>(c)];
    m.at(e.head - cw.pop_count - 1, c) = 1;              // demand row of the client
    m.at(cw.client_count + e.tail - 1, c) = 1;           // capacity row of the PoP
  }
  return m;
}

struct TuWitness {
  std::vector<int> row_index, col_index;  // 0-based into the checked matrix
  long long det = 0;
};

struct TuResult {
  bool totally_unimodular = true;
  std::optional<TuWitness> witness;
};

namespace detail {

// Bareiss fraction-free elimination: exact integer determinant.
inline long long int_determinant(std::vector<std::vector<long long>> a) {
  int n = static_cast<int>(a.size());
  if (n == 0) return 1;
  long long sign = 1, prev = 1;
  for (int col = 0; col < n - 1; ++col) {
    if (a[static_cast<size_t>(col)][static_cast<size_t>(col)] == 0) {
      int swap_row = -1;
      for (int r = col + 1; r < n; ++r) {
        if (a[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
          swap_row = r;
          break;
        }
      }
      if (swap_row == -1) return 0;
      std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(swap_row)]);
      sign = -sign;
    }
    for (int r = col + 1; r < n; ++r) {
      for (int c = col + 1; c < n; ++c) {
        a[static_cast<size_t>(r)][static_cast<size_t>(c)] =
            (a[static_cast<size_t>(r)][static_cast<size_t>(c)] * a[static_cast<size_t>(col)][static_cast<size_t>(col)] -
             a[static_cast<size_t>(r)][static_cast<size_t>(col)] * a[static_cast<size_t>(col)][static_cast<size_t>(c)]) /
            prev;
      }
      a[static_cast<size_t>(r)][static_cast<size_t>(col)] = 0;
    }
    prev = a[static_cast<size_t>(col)][static_cast<size_t>(col)];
  }
  return sign * a[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)];
}

inline void combinations(int n, int k, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  while (true) {
    if (!visit(idx)) return;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

// Exhaustively checks every square submatrix up to max_submatrix x
// max_submatrix with exact integer determinants; the first determinant
// outside {-1, 0, 1} is returned as a witness.
inline TuResult is_totally_unimodular(const IntMatrix& m, int max_submatrix,
                                      long long max_operations = 500'000'000) {
  int limit = std::min({max_submatrix, m.rows, m.cols});
  // Work estimate: combinations times k^3 elimination cost.
  long double work = 0;
  for (int kk = 1; kk <= limit; ++kk) {
    long double rc = 1, cc = 1;
    for (int i = 0; i < kk; ++i) {
      rc = rc * static_cast<long double>(m.rows - i) / static_cast<long double>(i + 1);
      cc = cc * static_cast<long double>(m.cols - i) / static_cast<long double>(i + 1);
    }
    work += rc * cc * static_cast<long double>(kk) * kk * kk;
  }
  if (work > static_cast<long double>(max_operations)) {
    throw ResourceError("tu check: ~" + std::to_string(static_cast<long long>(work)) +
                        " operations exceed the budget of " + std::to_string(max_operations));
  }

  TuResult result;
  for (int kk = 1; kk <= limit && result.totally_unimodular; ++kk) {
    detail::combinations(m.rows, kk, [&](const std::vector<int>& rows) {
      bool keep_going = true;
      detail::combinations(m.cols, kk, [&](const std::vector<int>& cols) {
        std::vector<std::vector<long long>> sub(static_cast<size_t>(kk),
                                                std::vector<long long>(static_cast<size_t>(kk)));
        for (int r = 0; r < kk; ++r) {
          for (int c = 0; c < kk; ++c) {
            sub[static_cast<size_t>(r)][static_cast<size_t>(c)] =
                m.at(rows[static_cast<size_t>(r)], cols[static_cast<size_t>(c)]);
          }
        }
        long long det = detail::int_determinant(std::move(sub));
        if (det < -1 || det > 1) {
          result.totally_unimodular = false;
          result.witness = TuWitness{rows, cols, det};
          keep_going = false;
          return false;
        }
        return true;
      });
      return keep_going;
    });
  }
  return result;
}

inline TuResult check_totally_unimodular(const CloudWanInstance& cw, int t, int max_submatrix) {
  return is_totally_unimodular(cloudwan_slot_matrix(cw, t), max_submatrix);
}

}  // namespace nba
