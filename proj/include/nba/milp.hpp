#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nba/model.hpp"
#include "nba/percentile.hpp"

namespace nba {

enum class VarKind { Binary, Continuous };
enum class RowSense { LessEqual, GreaterEqual, Equal };

enum class VarRole { EdgeChoice, NodePeak, NodeOrder, DiscardOut, DiscardIn };
enum class RowRole {
  SourceOut,      // data leaves every source
  DestCover,      // every destination is fed
  EgressCap,
  IngressCap,
  Replication,    // relays forward at least what they take in
  EdgeFeed,       // an edge carries content only if its tail is fed
  ReachOrder,     // potential ordering along chosen edges (no closed loops)
  PeakOut,        // y_i >= egress load minus big-M discard
  PeakIn,
  DiscardBudgetOut,  // at most k slots may be discarded per node/direction
  DiscardBudgetIn,
};

struct MilpVar {
  std::string name;
  VarKind kind = VarKind::Binary;
  VarRole role = VarRole::EdgeChoice;
  std::optional<Rat> upper;  // continuous vars: absent means unbounded above
  int slot = 0;
  NodeId source = 0;
  NodeId node = 0;
  Edge edge;
};

struct MilpTerm {
  int var = 0;  // index into MilpModel::vars
  Rat coef;
};

struct MilpRow {
  std::string name;
  RowRole role = RowRole::SourceOut;
  std::vector<MilpTerm> terms;
  RowSense sense = RowSense::LessEqual;
  Rat rhs;
  int slot = 0;
  NodeId source = 0;
  NodeId node = 0;
};

// Linearized form of the allocation problem: the f binaries plus, per billed
// node, a shared peak variable y_i that the objective drives down to
// max(billed egress, billed ingress), and per slot a discard binary per
// direction whose budget is the number of free samples. The raw constraint
// families cannot tell genuine delivery from a sender that was never fed, so
// the encoding adds per-(slot, source) feed rows (an edge may carry content
// only if its tail takes some in-edge) and potential-ordering rows that rule
// out closed loops; together they pin the variables to configurations where
// content actually flows out of the source. Variable and row counts for an
// instance with billed node set B, k = discard_count():
//   f vars:   sum over t, s in S^(t) of |E^(t)|
//   y vars:   |B|
//   ord vars: per (t, s), one per node incident to E^(t)
//   z vars:   k > 0 ? |B| * p * (egress_only ? 1 : 2) : 0
//   feed rows: per (t, s), one per edge whose tail is not s
//   order rows: per (t, s), one per edge whose head is not s
//   peak rows: |B| * p per billed direction; budget rows: one per (node,
//   direction) when k > 0.
struct MilpModel {
  std::vector<MilpVar> vars;
  std::vector<MilpRow> rows;
  std::vector<MilpTerm> objective;  // sense: minimize

  int var_by_name(const std::string& name) const {
    for (size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].name == name) return static_cast<int>(i);
    }
    return -1;
  }
};

namespace detail {

inline std::string fvar_name(int t, NodeId s, const Edge& e) {
  return "f_t" + std::to_string(t) + "_s" + std::to_string(s) + "_e" +
         std::to_string(e.tail) + "_" + std::to_string(e.head);
}

}  // namespace detail

// Encodes an instance as a MILP whose optimal objective value equals the
// optimal plan cost. Destination coverage is emitted in its ">= 1" form so
// that every feasible plan maps onto a feasible assignment; the "exactly
// one" variant is an optimality property, not a constraint.
inline MilpModel encode(const Instance& instance) {
  instance.validate();
  MilpModel m;
  int p = instance.billing.sample_count;
  int k = instance.billing.discard_count();

  std::map<std::string, int> index;
  auto add_var = [&](MilpVar v) {
    index[v.name] = static_cast<int>(m.vars.size());
    m.vars.push_back(std::move(v));
    return static_cast<int>(m.vars.size()) - 1;
  };

  for (int t = 1; t <= p; ++t) {
    const SlotDemand& d = instance.demand(t);
    for (const auto& sd : d.sources) {
      for (const Edge& e : d.edges) {
        MilpVar v;
        v.name = detail::fvar_name(t, sd.source, e);
        v.kind = VarKind::Binary;
        v.role = VarRole::EdgeChoice;
        v.slot = t;
        v.source = sd.source;
        v.edge = e;
        add_var(std::move(v));
      }
    }
  }
  for (NodeId i = 1; i <= instance.network.node_count; ++i) {
    if (!instance.rules.bills(i)) continue;
    MilpVar v;
    v.name = "y_n" + std::to_string(i);
    v.kind = VarKind::Continuous;
    v.role = VarRole::NodePeak;
    v.node = i;
    int yi = add_var(std::move(v));
    m.objective.push_back({yi, instance.network.unit_price[static_cast<size_t>(i - 1)]});
  }
  if (k > 0) {
    for (NodeId i = 1; i <= instance.network.node_count; ++i) {
      if (!instance.rules.bills(i)) continue;
      for (int t = 1; t <= p; ++t) {
        MilpVar v;
        v.name = "zout_n" + std::to_string(i) + "_t" + std::to_string(t);
        v.kind = VarKind::Binary;
        v.role = VarRole::DiscardOut;
        v.node = i;
        v.slot = t;
        add_var(std::move(v));
      }
      if (instance.rules.egress_only) continue;
      for (int t = 1; t <= p; ++t) {
        MilpVar v;
        v.name = "zin_n" + std::to_string(i) + "_t" + std::to_string(t);
        v.kind = VarKind::Binary;
        v.role = VarRole::DiscardIn;
        v.node = i;
        v.slot = t;
        add_var(std::move(v));
      }
    }
  }

  for (int t = 1; t <= p; ++t) {
    const SlotDemand& d = instance.demand(t);
    std::set<NodeId> touched;
    for (const Edge& e : d.edges) {
      touched.insert(e.tail);
      touched.insert(e.head);
    }
    for (const auto& sd : d.sources) {
      for (NodeId v : touched) {
        MilpVar var;
        var.name = "ord_t" + std::to_string(t) + "_s" + std::to_string(sd.source) + "_n" +
                   std::to_string(v);
        var.kind = VarKind::Continuous;
        var.role = VarRole::NodeOrder;
        var.slot = t;
        var.source = sd.source;
        var.node = v;
        var.upper = v == sd.source ? Rat(0) : Rat(instance.network.node_count - 1);
        add_var(std::move(var));
      }
    }
  }

  auto fvar = [&](int t, NodeId s, const Edge& e) { return index.at(detail::fvar_name(t, s, e)); };

  for (int t = 1; t <= p; ++t) {
    const SlotDemand& d = instance.demand(t);
    for (const auto& sd : d.sources) {
      if (sd.dests.empty()) continue;
      MilpRow row;
      row.name = "src_t" + std::to_string(t) + "_s" + std::to_string(sd.source);
      row.role = RowRole::SourceOut;
      row.sense = instance.rules.source_single_out ? RowSense::Equal : RowSense::GreaterEqual;
      row.rhs = Rat(1);
      row.slot = t;
      row.source = sd.source;
      for (const Edge& e : d.edges) {
        if (e.tail == sd.source) row.terms.push_back({fvar(t, sd.source, e), Rat(1)});
      }
      m.rows.push_back(std::move(row));
    }
    for (const auto& sd : d.sources) {
      for (NodeId j : sd.dests) {
        MilpRow row;
        row.name = "dst_t" + std::to_string(t) + "_s" + std::to_string(sd.source) + "_n" +
                   std::to_string(j);
        row.role = RowRole::DestCover;
        row.sense = RowSense::GreaterEqual;
        row.rhs = Rat(1);
        row.slot = t;
        row.source = sd.source;
        row.node = j;
        for (const Edge& e : d.edges) {
          if (e.head == j) row.terms.push_back({fvar(t, sd.source, e), Rat(1)});
        }
        m.rows.push_back(std::move(row));
      }
    }
    for (NodeId i = 1; i <= instance.network.node_count; ++i) {
      MilpRow row;
      row.name = "ecap_t" + std::to_string(t) + "_n" + std::to_string(i);
      row.role = RowRole::EgressCap;
      row.sense = RowSense::LessEqual;
      row.rhs = instance.network.egress_cap[static_cast<size_t>(i - 1)];
      row.slot = t;
      row.node = i;
      for (const auto& sd : d.sources) {
        for (const Edge& e : d.edges) {
          if (e.tail == i) row.terms.push_back({fvar(t, sd.source, e), sd.weight});
        }
      }
      if (!row.terms.empty()) m.rows.push_back(std::move(row));
    }
    for (NodeId i = 1; i <= instance.network.node_count; ++i) {
      MilpRow row;
      row.name = "icap_t" + std::to_string(t) + "_n" + std::to_string(i);
      row.role = RowRole::IngressCap;
      row.sense = RowSense::LessEqual;
      row.rhs = instance.network.ingress_cap[static_cast<size_t>(i - 1)];
      row.slot = t;
      row.node = i;
      for (const auto& sd : d.sources) {
        for (const Edge& e : d.edges) {
          if (e.head == i) row.terms.push_back({fvar(t, sd.source, e), sd.weight});
        }
      }
      if (!row.terms.empty()) m.rows.push_back(std::move(row));
    }
    for (const auto& sd : d.sources) {
      for (NodeId j = 1; j <= instance.network.node_count; ++j) {
        if (sd.dests.count(j) > 0) continue;
        if (!instance.rules.replicates(j)) continue;
        MilpRow row;
        row.name = "rep_t" + std::to_string(t) + "_s" + std::to_string(sd.source) + "_n" +
                   std::to_string(j);
        row.role = RowRole::Replication;
        row.sense = RowSense::LessEqual;
        row.rhs = Rat(0);
        row.slot = t;
        row.source = sd.source;
        row.node = j;
        for (const Edge& e : d.edges) {
          if (e.head == j) row.terms.push_back({fvar(t, sd.source, e), Rat(1)});
          if (e.tail == j) row.terms.push_back({fvar(t, sd.source, e), Rat(-1)});
        }
        bool has_in = false;
        for (const auto& term : row.terms) {
          if (term.coef > Rat(0)) has_in = true;
        }
        if (has_in) m.rows.push_back(std::move(row));
      }
    }
    for (const auto& sd : d.sources) {
      // Feed rows: an edge (v, k) may carry this source's content only if v
      // itself takes some in-edge (the source originates content and needs
      // no feed).
      for (const Edge& e : d.edges) {
        if (e.tail == sd.source) continue;
        MilpRow row;
        row.name = "feed_t" + std::to_string(t) + "_s" + std::to_string(sd.source) + "_e" +
                   std::to_string(e.tail) + "_" + std::to_string(e.head);
        row.role = RowRole::EdgeFeed;
        row.sense = RowSense::LessEqual;
        row.rhs = Rat(0);
        row.slot = t;
        row.source = sd.source;
        row.terms.push_back({fvar(t, sd.source, e), Rat(1)});
        for (const Edge& in : d.edges) {
          if (in.head == e.tail) row.terms.push_back({fvar(t, sd.source, in), Rat(-1)});
        }
        m.rows.push_back(std::move(row));
      }
      // Ordering rows: along a chosen edge the potential strictly increases,
      // which rules out closed loops away from the source.
      for (const Edge& e : d.edges) {
        if (e.head == sd.source) continue;
        MilpRow row;
        row.name = "mtz_t" + std::to_string(t) + "_s" + std::to_string(sd.source) + "_e" +
                   std::to_string(e.tail) + "_" + std::to_string(e.head);
        row.role = RowRole::ReachOrder;
        row.sense = RowSense::LessEqual;
        row.rhs = Rat(instance.network.node_count - 1);
        row.slot = t;
        row.source = sd.source;
        int tail_ord = index.at("ord_t" + std::to_string(t) + "_s" +
                                std::to_string(sd.source) + "_n" + std::to_string(e.tail));
        int head_ord = index.at("ord_t" + std::to_string(t) + "_s" +
                                std::to_string(sd.source) + "_n" + std::to_string(e.head));
        row.terms.push_back({tail_ord, Rat(1)});
        row.terms.push_back({head_ord, Rat(-1)});
        row.terms.push_back({fvar(t, sd.source, e), Rat(instance.network.node_count)});
        m.rows.push_back(std::move(row));
      }
    }
  }

  // Percentile linearization. The big-M per (node, slot) is the tightest
  // valid load bound: the capacity, or the total weight times the number of
  // eligible incident edges, whichever is smaller.
  for (NodeId i = 1; i <= instance.network.node_count; ++i) {
    if (!instance.rules.bills(i)) continue;
    int yi = index.at("y_n" + std::to_string(i));
    for (int dir = 0; dir < (instance.rules.egress_only ? 1 : 2); ++dir) {
      bool in_dir = dir == 1;
      for (int t = 1; t <= p; ++t) {
        const SlotDemand& d = instance.demand(t);
        MilpRow row;
        row.name = (in_dir ? "pki_n" : "pko_n") + std::to_string(i) + "_t" + std::to_string(t);
        row.role = in_dir ? RowRole::PeakIn : RowRole::PeakOut;
        row.sense = RowSense::GreaterEqual;
        row.rhs = Rat(0);
        row.slot = t;
        row.node = i;
        row.terms.push_back({yi, Rat(1)});
        int incident = 0;
        Rat weight_sum(0);
        for (const Edge& e : d.edges) {
          if ((in_dir ? e.head : e.tail) == i) ++incident;
        }
        for (const auto& sd : d.sources) {
          weight_sum += sd.weight;
          for (const Edge& e : d.edges) {
            if ((in_dir ? e.head : e.tail) == i) {
              row.terms.push_back({fvar(t, sd.source, e), -sd.weight});
            }
          }
        }
        if (k > 0) {
          Rat cap = in_dir ? instance.network.ingress_cap[static_cast<size_t>(i - 1)]
                           : instance.network.egress_cap[static_cast<size_t>(i - 1)];
          Rat big_m = weight_sum * Rat(incident);
          if (cap < big_m) big_m = cap;
          if (big_m > Rat(0)) {
            int zi = index.at((in_dir ? "zin_n" : "zout_n") + std::to_string(i) + "_t" +
                              std::to_string(t));
            row.terms.push_back({zi, big_m});
          }
        }
        m.rows.push_back(std::move(row));
      }
      if (k > 0) {
        MilpRow row;
        row.name = (in_dir ? "bgi_n" : "bgo_n") + std::to_string(i);
        row.role = in_dir ? RowRole::DiscardBudgetIn : RowRole::DiscardBudgetOut;
        row.sense = RowSense::LessEqual;
        row.rhs = Rat(k);
        row.node = i;
        for (int t = 1; t <= p; ++t) {
          row.terms.push_back({index.at((in_dir ? "zin_n" : "zout_n") + std::to_string(i) +
                                        "_t" + std::to_string(t)),
                               Rat(1)});
        }
        m.rows.push_back(std::move(row));
      }
    }
  }
  return m;
}

namespace detail {

inline void append_terms(std::string& out, const std::vector<MilpTerm>& terms,
                         const MilpModel& m) {
  bool first = true;
  for (const auto& term : terms) {
    Rat c = term.coef;
    if (first) {
      if (c < Rat(0)) {
        out += "- ";
        c = -c;
      }
      first = false;
    } else {
      out += c < Rat(0) ? " - " : " + ";
      if (c < Rat(0)) c = -c;
    }
    if (c != Rat(1)) {
      out += rat_decimal(c);
      out += ' ';
    }
    out += m.vars[static_cast<size_t>(term.var)].name;
  }
}

}  // namespace detail

// CPLEX-LP text. Deterministic: equal models serialize to identical bytes.
inline std::string export_lp(const MilpModel& m) {
  std::string out;
  out += "Minimize\n obj:";
  if (!m.objective.empty()) {
    out += ' ';
    detail::append_terms(out, m.objective, m);
  }
  out += "\nSubject To\n";
  for (const auto& row : m.rows) {
    out += ' ';
    out += row.name;
    out += ": ";
    detail::append_terms(out, row.terms, m);
    switch (row.sense) {
      case RowSense::LessEqual: out += " <= "; break;
      case RowSense::GreaterEqual: out += " >= "; break;
      case RowSense::Equal: out += " = "; break;
    }
    out += rat_decimal(row.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const auto& v : m.vars) {
    if (v.kind == VarKind::Continuous) {
      if (v.upper) {
        out += " 0 <= " + v.name + " <= " + rat_decimal(*v.upper) + "\n";
      } else {
        out += " 0 <= " + v.name + "\n";
      }
    }
  }
  out += "Binaries\n";
  for (const auto& v : m.vars) {
    if (v.kind == VarKind::Binary) out += " " + v.name + "\n";
  }
  out += "Generals\nEnd\n";
  return out;
}

// Fixed-column MPS (extended: names longer than eight characters keep their
// own column, as modern readers expect). Same determinism guarantee.
inline std::string export_mps(const MilpModel& m) {
  size_t name_w = 8;
  for (const auto& v : m.vars) name_w = std::max(name_w, v.name.size());
  for (const auto& row : m.rows) name_w = std::max(name_w, row.name.size());
  auto pad = [&](const std::string& s) {
    std::string r = s;
    r.resize(name_w + 2, ' ');
    return r;
  };

  std::string out;
  out += "NAME          NBA\n";
  out += "ROWS\n";
  out += " N  obj\n";
  for (const auto& row : m.rows) {
    char sense = row.sense == RowSense::LessEqual ? 'L'
                 : row.sense == RowSense::GreaterEqual ? 'G'
                                                       : 'E';
    out += std::string(" ") + sense + "  " + row.name + "\n";
  }

  // Column-major entries, preserving variable order.
  std::vector<std::vector<std::pair<std::string, Rat>>> entries(m.vars.size());
  for (const auto& term : m.objective) {
    entries[static_cast<size_t>(term.var)].push_back({"obj", term.coef});
  }
  for (const auto& row : m.rows) {
    for (const auto& term : row.terms) {
      entries[static_cast<size_t>(term.var)].push_back({row.name, term.coef});
    }
  }

  out += "COLUMNS\n";
  bool in_integer = false;
  for (size_t vi = 0; vi < m.vars.size(); ++vi) {
    bool integer = m.vars[vi].kind == VarKind::Binary;
    if (integer != in_integer) {
      out += "    MARKER" + std::string(name_w - 4, ' ') + "'MARKER'                 " +
             (integer ? "'INTORG'" : "'INTEND'") + "\n";
      in_integer = integer;
    }
    for (const auto& [row_name, coef] : entries[vi]) {
      out += "    " + pad(m.vars[vi].name) + pad(row_name) + rat_decimal(coef) + "\n";
    }
  }
  if (in_integer) {
    out += "    MARKER" + std::string(name_w - 4, ' ') + "'MARKER'                 'INTEND'\n";
  }

  out += "RHS\n";
  for (const auto& row : m.rows) {
    if (row.rhs != Rat(0)) {
      out += "    " + pad("RHS1") + pad(row.name) + rat_decimal(row.rhs) + "\n";
    }
  }
  out += "BOUNDS\n";
  for (const auto& v : m.vars) {
    if (v.kind == VarKind::Binary) {
      out += " BV " + pad("BND") + v.name + "\n";
    } else if (v.upper) {
      out += " UP " + pad("BND") + pad(v.name) + rat_decimal(*v.upper) + "\n";
    }
    // Unbounded continuous variables keep the default [0, +inf).
  }
  out += "ENDATA\n";
  return out;
}

enum class MilpStatus { Optimal, Infeasible, Unsolved };

struct MilpResult {
  MilpStatus status = MilpStatus::Unsolved;
  std::map<std::string, Rat> assignment;
  Rat objective;
  long long nodes_visited = 0;
};

// Depth-first branch and bound over the edge binaries with a combinatorial
// bound instead of LP relaxations: with some binaries fixed, each peak
// variable is at least the billed percentile of its per-slot fixed loads, so
// sum(u_i * that) underestimates every completion. Discard binaries are
// never branched; for a full edge assignment the optimal discard choice is
// exactly "drop the k largest loads", evaluated directly. Requires a model
// produced by encode (role metadata intact).
inline MilpResult solve_milp_internal(const MilpModel& m, long long node_budget) {
  // Recover structure.
  std::vector<int> fvars;
  for (size_t i = 0; i < m.vars.size(); ++i) {
    if (m.vars[i].role == VarRole::EdgeChoice) fvars.push_back(static_cast<int>(i));
  }
  for (const auto& row : m.rows) {
    for (const auto& term : row.terms) {
      if (term.var < 0 || term.var >= static_cast<int>(m.vars.size())) {
        throw InputError("milp: row " + row.name + " references an unknown variable");
      }
    }
  }

  struct PeakGroup {
    NodeId node = 0;
    Rat price;
    int sample_count = 0;
    int discard = 0;
    // [direction][slot-1] -> load terms over f vars
    std::vector<std::vector<std::vector<MilpTerm>>> loads;
  };
  std::map<NodeId, PeakGroup> groups;
  int p = 0;
  for (const auto& row : m.rows) {
    if (row.role == RowRole::PeakOut || row.role == RowRole::PeakIn) p = std::max(p, row.slot);
  }
  for (const auto& term : m.objective) {
    const MilpVar& v = m.vars[static_cast<size_t>(term.var)];
    if (v.role != VarRole::NodePeak) {
      throw InputError("milp: objective term on non-peak variable " + v.name);
    }
    PeakGroup g;
    g.node = v.node;
    g.price = term.coef;
    g.sample_count = p;
    groups[v.node] = std::move(g);
  }
  for (auto& [node, g] : groups) {
    g.loads.assign(2, std::vector<std::vector<MilpTerm>>(static_cast<size_t>(p)));
  }
  for (const auto& row : m.rows) {
    if (row.role == RowRole::PeakOut || row.role == RowRole::PeakIn) {
      auto it = groups.find(row.node);
      if (it == groups.end()) throw InputError("milp: peak row for unbilled node " + row.name);
      int dir = row.role == RowRole::PeakIn ? 1 : 0;
      auto& cell = it->second.loads[static_cast<size_t>(dir)][static_cast<size_t>(row.slot - 1)];
      for (const auto& term : row.terms) {
        const MilpVar& v = m.vars[static_cast<size_t>(term.var)];
        if (v.role == VarRole::EdgeChoice) cell.push_back({term.var, -term.coef});
      }
    } else if (row.role == RowRole::DiscardBudgetOut || row.role == RowRole::DiscardBudgetIn) {
      auto it = groups.find(row.node);
      if (it == groups.end()) throw InputError("milp: budget row for unbilled node " + row.name);
      it->second.discard = static_cast<int>(rat_floor(row.rhs));
    }
  }

  // Rows whose variables are all edge binaries drive feasibility pruning.
  std::vector<const MilpRow*> frows;
  for (const auto& row : m.rows) {
    if (row.role == RowRole::SourceOut || row.role == RowRole::DestCover ||
        row.role == RowRole::EgressCap || row.role == RowRole::IngressCap ||
        row.role == RowRole::Replication || row.role == RowRole::EdgeFeed) {
      frows.push_back(&row);
    }
  }

  // Edge variables grouped per (slot, source) for the delivery check: the
  // ordering rows are linear only thanks to the ord variables, which this
  // solver replaces by a direct reachability-and-acyclicity test on leaves.
  std::map<std::pair<int, NodeId>, std::vector<int>> edge_groups;
  for (size_t i = 0; i < m.vars.size(); ++i) {
    if (m.vars[i].role == VarRole::EdgeChoice) {
      edge_groups[{m.vars[i].slot, m.vars[i].source}].push_back(static_cast<int>(i));
    }
  }

  MilpResult result;
  std::vector<int> value(m.vars.size(), -1);  // -1 free, else 0/1

  // Achievable LHS interval of a row given current fixes.
  auto row_interval = [&](const MilpRow& row) {
    Rat lo(0), hi(0);
    for (const auto& term : row.terms) {
      int v = value[static_cast<size_t>(term.var)];
      if (v == -1) {
        if (term.coef > Rat(0)) {
          hi += term.coef;
        } else {
          lo += term.coef;
        }
      } else if (v == 1) {
        lo += term.coef;
        hi += term.coef;
      }
    }
    return std::pair<Rat, Rat>(lo, hi);
  };
  auto rows_possible = [&]() {
    for (const MilpRow* row : frows) {
      auto [lo, hi] = row_interval(*row);
      switch (row->sense) {
        case RowSense::LessEqual:
          if (lo > row->rhs) return false;
          break;
        case RowSense::GreaterEqual:
          if (hi < row->rhs) return false;
          break;
        case RowSense::Equal:
          if (lo > row->rhs || hi < row->rhs) return false;
          break;
      }
    }
    return true;
  };

  // Per-node objective lower bound from fixed loads only.
  auto objective_bound = [&](bool fixed_only) {
    Rat total(0);
    for (const auto& [node, g] : groups) {
      Rat best(0);
      for (int dir = 0; dir < 2; ++dir) {
        std::vector<Rat> series;
        bool any = false;
        for (int t = 0; t < g.sample_count; ++t) {
          Rat load(0);
          for (const auto& term : g.loads[static_cast<size_t>(dir)][static_cast<size_t>(t)]) {
            int v = value[static_cast<size_t>(term.var)];
            if (v == 1 || (!fixed_only && v == -1)) load += term.coef;
          }
          any = any || !g.loads[static_cast<size_t>(dir)][static_cast<size_t>(t)].empty();
          series.push_back(load);
        }
        if (series.empty() || !any) continue;
        std::sort(series.begin(), series.end(), std::greater<Rat>());
        size_t idx = static_cast<size_t>(std::min<int>(g.discard, static_cast<int>(series.size()) - 1));
        if (series[idx] > best) best = series[idx];
      }
      total += g.price * best;
    }
    return total;
  };

  // Chosen edges must trace back to their source (reachability) and admit a
  // potential ordering (no closed loop that avoids the source), mirroring the
  // feed and ordering rows of the exported model.
  auto delivery_ok = [&]() {
    for (const auto& [key, vars] : edge_groups) {
      NodeId source = key.second;
      std::map<NodeId, std::vector<NodeId>> adj;
      std::vector<Edge> active;
      for (int vi : vars) {
        if (value[static_cast<size_t>(vi)] == 1) {
          const Edge& e = m.vars[static_cast<size_t>(vi)].edge;
          active.push_back(e);
          adj[e.tail].push_back(e.head);
        }
      }
      if (active.empty()) continue;
      std::set<NodeId> seen{source};
      std::vector<NodeId> queue{source};
      while (!queue.empty()) {
        NodeId v = queue.back();
        queue.pop_back();
        for (NodeId w : adj[v]) {
          if (seen.insert(w).second) queue.push_back(w);
        }
      }
      for (const Edge& e : active) {
        if (seen.count(e.tail) == 0) return false;
      }
      // Cycle check over edges not entering the source.
      std::map<NodeId, std::vector<NodeId>> dag;
      std::set<NodeId> nodes_in;
      for (const Edge& e : active) {
        if (e.head == source) continue;
        dag[e.tail].push_back(e.head);
        nodes_in.insert(e.tail);
        nodes_in.insert(e.head);
      }
      std::map<NodeId, int> state;
      for (NodeId start : nodes_in) {
        if (state[start] != 0) continue;
        std::vector<std::pair<NodeId, size_t>> stack{{start, 0}};
        state[start] = 1;
        while (!stack.empty()) {
          auto& [v, idx] = stack.back();
          auto& nexts = dag[v];
          if (idx < nexts.size()) {
            NodeId w = nexts[idx++];
            if (state[w] == 1) return false;
            if (state[w] == 0) {
              state[w] = 1;
              stack.push_back({w, 0});
            }
          } else {
            state[v] = 2;
            stack.pop_back();
          }
        }
      }
    }
    return true;
  };

  std::optional<Rat> best_obj;
  std::vector<int> best_assign;
  long long nodes = 0;
  bool exhausted_budget = false;

  auto dfs = [&](auto&& self, size_t depth) -> void {
    if (exhausted_budget) return;
    if (++nodes > node_budget) {
      exhausted_budget = true;
      return;
    }
    if (!rows_possible()) return;
    Rat lb = objective_bound(true);
    if (best_obj && lb >= *best_obj) return;
    if (depth == fvars.size()) {
      if (!delivery_ok()) return;
      Rat obj = objective_bound(true);
      if (!best_obj || obj < *best_obj) {
        best_obj = obj;
        best_assign = value;
      }
      return;
    }
    int var = fvars[depth];
    for (int choice : {1, 0}) {
      value[static_cast<size_t>(var)] = choice;
      self(self, depth + 1);
      value[static_cast<size_t>(var)] = -1;
      if (exhausted_budget) return;
    }
  };
  dfs(dfs, 0);

  if (exhausted_budget) {
    result.status = MilpStatus::Unsolved;
    result.nodes_visited = nodes;
    return result;
  }
  if (!best_obj) {
    result.status = MilpStatus::Infeasible;
    result.nodes_visited = nodes;
    return result;
  }

  result.status = MilpStatus::Optimal;
  result.objective = *best_obj;
  result.nodes_visited = nodes;
  value = best_assign;
  for (int fv : fvars) {
    result.assignment[m.vars[static_cast<size_t>(fv)].name] =
        Rat(value[static_cast<size_t>(fv)] == 1 ? 1 : 0);
  }
  // Realize y and the discard choice for the winning assignment.
  for (const auto& [node, g] : groups) {
    Rat y(0);
    for (int dir = 0; dir < 2; ++dir) {
      std::vector<std::pair<Rat, int>> loads;  // (load, slot)
      bool any = false;
      for (int t = 0; t < g.sample_count; ++t) {
        Rat load(0);
        for (const auto& term : g.loads[static_cast<size_t>(dir)][static_cast<size_t>(t)]) {
          if (value[static_cast<size_t>(term.var)] == 1) load += term.coef;
        }
        any = any || !g.loads[static_cast<size_t>(dir)][static_cast<size_t>(t)].empty();
        loads.push_back({load, t + 1});
      }
      if (!any) continue;
      std::sort(loads.begin(), loads.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      std::string prefix = dir == 1 ? "zin_n" : "zout_n";
      for (size_t r = 0; r < loads.size(); ++r) {
        std::string name = prefix + std::to_string(node) + "_t" + std::to_string(loads[r].second);
        if (m.var_by_name(name) >= 0) {
          result.assignment[name] = Rat(r < static_cast<size_t>(g.discard) ? 1 : 0);
        }
      }
      size_t idx = static_cast<size_t>(std::min<int>(g.discard, static_cast<int>(loads.size()) - 1));
      if (loads[idx].first > y) y = loads[idx].first;
    }
    result.assignment["y_n" + std::to_string(node)] = y;
  }
  for (const auto& [key, vars] : edge_groups) {
    NodeId source = key.second;
    std::map<NodeId, std::vector<NodeId>> rev;  // head -> tails, source edges cut
    std::set<NodeId> nodes_in;
    for (int vi : vars) {
      const MilpVar& v = m.vars[static_cast<size_t>(vi)];
      nodes_in.insert(v.edge.tail);
      nodes_in.insert(v.edge.head);
      if (value[static_cast<size_t>(vi)] == 1 && v.edge.head != source) {
        rev[v.edge.head].push_back(v.edge.tail);
      }
    }
    // Longest chosen-edge path from the source; untouched nodes sit at 0.
    std::map<NodeId, Rat> depth;
    auto depth_of = [&](auto&& self, NodeId v) -> Rat {
      auto it = depth.find(v);
      if (it != depth.end()) return it->second;
      depth[v] = Rat(0);  // source and unfed nodes
      Rat best_depth(0);
      for (NodeId tail : rev[v]) {
        Rat cand = self(self, tail) + Rat(1);
        if (cand > best_depth) best_depth = cand;
      }
      if (v != source) depth[v] = best_depth;
      return depth[v];
    };
    for (NodeId v : nodes_in) {
      std::string name = "ord_t" + std::to_string(key.first) + "_s" + std::to_string(source) +
                         "_n" + std::to_string(v);
      if (m.var_by_name(name) >= 0) result.assignment[name] = depth_of(depth_of, v);
    }
  }
  return result;
}

}  // namespace nba
