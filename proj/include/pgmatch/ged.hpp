#pragma once

// Exact (weighted) graph edit distance by branch-and-bound over partial
// injective node matchings, plus an exhaustive reference oracle.
//
// Each first-graph node is either mapped to an unused second-graph node or
// deleted. Edges are matched only between matched endpoints; for every
// endpoint pair the parallel edges are matched by a min-cost partial
// assignment, so the edge part of a node matching is always optimal. The
// cost of a matching equals the cost of the edit script derived from it.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "pgmatch/derive.hpp"
#include "pgmatch/detail/assignment.hpp"
#include "pgmatch/detail/indexed_graph.hpp"
#include "pgmatch/search.hpp"

namespace pgmatch {

struct EditResult {
  Matching matching;
  EditScript script;
  std::int64_t cost = 0;
  bool optimal = true;  // false when the budget ran out
};

namespace detail {

class EditSearch {
 public:
  EditSearch(const PropertyGraph& g1, const PropertyGraph& g2, const SearchOptions& opts)
      : relabel_(opts.labels == LabelMode::relabel), cm_(opts.costs), deadline_(opts.budget) {
    if (!cm_.valid()) throw std::invalid_argument("cost model has a negative weight");
    Interners in;
    a_ = index_graph(g1, in);
    b_ = index_graph(g2, in);
    order_ = variable_order(a_, opts.order);
    precompute();
  }

  // Optimal node assignment (-1 = deleted) and its cost.
  std::pair<std::vector<int>, std::int64_t> run(bool& optimal) {
    assign_.assign(a_.n(), kUndecided);
    used_.assign(b_.n(), -1);
    best_assign_.assign(a_.n(), kDeleted);
    best_ = trivial_cost();
    try {
      extend(0, 0);
      optimal = true;
    } catch (const SearchTimeout&) {
      optimal = false;
    }
    return {best_assign_, best_};
  }

  // Edge matching induced by a complete node assignment.
  Matching to_matching(const std::vector<int>& assign) {
    Matching h;
    for (int v = 0; v < a_.n(); ++v)
      if (assign[v] >= 0) h.node_map.emplace(a_.node_ids[v], b_.node_ids[assign[v]]);
    for (int s = 0; s < a_.n(); ++s) {
      if (assign[s] < 0) continue;
      for (int t = 0; t < a_.n(); ++t) {
        if (assign[t] < 0) continue;
        const auto& ea = a_.edges_between(s, t);
        const auto& eb = b_.edges_between(assign[s], assign[t]);
        if (ea.empty() || eb.empty()) continue;
        const Assignment sol = group_assignment(ea, eb);
        for (std::size_t i = 0; i < ea.size(); ++i)
          if (sol.row_to_col[i] >= 0)
            h.edge_map.emplace(a_.edge_ids[ea[i]], b_.edge_ids[eb[sol.row_to_col[i]]]);
      }
    }
    return h;
  }

 private:
  static constexpr int kUndecided = -2;
  static constexpr int kDeleted = -1;

  std::int64_t w(OpKind k) const { return cm_[k]; }

  std::int64_t prop_diff_cost(const PropList& p, const PropList& q) const {
    const PropDiff d = diff_props(p, q);
    return d.changed * w(OpKind::update_prop) + d.only_left * w(OpKind::delete_prop) +
           d.only_right * w(OpKind::insert_prop);
  }

  void precompute() {
    const int n1 = a_.n(), n2 = b_.n(), m1 = a_.m(), m2 = b_.m();
    node_match_.assign(n1, std::vector<std::int64_t>(n2, kForbidden));
    for (int v = 0; v < n1; ++v)
      for (int x = 0; x < n2; ++x) {
        const bool same = a_.node_label[v] == b_.node_label[x];
        if (!same && !relabel_) continue;
        node_match_[v][x] = (same ? 0 : w(OpKind::relabel_node)) +
                            prop_diff_cost(a_.node_props[v], b_.node_props[x]);
      }
    node_del_.resize(n1);
    for (int v = 0; v < n1; ++v)
      node_del_[v] = w(OpKind::delete_node) +
                     static_cast<std::int64_t>(a_.node_props[v].size()) * w(OpKind::delete_prop);
    node_ins_.resize(n2);
    for (int x = 0; x < n2; ++x)
      node_ins_[x] = w(OpKind::insert_node) +
                     static_cast<std::int64_t>(b_.node_props[x].size()) * w(OpKind::insert_prop);
    edge_match_.assign(m1, std::vector<std::int64_t>(m2, kForbidden));
    for (int e = 0; e < m1; ++e)
      for (int f = 0; f < m2; ++f) {
        const bool same = a_.edge_label[e] == b_.edge_label[f];
        if (!same && !relabel_) continue;
        edge_match_[e][f] = (same ? 0 : w(OpKind::relabel_edge)) +
                            prop_diff_cost(a_.edge_props[e], b_.edge_props[f]);
      }
    edge_del_.resize(m1);
    for (int e = 0; e < m1; ++e)
      edge_del_[e] = w(OpKind::delete_edge) +
                     static_cast<std::int64_t>(a_.edge_props[e].size()) * w(OpKind::delete_prop);
    edge_ins_.resize(m2);
    for (int f = 0; f < m2; ++f)
      edge_ins_[f] = w(OpKind::insert_edge) +
                     static_cast<std::int64_t>(b_.edge_props[f].size()) * w(OpKind::insert_prop);
    // Cheapest way to dispose of a surplus pending edge that cannot be
    // matched with its own label.
    mismatch_ = w(OpKind::delete_edge) + w(OpKind::insert_edge);
    if (relabel_) mismatch_ = std::min(mismatch_, w(OpKind::relabel_edge));
  }

  std::int64_t trivial_cost() const {
    std::int64_t c = 0;
    for (auto x : node_del_) c += x;
    for (auto x : node_ins_) c += x;
    for (auto x : edge_del_) c += x;
    for (auto x : edge_ins_) c += x;
    return c;
  }

  Assignment group_assignment(const std::vector<int>& ea, const std::vector<int>& eb) const {
    std::vector<std::vector<std::int64_t>> match(ea.size(), std::vector<std::int64_t>(eb.size()));
    std::vector<std::int64_t> del(ea.size()), ins(eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
      del[i] = edge_del_[ea[i]];
      for (std::size_t j = 0; j < eb.size(); ++j) match[i][j] = edge_match_[ea[i]][eb[j]];
    }
    for (std::size_t j = 0; j < eb.size(); ++j) ins[j] = edge_ins_[eb[j]];
    return min_cost_partial_matching(match, del, ins);
  }

  std::int64_t group_cost(const std::vector<int>& ea, const std::vector<int>& eb) const {
    if (eb.empty()) {
      std::int64_t c = 0;
      for (int e : ea) c += edge_del_[e];
      return c;
    }
    if (ea.empty()) {
      std::int64_t c = 0;
      for (int f : eb) c += edge_ins_[f];
      return c;
    }
    if (ea.size() == 1 && eb.size() == 1)
      return std::min(edge_match_[ea[0]][eb[0]], edge_del_[ea[0]] + edge_ins_[eb[0]]);
    return group_assignment(ea, eb).cost;
  }

  // Cost added by deciding v (already written into assign_/used_): its own
  // node cost plus every edge whose endpoints are now both decided.
  std::int64_t step_cost(int v) const {
    const int x = assign_[v];
    std::int64_t c = x >= 0 ? node_match_[v][x] : node_del_[v];
    partners_.clear();
    for (int e : a_.out_edges[v])
      if (assign_[a_.tgt[e]] != kUndecided) partners_.push_back(a_.tgt[e]);
    for (int e : a_.in_edges[v])
      if (assign_[a_.src[e]] != kUndecided) partners_.push_back(a_.src[e]);
    if (x >= 0) {
      for (int f : b_.out_edges[x])
        if (used_[b_.tgt[f]] >= 0) partners_.push_back(used_[b_.tgt[f]]);
      for (int f : b_.in_edges[x])
        if (used_[b_.src[f]] >= 0) partners_.push_back(used_[b_.src[f]]);
    }
    std::sort(partners_.begin(), partners_.end());
    partners_.erase(std::unique(partners_.begin(), partners_.end()), partners_.end());
    static const std::vector<int> none;
    for (int u : partners_) {
      const int y = assign_[u];
      const bool both = x >= 0 && y >= 0;
      c += group_cost(a_.edges_between(v, u), both ? b_.edges_between(x, y) : none);
      if (u != v)
        c += group_cost(a_.edges_between(u, v), both ? b_.edges_between(y, x) : none);
    }
    return c;
  }

  // Second-graph structure left unmatched once every first-graph node is
  // decided.
  std::int64_t leaf_cost() const {
    std::int64_t c = 0;
    for (int x = 0; x < b_.n(); ++x)
      if (used_[x] < 0) c += node_ins_[x];
    for (int f = 0; f < b_.m(); ++f)
      if (used_[b_.src[f]] < 0 || used_[b_.tgt[f]] < 0) c += edge_ins_[f];
    return c;
  }

  // Admissible estimate of the cost still to come: an optimal assignment of
  // the undecided nodes onto the unused ones (node costs only), plus a
  // counting bound on pending edges. A pending edge can only be matched to
  // a pending edge of the same class: both endpoints free, or anchored at
  // the same matched second-graph node in the same direction.
  std::int64_t lower_bound() const {
    std::int64_t bound = 0;

    rows_.clear();
    cols_.clear();
    for (int v = 0; v < a_.n(); ++v)
      if (assign_[v] == kUndecided) rows_.push_back(v);
    for (int x = 0; x < b_.n(); ++x)
      if (used_[x] < 0) cols_.push_back(x);
    if (!rows_.empty() || !cols_.empty()) {
      std::vector<std::vector<std::int64_t>> match(rows_.size(),
                                                   std::vector<std::int64_t>(cols_.size()));
      std::vector<std::int64_t> del(rows_.size()), ins(cols_.size());
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        del[i] = node_del_[rows_[i]];
        for (std::size_t j = 0; j < cols_.size(); ++j) match[i][j] = node_match_[rows_[i]][cols_[j]];
      }
      for (std::size_t j = 0; j < cols_.size(); ++j) ins[j] = node_ins_[cols_[j]];
      if (rows_.empty()) {
        for (auto c : ins) bound += c;
      } else if (cols_.empty()) {
        for (auto c : del) bound += c;
      } else {
        bound += min_cost_partial_matching(match, del, ins).cost;
      }
    }

    // class -> label -> (first count, second count)
    classes_.clear();
    auto cls = [&](int free_loop, int anchor, int dir) {
      if (anchor < 0) return free_loop ? -2 : -1;
      return anchor * 2 + dir;
    };
    for (int e = 0; e < a_.m(); ++e) {
      const int s = assign_[a_.src[e]], t = assign_[a_.tgt[e]];
      if (s != kUndecided && t != kUndecided) continue;
      if (s == kDeleted || t == kDeleted) {
        bound += edge_del_[e];
        continue;
      }
      int key;
      if (s == kUndecided && t == kUndecided) key = cls(a_.src[e] == a_.tgt[e], -1, 0);
      else if (s >= 0) key = cls(0, s, 0);
      else key = cls(0, t, 1);
      ++classes_[{key, a_.edge_label[e]}].first;
    }
    for (int f = 0; f < b_.m(); ++f) {
      const bool s_free = used_[b_.src[f]] < 0, t_free = used_[b_.tgt[f]] < 0;
      if (!s_free && !t_free) continue;
      int key;
      if (s_free && t_free) key = cls(b_.src[f] == b_.tgt[f], -1, 0);
      else if (!s_free) key = cls(0, b_.src[f], 0);
      else key = cls(0, b_.tgt[f], 1);
      ++classes_[{key, b_.edge_label[f]}].second;
    }
    const std::int64_t del = w(OpKind::delete_edge), ins = w(OpKind::insert_edge);
    auto it = classes_.begin();
    while (it != classes_.end()) {
      const int key = it->first.first;
      std::int64_t a = 0, b = 0, excess = 0;
      for (; it != classes_.end() && it->first.first == key; ++it) {
        a += it->second.first;
        b += it->second.second;
        excess += std::max(0, it->second.first - it->second.second);
      }
      const std::int64_t u1 = std::max<std::int64_t>(0, a - b);
      const std::int64_t u2 = std::max<std::int64_t>(0, b - a);
      bound += u1 * del + u2 * ins + (excess - u1) * mismatch_;
    }
    return bound;
  }

  void extend(std::size_t depth, std::int64_t cost) {
    if (deadline_.expired()) throw SearchTimeout();
    if (depth == order_.size()) {
      const std::int64_t total = cost + leaf_cost();
      if (total < best_) {
        best_ = total;
        best_assign_ = assign_;
      }
      return;
    }
    const int v = order_[depth];
    struct Option {
      std::int64_t inc;
      int target;
    };
    std::vector<Option> options;
    auto try_target = [&](int x) {
      assign_[v] = x;
      if (x >= 0) used_[x] = v;
      options.push_back({step_cost(v), x});
      if (x >= 0) used_[x] = -1;
      assign_[v] = kUndecided;
    };
    for (int x = 0; x < b_.n(); ++x)
      if (used_[x] < 0 && node_match_[v][x] < kForbidden) try_target(x);
    try_target(kDeleted);
    std::stable_sort(options.begin(), options.end(),
                     [](const Option& l, const Option& r) { return l.inc < r.inc; });
    for (const Option& o : options) {
      if (cost + o.inc >= best_) continue;
      assign_[v] = o.target;
      if (o.target >= 0) used_[o.target] = v;
      if (cost + o.inc + lower_bound() < best_) extend(depth + 1, cost + o.inc);
      if (o.target >= 0) used_[o.target] = -1;
      assign_[v] = kUndecided;
    }
  }

  bool relabel_;
  CostModel cm_;
  Deadline deadline_;
  IndexedGraph a_, b_;
  std::vector<int> order_;
  std::vector<std::vector<std::int64_t>> node_match_, edge_match_;
  std::vector<std::int64_t> node_del_, node_ins_, edge_del_, edge_ins_;
  std::int64_t mismatch_ = 0;

  std::vector<int> assign_, used_;  // used_[x] = preimage or -1
  std::vector<int> best_assign_;
  std::int64_t best_ = 0;

  mutable std::vector<int> partners_, rows_, cols_;
  mutable std::map<std::pair<int, int>, std::pair<int, int>> classes_;
};

}  // namespace detail

// Minimum-cost partial isomorphism between g1 and g2 with the edit script
// it induces. On timeout the best matching found so far is returned with
// optimal = false. The script keeps g1's ids for matched elements and
// inserts g2's elements under their own ids; when such an id is also kept
// from g1, the inserted element gets a fresh primed id (see make_disjoint).
inline EditResult min_edit_matching(const PropertyGraph& g1, const PropertyGraph& g2,
                                    const SearchOptions& opts = {}) {
  detail::EditSearch search(g1, g2, opts);
  EditResult r;
  auto [assign, cost] = search.run(r.optimal);
  r.matching = search.to_matching(assign);
  DerivedScript derived;
  if (inserts_clash(r.matching, g1, g2)) {
    // Same matching against a copy of g2 with fresh ids for the clashes.
    const Matching fresh = disjoint_renaming(g1, g2);
    Matching renamed = r.matching;
    for (auto& [_, y] : renamed.node_map)
      if (auto it = fresh.node_map.find(y); it != fresh.node_map.end()) y = it->second;
    for (auto& [_, y] : renamed.edge_map)
      if (auto it = fresh.edge_map.find(y); it != fresh.edge_map.end()) y = it->second;
    derived = script_from_matching(renamed, g1, rename(g2, fresh), opts.labels, opts.costs);
  } else {
    derived = script_from_matching(r.matching, g1, g2, opts.labels, opts.costs);
  }
  if (derived.cost != cost)
    throw std::logic_error("edit search cost " + std::to_string(cost) +
                           " disagrees with derived script cost " + std::to_string(derived.cost));
  r.script = std::move(derived.script);
  r.cost = cost;
  return r;
}

inline constexpr std::size_t kOracleMaxNodes = 7;

// Reference edit distance: enumerates every partial injective node matching
// and every compatible edge matching, derives the script of each and keeps
// the cheapest. No pruning. Throws SizeGuardExceeded above kOracleMaxNodes
// nodes per graph.
inline std::int64_t oracle_ged(const PropertyGraph& g1, const PropertyGraph& g2_in,
                               const SearchOptions& opts = {}) {
  if (g1.nodes().size() > kOracleMaxNodes || g2_in.nodes().size() > kOracleMaxNodes)
    throw SizeGuardExceeded("oracle limited to " + std::to_string(kOracleMaxNodes) +
                            " nodes per graph");
  const PropertyGraph g2 = make_disjoint(g1, g2_in);
  const bool hard = opts.labels == LabelMode::hard;
  std::vector<std::string> nodes1, nodes2, edges1, edges2;
  for (const auto& [v, _] : g1.nodes()) nodes1.push_back(v);
  for (const auto& [v, _] : g2.nodes()) nodes2.push_back(v);
  for (const auto& [e, _] : g1.edges()) edges1.push_back(e);
  for (const auto& [e, _] : g2.edges()) edges2.push_back(e);

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  Matching h;
  std::vector<char> node_used(nodes2.size(), 0), edge_used(edges2.size(), 0);

  auto evaluate = [&] {
    best = std::min(best, script_from_matching(h, g1, g2, opts.labels, opts.costs).cost);
  };
  auto edges = [&](auto&& self, std::size_t i) -> void {
    if (i == edges1.size()) return evaluate();
    self(self, i + 1);
    const Edge& e = g1.edges().at(edges1[i]);
    auto s = h.node_map.find(e.src), t = h.node_map.find(e.tgt);
    if (s == h.node_map.end() || t == h.node_map.end()) return;
    for (std::size_t j = 0; j < edges2.size(); ++j) {
      if (edge_used[j]) continue;
      const Edge& f = g2.edges().at(edges2[j]);
      if (f.src != s->second || f.tgt != t->second) continue;
      if (hard && f.label != e.label) continue;
      edge_used[j] = 1;
      h.edge_map[edges1[i]] = edges2[j];
      self(self, i + 1);
      h.edge_map.erase(edges1[i]);
      edge_used[j] = 0;
    }
  };
  auto nodes = [&](auto&& self, std::size_t i) -> void {
    if (i == nodes1.size()) return edges(edges, 0);
    self(self, i + 1);
    for (std::size_t j = 0; j < nodes2.size(); ++j) {
      if (node_used[j]) continue;
      if (hard && g1.nodes().at(nodes1[i]) != g2.nodes().at(nodes2[j])) continue;
      node_used[j] = 1;
      h.node_map[nodes1[i]] = nodes2[j];
      self(self, i + 1);
      h.node_map.erase(nodes1[i]);
      node_used[j] = 0;
    }
  };
  nodes(nodes, 0);
  return best;
}

}  // namespace pgmatch
