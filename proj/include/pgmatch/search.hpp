#pragma once

// Exact backtracking search for homomorphisms, isomorphisms and subgraph
// embeddings between property graphs.
//
// Variables are the nodes of the first graph, visited in a fixed order;
// each assignment immediately resolves the edges between the new node and
// the already-assigned ones (parallel edges are matched per endpoint pair).
// With soft properties the search becomes branch-and-bound over the number
// of mismatched properties instead of a hard dominance test.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "pgmatch/derive.hpp"
#include "pgmatch/detail/assignment.hpp"
#include "pgmatch/detail/indexed_graph.hpp"
#include "pgmatch/edit.hpp"
#include "pgmatch/graph.hpp"

namespace pgmatch {

enum class MatchKind { hom, iso, sub };
enum class PropertyMode { hard, soft };
enum class NodeOrder { lex, degree_desc };

struct SearchOptions {
  LabelMode labels = LabelMode::hard;  // edit distance only
  PropertyMode properties = PropertyMode::hard;
  CostModel costs = CostModel::unit();  // edit distance only
  std::chrono::milliseconds budget{30'000};
  NodeOrder order = NodeOrder::degree_desc;
};

struct MatchResult {
  Matching witness;
  // Mismatched properties of the witness; always 0 with hard properties.
  std::int64_t property_cost = 0;
};

namespace detail {

class Deadline {
 public:
  explicit Deadline(std::chrono::milliseconds budget)
      : end_(std::chrono::steady_clock::now() + budget) {}

  // Cheap enough to call on every search node.
  bool expired() {
    if (++ticks_ % 256 != 0) return false;
    return std::chrono::steady_clock::now() >= end_;
  }

 private:
  std::chrono::steady_clock::time_point end_;
  std::uint64_t ticks_ = 0;
};

// Most-constrained-first ordering: repeatedly take the node with the most
// already-ordered neighbours, then highest degree, then smallest id.
inline std::vector<int> variable_order(const IndexedGraph& g, NodeOrder order) {
  const int n = g.n();
  std::vector<int> out;
  out.reserve(n);
  if (order == NodeOrder::lex) {
    for (int v = 0; v < n; ++v) out.push_back(v);
    return out;
  }
  std::vector<int> links(n, 0);
  std::vector<char> placed(n, 0);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (placed[v]) continue;
      if (best < 0) {
        best = v;
        continue;
      }
      const int dv = g.out_deg[v] + g.in_deg[v];
      const int db = g.out_deg[best] + g.in_deg[best];
      if (links[v] > links[best] || (links[v] == links[best] && dv > db)) best = v;
    }
    placed[best] = 1;
    out.push_back(best);
    for (int e : g.out_edges[best]) ++links[g.tgt[e]];
    for (int e : g.in_edges[best]) ++links[g.src[e]];
  }
  return out;
}

inline bool dominated(const PropList& a, const PropList& b) {
  const PropDiff d = diff_props(a, b);
  return d.changed == 0 && d.only_left == 0;
}

class MatchSearch {
 public:
  MatchSearch(MatchKind kind, const PropertyGraph& g1, const PropertyGraph& g2,
              const SearchOptions& opts)
      : kind_(kind), soft_(opts.properties == PropertyMode::soft), deadline_(opts.budget) {
    Interners in;
    a_ = index_graph(g1, in);
    b_ = index_graph(g2, in);
    order_ = variable_order(a_, opts.order);
  }

  std::optional<MatchResult> run() {
    if (!feasible_counts()) return std::nullopt;
    assign_.assign(a_.n(), -1);
    preimage_.assign(b_.n(), -1);
    edge_assign_.assign(a_.m(), -1);
    extend(0, 0);
    if (!best_) return std::nullopt;
    return best_;
  }

 private:
  bool injective() const { return kind_ != MatchKind::hom; }

  bool feasible_counts() const {
    if (kind_ == MatchKind::hom) return true;
    auto histogram = [](const std::vector<int>& labels) {
      std::map<int, int> h;
      for (int l : labels) ++h[l];
      return h;
    };
    auto na = histogram(a_.node_label), nb = histogram(b_.node_label);
    auto ea = histogram(a_.edge_label), eb = histogram(b_.edge_label);
    if (kind_ == MatchKind::iso) return na == nb && ea == eb;
    auto fits = [](const std::map<int, int>& x, const std::map<int, int>& y) {
      for (const auto& [l, c] : x) {
        auto it = y.find(l);
        if (it == y.end() || it->second < c) return false;
      }
      return true;
    };
    return fits(na, nb) && fits(ea, eb);
  }

  // Soft property cost of matching element props `p` to `q`, as in the
  // approx-sub encodings.
  std::int64_t soft_cost(const PropList& p, const PropList& q) const {
    const PropDiff d = diff_props(p, q);
    std::int64_t c = d.changed + d.only_left;
    if (kind_ == MatchKind::iso) c += d.only_right;
    return c;
  }

  // Cost of matching element props, or kForbidden when hard properties fail.
  std::int64_t prop_cost(const PropList& p, const PropList& q) const {
    if (soft_) return soft_cost(p, q);
    if (kind_ == MatchKind::iso) return p == q ? 0 : kForbidden;
    return dominated(p, q) ? 0 : kForbidden;
  }

  std::int64_t node_cost(int v, int w) const {
    if (a_.node_label[v] != b_.node_label[w]) return kForbidden;
    if (injective()) {
      const bool ok = kind_ == MatchKind::iso
                          ? a_.out_deg[v] == b_.out_deg[w] && a_.in_deg[v] == b_.in_deg[w] &&
                                a_.loops[v] == b_.loops[w]
                          : a_.out_deg[v] <= b_.out_deg[w] && a_.in_deg[v] <= b_.in_deg[w] &&
                                a_.loops[v] <= b_.loops[w];
      if (!ok) return kForbidden;
    }
    return prop_cost(a_.node_props[v], b_.node_props[w]);
  }

  std::int64_t edge_cost(int e, int f) const {
    if (a_.edge_label[e] != b_.edge_label[f]) return kForbidden;
    return prop_cost(a_.edge_props[e], b_.edge_props[f]);
  }

  // Matches the parallel edges `ea` onto `eb`; appends the pairs to
  // `assigned` and returns the cost, or kForbidden.
  std::int64_t resolve_group(const std::vector<int>& ea, const std::vector<int>& eb,
                             std::vector<int>& assigned) {
    if (kind_ == MatchKind::iso && ea.size() != eb.size()) return kForbidden;
    if (ea.empty()) return 0;
    if (injective() && ea.size() > eb.size()) return kForbidden;
    std::int64_t total = 0;
    if (!injective()) {
      for (int e : ea) {
        int pick = -1;
        std::int64_t best = kForbidden;
        for (int f : eb) {
          const std::int64_t c = edge_cost(e, f);
          if (c < best) {
            best = c;
            pick = f;
          }
        }
        if (pick < 0) return kForbidden;
        edge_assign_[e] = pick;
        assigned.push_back(e);
        total += best;
      }
      return total;
    }
    std::vector<std::vector<std::int64_t>> c(ea.size(), std::vector<std::int64_t>(eb.size()));
    for (std::size_t i = 0; i < ea.size(); ++i)
      for (std::size_t j = 0; j < eb.size(); ++j) c[i][j] = edge_cost(ea[i], eb[j]);
    const Assignment sol = min_cost_assignment(c);
    if (sol.cost >= kForbidden) return kForbidden;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      edge_assign_[ea[i]] = eb[sol.row_to_col[i]];
      assigned.push_back(ea[i]);
    }
    return sol.cost;
  }

  // Resolves all edge groups between v (just mapped to w) and the nodes
  // assigned before it.
  std::int64_t resolve_edges(int v, int w, std::vector<int>& assigned) {
    std::int64_t total = 0;
    std::vector<int> partners;
    for (int e : a_.out_edges[v])
      if (assign_[a_.tgt[e]] >= 0) partners.push_back(a_.tgt[e]);
    for (int e : a_.in_edges[v])
      if (assign_[a_.src[e]] >= 0) partners.push_back(a_.src[e]);
    if (kind_ == MatchKind::iso) {
      for (int f : b_.out_edges[w])
        if (preimage_[b_.tgt[f]] >= 0) partners.push_back(preimage_[b_.tgt[f]]);
      for (int f : b_.in_edges[w])
        if (preimage_[b_.src[f]] >= 0) partners.push_back(preimage_[b_.src[f]]);
    }
    std::sort(partners.begin(), partners.end());
    partners.erase(std::unique(partners.begin(), partners.end()), partners.end());
    for (int u : partners) {
      const int x = assign_[u];
      std::int64_t c = resolve_group(a_.edges_between(v, u), b_.edges_between(w, x), assigned);
      if (c >= kForbidden) return kForbidden;
      total += c;
      if (u != v) {
        c = resolve_group(a_.edges_between(u, v), b_.edges_between(x, w), assigned);
        if (c >= kForbidden) return kForbidden;
        total += c;
      }
    }
    return total;
  }

  std::vector<int> candidates(int v) const {
    std::vector<int> out;
    for (int e : a_.in_edges[v]) {
      const int u = a_.src[e];
      if (u == v || assign_[u] < 0) continue;
      for (int f : b_.out_edges[assign_[u]]) out.push_back(b_.tgt[f]);
      break;
    }
    if (out.empty()) {
      for (int e : a_.out_edges[v]) {
        const int u = a_.tgt[e];
        if (u == v || assign_[u] < 0) continue;
        for (int f : b_.in_edges[assign_[u]]) out.push_back(b_.src[f]);
        break;
      }
    }
    const bool anchored = !out.empty() ||
                          std::any_of(a_.in_edges[v].begin(), a_.in_edges[v].end(),
                                      [&](int e) { return a_.src[e] != v && assign_[a_.src[e]] >= 0; }) ||
                          std::any_of(a_.out_edges[v].begin(), a_.out_edges[v].end(),
                                      [&](int e) { return a_.tgt[e] != v && assign_[a_.tgt[e]] >= 0; });
    if (!anchored)
      for (int w = 0; w < b_.n(); ++w) out.push_back(w);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Returns true to stop the whole search.
  bool extend(std::size_t depth, std::int64_t cost) {
    if (deadline_.expired()) throw SearchTimeout();
    if (depth == order_.size()) {
      record(cost);
      return !soft_ || cost == 0;
    }
    const int v = order_[depth];
    for (int w : candidates(v)) {
      if (injective() && preimage_[w] >= 0) continue;
      const std::int64_t nc = node_cost(v, w);
      if (nc >= kForbidden) continue;
      if (best_ && cost + nc >= best_->property_cost) continue;
      assign_[v] = w;
      if (injective()) preimage_[w] = v;
      std::vector<int> assigned;
      const std::int64_t ec = resolve_edges(v, w, assigned);
      bool stop = false;
      if (ec < kForbidden && !(best_ && cost + nc + ec >= best_->property_cost))
        stop = extend(depth + 1, cost + nc + ec);
      for (int e : assigned) edge_assign_[e] = -1;
      assign_[v] = -1;
      if (injective()) preimage_[w] = -1;
      if (stop) return true;
    }
    return false;
  }

  void record(std::int64_t cost) {
    MatchResult r;
    r.property_cost = cost;
    for (int v = 0; v < a_.n(); ++v) r.witness.node_map.emplace(a_.node_ids[v], b_.node_ids[assign_[v]]);
    for (int e = 0; e < a_.m(); ++e)
      r.witness.edge_map.emplace(a_.edge_ids[e], b_.edge_ids[edge_assign_[e]]);
    best_ = std::move(r);
  }

  MatchKind kind_;
  bool soft_;
  Deadline deadline_;
  IndexedGraph a_, b_;
  std::vector<int> order_;
  std::vector<int> assign_, preimage_, edge_assign_;
  std::optional<MatchResult> best_;
};

}  // namespace detail

// Finds a witness of the requested kind, or nullopt when none exists. With
// soft properties the witness minimizes the number of mismatched
// properties. Throws SearchTimeout when the budget runs out.
inline std::optional<MatchResult> find_match(MatchKind kind, const PropertyGraph& g1,
                                             const PropertyGraph& g2,
                                             const SearchOptions& opts = {}) {
  return detail::MatchSearch(kind, g1, g2, opts).run();
}

inline std::optional<Matching> search_hom(const PropertyGraph& g1, const PropertyGraph& g2,
                                          const SearchOptions& opts = {}) {
  auto r = find_match(MatchKind::hom, g1, g2, opts);
  if (!r) return std::nullopt;
  return std::move(r->witness);
}

inline std::optional<Matching> search_iso(const PropertyGraph& g1, const PropertyGraph& g2,
                                          const SearchOptions& opts = {}) {
  auto r = find_match(MatchKind::iso, g1, g2, opts);
  if (!r) return std::nullopt;
  return std::move(r->witness);
}

inline std::optional<Matching> search_sub(const PropertyGraph& g1, const PropertyGraph& g2,
                                          const SearchOptions& opts = {}) {
  auto r = find_match(MatchKind::sub, g1, g2, opts);
  if (!r) return std::nullopt;
  return std::move(r->witness);
}

}  // namespace pgmatch
