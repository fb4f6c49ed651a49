#pragma once

// Test-side reference implementations and random instance generators.
// Nothing here calls into the search engines or the script derivation of
// the library; the oracles re-derive their answers from the definitions.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pgmatch/edit.hpp"
#include "pgmatch/graph.hpp"

namespace pgtest {

using pgmatch::Edge;
using pgmatch::Matching;
using pgmatch::PropertyGraph;
using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

template <class C>
const auto& pick_one(Rng& rng, const C& c) {
  auto it = c.begin();
  std::advance(it, pick(rng, 0, static_cast<int>(c.size()) - 1));
  return *it;
}

// ---------------------------------------------------------------------------
// Random graphs

struct RandomSpec {
  int min_nodes = 0, max_nodes = 5;
  double edge_p = 0.3;
  double parallel_p = 0.1;  // chance of a second edge on a sampled pair
  bool self_loops = true;
  int max_props = 2;
  std::vector<std::string> labels{"a", "b"};
  std::vector<std::string> keys{"k", "m"};
  std::vector<std::string> values{"x", "y"};
  std::string node_prefix = "v", edge_prefix = "e";
};

inline void add_random_props(Rng& rng, PropertyGraph& g, const std::string& owner, const RandomSpec& s) {
  const int n = pick(rng, 0, std::min<int>(s.max_props, static_cast<int>(s.keys.size())));
  std::vector<std::string> keys = s.keys;
  std::shuffle(keys.begin(), keys.end(), rng);
  for (int i = 0; i < n; ++i) g.set_prop(owner, keys[i], pick_one(rng, s.values));
}

inline PropertyGraph random_graph(Rng& rng, const RandomSpec& s = {}) {
  PropertyGraph g;
  const int n = pick(rng, s.min_nodes, s.max_nodes);
  std::vector<std::string> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back(s.node_prefix + std::to_string(i));
    g.add_node(nodes.back(), pick_one(rng, s.labels));
  }
  int next = 0;
  auto add_edge = [&](const std::string& a, const std::string& b) {
    g.add_edge(s.edge_prefix + std::to_string(next++), a, b, pick_one(rng, s.labels));
  };
  for (const auto& a : nodes)
    for (const auto& b : nodes) {
      if (a == b && !s.self_loops) continue;
      if (!coin(rng, s.edge_p)) continue;
      add_edge(a, b);
      if (coin(rng, s.parallel_p)) add_edge(a, b);
    }
  for (const auto& v : nodes) add_random_props(rng, g, v, s);
  for (int i = 0; i < next; ++i) add_random_props(rng, g, s.edge_prefix + std::to_string(i), s);
  return g;
}

inline RandomSpec second_side(RandomSpec s) {
  s.node_prefix = "w";
  s.edge_prefix = "f";
  return s;
}

// ---------------------------------------------------------------------------
// Brute-force matching

enum class Kind { hom, iso, sub };

namespace detail {

inline bool props_subset(const PropertyGraph& g1, const std::string& x, const PropertyGraph& g2,
                         const std::string& y) {
  for (const auto& [key, v] : g1.props())
    if (key.first == x) {
      auto it = g2.props().find({y, key.second});
      if (it == g2.props().end() || it->second != v) return false;
    }
  return true;
}

}  // namespace detail

// Every node map (injective for iso/sub), then every edge map, checked
// clause by clause. Returns the first witness in enumeration order.
inline std::optional<Matching> brute_force_match(Kind kind, const PropertyGraph& g1,
                                                 const PropertyGraph& g2) {
  std::vector<std::string> v1, v2, e1, e2;
  for (const auto& [v, _] : g1.nodes()) v1.push_back(v);
  for (const auto& [v, _] : g2.nodes()) v2.push_back(v);
  for (const auto& [e, _] : g1.edges()) e1.push_back(e);
  for (const auto& [e, _] : g2.edges()) e2.push_back(e);
  const bool injective = kind != Kind::hom;
  if (kind == Kind::iso && (v1.size() != v2.size() || e1.size() != e2.size())) return std::nullopt;

  Matching h;
  std::set<std::string> used_nodes, used_edges;
  std::optional<Matching> found;

  auto final_check = [&]() {
    for (const auto& [x, y] : h.node_map)
      if (!detail::props_subset(g1, x, g2, y)) return false;
    for (const auto& [x, y] : h.edge_map)
      if (!detail::props_subset(g1, x, g2, y)) return false;
    if (kind == Kind::iso) {
      for (const auto& [x, y] : h.node_map)
        if (!detail::props_subset(g2, y, g1, x)) return false;
      for (const auto& [x, y] : h.edge_map)
        if (!detail::props_subset(g2, y, g1, x)) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> edges = [&](std::size_t i) {
    if (found) return;
    if (i == e1.size()) {
      if (final_check()) found = h;
      return;
    }
    const Edge& e = g1.edges().at(e1[i]);
    for (const auto& f_id : e2) {
      if (injective && used_edges.contains(f_id)) continue;
      const Edge& f = g2.edges().at(f_id);
      if (f.label != e.label || f.src != h.node_map[e.src] || f.tgt != h.node_map[e.tgt]) continue;
      h.edge_map[e1[i]] = f_id;
      used_edges.insert(f_id);
      edges(i + 1);
      used_edges.erase(f_id);
      h.edge_map.erase(e1[i]);
      if (found) return;
    }
  };
  std::function<void(std::size_t)> nodes = [&](std::size_t i) {
    if (found) return;
    if (i == v1.size()) return edges(0);
    for (const auto& w : v2) {
      if (injective && used_nodes.contains(w)) continue;
      if (g1.nodes().at(v1[i]) != g2.nodes().at(w)) continue;
      h.node_map[v1[i]] = w;
      used_nodes.insert(w);
      nodes(i + 1);
      used_nodes.erase(w);
      h.node_map.erase(v1[i]);
      if (found) return;
    }
  };
  nodes(0);
  return found;
}

// ---------------------------------------------------------------------------
// Edit costs straight from the delete/insert/update/relabel rules

struct CostAtoms {
  std::set<std::string> delete_node, insert_node, delete_edge, insert_edge;
  std::set<std::pair<std::string, std::string>> update_prop, delete_prop, insert_prop;
  std::set<std::string> relabel_node, relabel_edge;

  std::int64_t cost(const pgmatch::CostModel& cm) const {
    using pgmatch::OpKind;
    auto w = [&](OpKind k, std::size_t n) { return cm[k] * static_cast<std::int64_t>(n); };
    return w(OpKind::delete_node, delete_node.size()) + w(OpKind::insert_node, insert_node.size()) +
           w(OpKind::delete_edge, delete_edge.size()) + w(OpKind::insert_edge, insert_edge.size()) +
           w(OpKind::update_prop, update_prop.size()) + w(OpKind::delete_prop, delete_prop.size()) +
           w(OpKind::insert_prop, insert_prop.size()) +
           w(OpKind::relabel_node, relabel_node.size()) +
           w(OpKind::relabel_edge, relabel_edge.size());
  }
};

// One rule at a time: the head set of each rule given h.
inline CostAtoms cost_atoms(const Matching& h, const PropertyGraph& g1, const PropertyGraph& g2,
                            bool relabel) {
  std::map<std::string, std::string> fwd, back;
  for (const auto& [x, y] : h.node_map) fwd[x] = y, back[y] = x;
  for (const auto& [x, y] : h.edge_map) fwd[x] = y, back[y] = x;
  CostAtoms a;
  for (const auto& [x, _] : g1.nodes())
    if (!fwd.contains(x)) a.delete_node.insert(x);
  for (const auto& [y, _] : g2.nodes())
    if (!back.contains(y)) a.insert_node.insert(y);
  for (const auto& [x, _] : g1.edges())
    if (!fwd.contains(x)) a.delete_edge.insert(x);
  for (const auto& [y, _] : g2.edges())
    if (!back.contains(y)) a.insert_edge.insert(y);
  for (const auto& [key, v1] : g1.props()) {
    const auto& [x, k] = key;
    if (auto it = fwd.find(x); it != fwd.end()) {
      auto p2 = g2.props().find({it->second, k});
      if (p2 == g2.props().end()) a.delete_prop.insert(key);
      else if (p2->second != v1) a.update_prop.insert(key);
    }
    if (a.delete_node.contains(x) || a.delete_edge.contains(x)) a.delete_prop.insert(key);
  }
  for (const auto& [key, v2] : g2.props()) {
    const auto& [y, k] = key;
    if (auto it = back.find(y); it != back.end() && !g1.props().contains({it->second, k}))
      a.insert_prop.insert(key);
    if (a.insert_node.contains(y) || a.insert_edge.contains(y)) a.insert_prop.insert(key);
  }
  if (relabel) {
    for (const auto& [x, y] : h.node_map)
      if (g1.nodes().at(x) != g2.nodes().at(y)) a.relabel_node.insert(x);
    for (const auto& [x, y] : h.edge_map)
      if (g1.edges().at(x).label != g2.edges().at(y).label) a.relabel_edge.insert(x);
  }
  return a;
}

// Minimum of cost_atoms(h).cost over every partial isomorphism h. Ids of
// the two graphs must be disjoint.
inline std::int64_t brute_force_ged(const PropertyGraph& g1, const PropertyGraph& g2, bool relabel,
                                    const pgmatch::CostModel& cm) {
  std::vector<std::string> v1, v2, e1, e2;
  for (const auto& [v, _] : g1.nodes()) v1.push_back(v);
  for (const auto& [v, _] : g2.nodes()) v2.push_back(v);
  for (const auto& [e, _] : g1.edges()) e1.push_back(e);
  for (const auto& [e, _] : g2.edges()) e2.push_back(e);
  Matching h;
  std::set<std::string> used;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::function<void(std::size_t)> edges = [&](std::size_t i) {
    if (i == e1.size()) {
      best = std::min(best, cost_atoms(h, g1, g2, relabel).cost(cm));
      return;
    }
    edges(i + 1);
    const Edge& e = g1.edges().at(e1[i]);
    if (!h.node_map.contains(e.src) || !h.node_map.contains(e.tgt)) return;
    for (const auto& f_id : e2) {
      const Edge& f = g2.edges().at(f_id);
      if (used.contains(f_id) || f.src != h.node_map[e.src] || f.tgt != h.node_map[e.tgt]) continue;
      if (!relabel && f.label != e.label) continue;
      used.insert(f_id);
      h.edge_map[e1[i]] = f_id;
      edges(i + 1);
      h.edge_map.erase(e1[i]);
      used.erase(f_id);
    }
  };
  std::function<void(std::size_t)> nodes = [&](std::size_t i) {
    if (i == v1.size()) return edges(0);
    nodes(i + 1);
    for (const auto& w : v2) {
      if (used.contains(w)) continue;
      if (!relabel && g1.nodes().at(v1[i]) != g2.nodes().at(w)) continue;
      used.insert(w);
      h.node_map[v1[i]] = w;
      nodes(i + 1);
      h.node_map.erase(v1[i]);
      used.erase(w);
    }
  };
  nodes(0);
  return best;
}

// ---------------------------------------------------------------------------
// Random partial isomorphisms

inline Matching random_partial_iso(Rng& rng, const PropertyGraph& g1, const PropertyGraph& g2,
                                   bool relabel, double node_p = 0.7, double edge_p = 0.8) {
  Matching h;
  std::vector<std::string> v1;
  for (const auto& [v, _] : g1.nodes()) v1.push_back(v);
  std::shuffle(v1.begin(), v1.end(), rng);
  std::set<std::string> used;
  for (const auto& x : v1) {
    if (!coin(rng, node_p)) continue;
    std::vector<std::string> cand;
    for (const auto& [y, l] : g2.nodes())
      if (!used.contains(y) && (relabel || l == g1.nodes().at(x))) cand.push_back(y);
    if (cand.empty()) continue;
    const auto& y = pick_one(rng, cand);
    used.insert(y);
    h.node_map[x] = y;
  }
  std::vector<std::string> e1;
  for (const auto& [e, _] : g1.edges()) e1.push_back(e);
  std::shuffle(e1.begin(), e1.end(), rng);
  for (const auto& x : e1) {
    const Edge& e = g1.edges().at(x);
    if (!h.node_map.contains(e.src) || !h.node_map.contains(e.tgt) || !coin(rng, edge_p)) continue;
    std::vector<std::string> cand;
    for (const auto& [y, f] : g2.edges())
      if (!used.contains(y) && f.src == h.node_map[e.src] && f.tgt == h.node_map[e.tgt] &&
          (relabel || f.label == e.label))
        cand.push_back(y);
    if (cand.empty()) continue;
    const auto& y = pick_one(rng, cand);
    used.insert(y);
    h.edge_map[x] = y;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Random valid edit scripts

struct ScriptSpec {
  int max_len = 12;
  bool relabels = true;
  std::vector<std::string> node_ids{"v0", "v1", "v2", "v3", "n0", "n1"};
  std::vector<std::string> edge_ids{"e0", "e1", "e2", "e3", "d0", "d1"};
  std::vector<std::string> labels{"a", "b"};
  std::vector<std::string> keys{"k", "m"};
  std::vector<std::string> values{"x", "y"};
};

// Builds a script op by op, each chosen among the operations whose
// precondition holds on the current graph. Ids are drawn from small pools
// so that elements get deleted and re-inserted.
inline pgmatch::EditScript random_script(Rng& rng, const PropertyGraph& g0, const ScriptSpec& s = {}) {
  using namespace pgmatch;
  PropertyGraph g = g0;
  EditScript out;
  const int len = pick(rng, 0, s.max_len);
  for (int step = 0; step < len; ++step) {
    std::vector<EditOp> options;
    for (const auto& v : s.node_ids)
      if (!g.has_element(v)) options.push_back(InsertNode{v, pick_one(rng, s.labels)});
    if (!g.nodes().empty())
      for (const auto& e : s.edge_ids)
        if (!g.has_element(e))
          options.push_back(InsertEdge{e, pick_one(rng, g.nodes()).first,
                                       pick_one(rng, g.nodes()).first, pick_one(rng, s.labels)});
    for (const auto& id : pgmatch::element_ids(g))
      for (const auto& k : s.keys) {
        auto v = g.prop(id, k);
        if (!v) {
          options.push_back(InsertProp{id, k, pick_one(rng, s.values)});
        } else {
          options.push_back(DeleteProp{id, k});
          options.push_back(UpdateProp{id, k, pick_one(rng, s.values)});
        }
      }
    for (const auto& [v, _] : g.nodes()) {
      bool free = !g.has_props(v);
      for (const auto& [id, e] : g.edges()) free = free && e.src != v && e.tgt != v;
      if (free) options.push_back(DeleteNode{v});
      if (s.relabels) options.push_back(RelabelNode{v, pick_one(rng, s.labels)});
    }
    for (const auto& [e, _] : g.edges()) {
      if (!g.has_props(e)) options.push_back(DeleteEdge{e});
      if (s.relabels) options.push_back(RelabelEdge{e, pick_one(rng, s.labels)});
    }
    if (options.empty()) break;
    const EditOp op = pick_one(rng, options);
    g = apply_op(g, op);
    out.ops.push_back(op);
  }
  return out;
}

}  // namespace pgtest
