#pragma once

// Property graphs: directed multigraphs whose nodes and edges carry a label
// and a partial key -> value property map. Ids, labels, keys and values are
// opaque strings compared by exact equality.

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pgmatch/errors.hpp"

namespace pgmatch {

struct Edge {
  std::string src;
  std::string tgt;
  std::string label;

  auto operator<=>(const Edge&) const = default;
};

// (owner id, key)
using PropKey = std::pair<std::string, std::string>;

class PropertyGraph {
 public:
  using NodeMap = std::map<std::string, std::string>;
  using EdgeMap = std::map<std::string, Edge>;
  using PropMap = std::map<PropKey, std::string>;

  PropertyGraph() = default;

  // Builders throw std::invalid_argument on a duplicate id within the same
  // map. Dangling endpoints and owners are reported by validate().
  PropertyGraph& add_node(std::string id, std::string label) {
    if (!nodes_.emplace(id, std::move(label)).second)
      throw std::invalid_argument("duplicate node id '" + id + "'");
    return *this;
  }

  PropertyGraph& add_edge(std::string id, std::string src, std::string tgt,
                          std::string label) {
    if (!edges_.emplace(id, Edge{std::move(src), std::move(tgt), std::move(label)})
             .second)
      throw std::invalid_argument("duplicate edge id '" + id + "'");
    return *this;
  }

  PropertyGraph& set_prop(std::string owner, std::string key, std::string value) {
    props_[{std::move(owner), std::move(key)}] = std::move(value);
    return *this;
  }

  const NodeMap& nodes() const noexcept { return nodes_; }
  const EdgeMap& edges() const noexcept { return edges_; }
  const PropMap& props() const noexcept { return props_; }

  bool has_node(const std::string& id) const { return nodes_.contains(id); }
  bool has_edge(const std::string& id) const { return edges_.contains(id); }
  bool has_element(const std::string& id) const {
    return has_node(id) || has_edge(id);
  }

  std::optional<std::string> prop(const std::string& owner,
                                  const std::string& key) const {
    auto it = props_.find({owner, key});
    if (it == props_.end()) return std::nullopt;
    return it->second;
  }

  // key -> value for one owner, in key order.
  std::map<std::string, std::string> props_of(const std::string& owner) const {
    std::map<std::string, std::string> out;
    for (auto it = props_.lower_bound({owner, std::string{}});
         it != props_.end() && it->first.first == owner; ++it)
      out.emplace(it->first.second, it->second);
    return out;
  }

  bool has_props(const std::string& owner) const {
    auto it = props_.lower_bound({owner, std::string{}});
    return it != props_.end() && it->first.first == owner;
  }

  bool empty() const noexcept { return nodes_.empty() && edges_.empty(); }

  bool operator==(const PropertyGraph&) const = default;

  // Raw access for the edit engine, which maintains validity itself.
  NodeMap& mutable_nodes() noexcept { return nodes_; }
  EdgeMap& mutable_edges() noexcept { return edges_; }
  PropMap& mutable_props() noexcept { return props_; }

 private:
  NodeMap nodes_;
  EdgeMap edges_;
  PropMap props_;
};

// A partial correspondence between the nodes and edges of two graphs. The
// edge map is explicit because parallel edges make it underdetermined by
// the node map.
struct Matching {
  std::map<std::string, std::string> node_map;
  std::map<std::string, std::string> edge_map;

  bool empty() const noexcept { return node_map.empty() && edge_map.empty(); }
  std::size_t size() const noexcept { return node_map.size() + edge_map.size(); }

  bool injective() const {
    std::set<std::string> seen;
    for (const auto& [_, y] : node_map)
      if (!seen.insert(y).second) return false;
    seen.clear();
    for (const auto& [_, y] : edge_map)
      if (!seen.insert(y).second) return false;
    return true;
  }

  // Requires injective().
  Matching inverse() const {
    Matching inv;
    for (const auto& [x, y] : node_map) inv.node_map.emplace(y, x);
    for (const auto& [x, y] : edge_map) inv.edge_map.emplace(y, x);
    return inv;
  }

  bool operator==(const Matching&) const = default;
};

// One entry per violated invariant, naming the offending id.
inline std::vector<std::string> validate(const PropertyGraph& g) {
  std::vector<std::string> out;
  for (const auto& [id, _] : g.edges())
    if (g.has_node(id)) out.push_back("id '" + id + "' is both a node and an edge");
  for (const auto& [id, e] : g.edges()) {
    if (!g.has_node(e.src))
      out.push_back("edge '" + id + "' has unknown source '" + e.src + "'");
    if (!g.has_node(e.tgt))
      out.push_back("edge '" + id + "' has unknown target '" + e.tgt + "'");
  }
  for (const auto& [key, _] : g.props())
    if (!g.has_element(key.first))
      out.push_back("property '" + key.second + "' owned by unknown id '" +
                    key.first + "'");
  return out;
}

// Violations of the Matching invariants relative to g1 and g2: ids must
// exist, both maps must be injective, and matched edges must have matched
// endpoints.
inline std::vector<std::string> matching_violations(const Matching& h,
                                                    const PropertyGraph& g1,
                                                    const PropertyGraph& g2) {
  std::vector<std::string> out;
  for (const auto& [x, y] : h.node_map) {
    if (!g1.has_node(x)) out.push_back("node '" + x + "' not in first graph");
    if (!g2.has_node(y)) out.push_back("node '" + y + "' not in second graph");
  }
  for (const auto& [x, y] : h.edge_map) {
    if (!g1.has_edge(x)) out.push_back("edge '" + x + "' not in first graph");
    if (!g2.has_edge(y)) out.push_back("edge '" + y + "' not in second graph");
  }
  if (!out.empty()) return out;
  if (!h.injective()) out.push_back("matching is not injective");
  for (const auto& [x, y] : h.edge_map) {
    const Edge& e1 = g1.edges().at(x);
    const Edge& e2 = g2.edges().at(y);
    auto s = h.node_map.find(e1.src);
    auto t = h.node_map.find(e1.tgt);
    if (s == h.node_map.end() || t == h.node_map.end() || s->second != e2.src ||
        t->second != e2.tgt)
      out.push_back("edge '" + x + "' -> '" + y + "' does not preserve endpoints");
  }
  return out;
}

namespace detail {

inline void require_known_ids(const Matching& h, const PropertyGraph& g1,
                              const PropertyGraph& g2) {
  for (const auto& [x, y] : h.node_map) {
    if (!g1.has_node(x)) throw UnknownId(x, "first graph nodes");
    if (!g2.has_node(y)) throw UnknownId(y, "second graph nodes");
  }
  for (const auto& [x, y] : h.edge_map) {
    if (!g1.has_edge(x)) throw UnknownId(x, "first graph edges");
    if (!g2.has_edge(y)) throw UnknownId(y, "second graph edges");
  }
}

// prop2(h(x), k) must equal prop1(x, k) wherever the latter is defined.
inline bool props_dominated(const PropertyGraph& g1, const std::string& x,
                            const PropertyGraph& g2, const std::string& y) {
  for (auto it = g1.props().lower_bound({x, std::string{}});
       it != g1.props().end() && it->first.first == x; ++it) {
    auto v = g2.prop(y, it->first.second);
    if (!v || *v != it->second) return false;
  }
  return true;
}

}  // namespace detail

// True iff h is a total, label-, endpoint- and property-preserving map from
// g1 to g2. Throws UnknownId when h mentions an id outside the graphs.
inline bool check_homomorphism(const Matching& h, const PropertyGraph& g1,
                               const PropertyGraph& g2) {
  detail::require_known_ids(h, g1, g2);
  if (h.node_map.size() != g1.nodes().size() ||
      h.edge_map.size() != g1.edges().size())
    return false;
  for (const auto& [v, label] : g1.nodes()) {
    const std::string& w = h.node_map.at(v);
    if (g2.nodes().at(w) != label) return false;
    if (!detail::props_dominated(g1, v, g2, w)) return false;
  }
  for (const auto& [e, edge] : g1.edges()) {
    const std::string& f = h.edge_map.at(e);
    const Edge& image = g2.edges().at(f);
    if (image.label != edge.label) return false;
    if (image.src != h.node_map.at(edge.src) || image.tgt != h.node_map.at(edge.tgt))
      return false;
    if (!detail::props_dominated(g1, e, g2, f)) return false;
  }
  return true;
}

inline bool check_isomorphism(const Matching& h, const PropertyGraph& g1,
                              const PropertyGraph& g2) {
  if (!check_homomorphism(h, g1, g2)) return false;
  if (!h.injective()) return false;
  return check_homomorphism(h.inverse(), g2, g1);
}

// Injective homomorphism; property dominance is one-way only.
inline bool check_subgraph_embedding(const Matching& h, const PropertyGraph& g1,
                                     const PropertyGraph& g2) {
  return check_homomorphism(h, g1, g2) && h.injective();
}

// Renames every matched element of g to its image under h. Used to compare
// the result of an edit script derived from h against the target graph.
inline PropertyGraph rename(const PropertyGraph& g, const Matching& h) {
  auto name = [&](const std::map<std::string, std::string>& m,
                  const std::string& id) -> const std::string& {
    auto it = m.find(id);
    return it == m.end() ? id : it->second;
  };
  auto element = [&](const std::string& id) -> const std::string& {
    if (g.has_node(id)) return name(h.node_map, id);
    return name(h.edge_map, id);
  };
  PropertyGraph out;
  for (const auto& [v, l] : g.nodes()) out.add_node(name(h.node_map, v), l);
  for (const auto& [e, edge] : g.edges())
    out.add_edge(name(h.edge_map, e), name(h.node_map, edge.src),
                 name(h.node_map, edge.tgt), edge.label);
  for (const auto& [key, value] : g.props())
    out.set_prop(element(key.first), key.second, value);
  return out;
}

inline std::set<std::string> element_ids(const PropertyGraph& g) {
  std::set<std::string> ids;
  for (const auto& [v, _] : g.nodes()) ids.insert(v);
  for (const auto& [e, _] : g.edges()) ids.insert(e);
  return ids;
}

inline bool disjoint_ids(const PropertyGraph& g1, const PropertyGraph& g2) {
  for (const auto& id : element_ids(g2))
    if (g1.has_element(id)) return false;
  return true;
}

// Renaming of g2's ids that clash with g1: each gets a "'" suffix until it
// is fresh. Ids that do not clash are left out of the map.
inline Matching disjoint_renaming(const PropertyGraph& g1, const PropertyGraph& g2) {
  std::set<std::string> taken = element_ids(g1);
  for (const auto& id : element_ids(g2)) taken.insert(id);
  Matching fresh;
  auto assign = [&](std::map<std::string, std::string>& m, const std::string& id) {
    if (!g1.has_element(id)) return;
    std::string n = id + "'";
    while (taken.contains(n)) n += "'";
    taken.insert(n);
    m.emplace(id, n);
  };
  for (const auto& [v, _] : g2.nodes()) assign(fresh.node_map, v);
  for (const auto& [e, _] : g2.edges()) assign(fresh.edge_map, e);
  return fresh;
}

inline PropertyGraph make_disjoint(const PropertyGraph& g1, const PropertyGraph& g2) {
  return rename(g2, disjoint_renaming(g1, g2));
}

}  // namespace pgmatch
