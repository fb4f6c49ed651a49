#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pgmatch/graph.hpp"

namespace pgmatch::detail {

class Interner {
 public:
  int get(const std::string& s) {
    auto [it, fresh] = ids_.emplace(s, static_cast<int>(ids_.size()));
    return it->second;
  }

 private:
  std::map<std::string, int> ids_;
};

using PropList = std::vector<std::pair<int, int>>;  // (key, value), sorted by key

// Dense view of a PropertyGraph for the search engines. Node and edge
// indices follow lexicographic id order.
struct IndexedGraph {
  std::vector<std::string> node_ids, edge_ids;
  std::vector<int> node_label, edge_label;
  std::vector<int> src, tgt;
  std::vector<PropList> node_props, edge_props;
  std::vector<std::vector<int>> out_edges, in_edges;
  std::vector<std::vector<int>> between;  // between[s * n + t]: edges s -> t
  std::vector<int> out_deg, in_deg, loops;

  int n() const { return static_cast<int>(node_ids.size()); }
  int m() const { return static_cast<int>(edge_ids.size()); }
  const std::vector<int>& edges_between(int s, int t) const { return between[s * n() + t]; }
};

struct Interners {
  Interner labels, keys, values;
};

inline IndexedGraph index_graph(const PropertyGraph& g, Interners& in) {
  IndexedGraph ig;
  std::map<std::string, int> node_index, edge_index;
  for (const auto& [v, label] : g.nodes()) {
    node_index.emplace(v, static_cast<int>(ig.node_ids.size()));
    ig.node_ids.push_back(v);
    ig.node_label.push_back(in.labels.get(label));
  }
  const int n = ig.n();
  ig.node_props.resize(n);
  ig.out_edges.resize(n);
  ig.in_edges.resize(n);
  ig.between.resize(static_cast<std::size_t>(n) * n);
  ig.out_deg.assign(n, 0);
  ig.in_deg.assign(n, 0);
  ig.loops.assign(n, 0);
  for (const auto& [id, e] : g.edges()) {
    const int idx = static_cast<int>(ig.edge_ids.size());
    edge_index.emplace(id, idx);
    ig.edge_ids.push_back(id);
    ig.edge_label.push_back(in.labels.get(e.label));
    const int s = node_index.at(e.src);
    const int t = node_index.at(e.tgt);
    ig.src.push_back(s);
    ig.tgt.push_back(t);
    ig.out_edges[s].push_back(idx);
    ig.in_edges[t].push_back(idx);
    ig.between[s * n + t].push_back(idx);
    ++ig.out_deg[s];
    ++ig.in_deg[t];
    if (s == t) ++ig.loops[s];
  }
  ig.edge_props.resize(ig.edge_ids.size());
  for (const auto& [key, value] : g.props()) {
    const auto item = std::make_pair(in.keys.get(key.second), in.values.get(value));
    if (auto it = node_index.find(key.first); it != node_index.end())
      ig.node_props[it->second].push_back(item);
    else
      ig.edge_props[edge_index.at(key.first)].push_back(item);
  }
  for (auto& p : ig.node_props) std::sort(p.begin(), p.end());
  for (auto& p : ig.edge_props) std::sort(p.begin(), p.end());
  return ig;
}

// Number of keys equal / differing / only-left / only-right between two
// sorted property lists.
struct PropDiff {
  int same = 0, changed = 0, only_left = 0, only_right = 0;
};

inline PropDiff diff_props(const PropList& a, const PropList& b) {
  PropDiff d;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      ++d.only_left;
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      ++d.only_right;
      ++j;
    } else {
      if (a[i].second == b[j].second) ++d.same;
      else ++d.changed;
      ++i;
      ++j;
    }
  }
  return d;
}

}  // namespace pgmatch::detail
