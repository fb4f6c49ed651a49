#pragma once

// Reading an edit script off a partial isomorphism: delete what is
// unmatched in the first graph, update differing property values, relabel
// (when allowed), then insert what is unmatched in the second graph.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pgmatch/edit.hpp"
#include "pgmatch/graph.hpp"

namespace pgmatch {

enum class LabelMode { hard, relabel };

struct DerivedScript {
  EditScript script;
  std::int64_t cost = 0;
};

namespace detail {

inline const std::string* image_of(const Matching& h, const std::string& x) {
  if (auto it = h.node_map.find(x); it != h.node_map.end()) return &it->second;
  if (auto it = h.edge_map.find(x); it != h.edge_map.end()) return &it->second;
  return nullptr;
}

template <class Op>
void sort_by_owner(std::vector<Op>& ops) {
  std::sort(ops.begin(), ops.end(), [](const Op& a, const Op& b) {
    return std::tie(a.owner, a.key) < std::tie(b.owner, b.key);
  });
}

}  // namespace detail

// True when some unmatched element of g2 has the id of a matched element
// of g1; the derived script could not insert it.
inline bool inserts_clash(const Matching& h, const PropertyGraph& g1, const PropertyGraph& g2) {
  std::set<std::string> image;
  for (const auto& [_, y] : h.node_map) image.insert(y);
  for (const auto& [_, y] : h.edge_map) image.insert(y);
  auto kept = [&](const std::string& id) {
    return (g1.has_node(id) && h.node_map.contains(id)) ||
           (g1.has_edge(id) && h.edge_map.contains(id));
  };
  for (const auto& [y, _] : g2.nodes())
    if (!image.contains(y) && kept(y)) return true;
  for (const auto& [y, _] : g2.edges())
    if (!image.contains(y) && kept(y)) return true;
  return false;
}

// The matched elements keep their ids from g1, so the postcondition is
// rename(apply_script(g1, script), h) == g2. Ids inserted from g2 must not
// collide with ids that g1 keeps; see make_disjoint().
inline DerivedScript script_from_matching(const Matching& h, const PropertyGraph& g1,
                                          const PropertyGraph& g2, LabelMode mode,
                                          const CostModel& cm) {
  if (auto bad = matching_violations(h, g1, g2); !bad.empty())
    throw InvalidMatching(bad.front());
  if (mode == LabelMode::hard) {
    for (const auto& [x, y] : h.node_map)
      if (g1.nodes().at(x) != g2.nodes().at(y))
        throw InvalidMatching("node '" + x + "' -> '" + y + "' changes the label");
    for (const auto& [x, y] : h.edge_map)
      if (g1.edges().at(x).label != g2.edges().at(y).label)
        throw InvalidMatching("edge '" + x + "' -> '" + y + "' changes the label");
  }

  if (inserts_clash(h, g1, g2))
    throw InvalidMatching("an inserted id clashes with an id kept from the first graph");

  std::set<std::string> node_image, edge_image;
  std::map<std::string, std::string> preimage;
  for (const auto& [x, y] : h.node_map) {
    node_image.insert(y);
    preimage.emplace(y, x);
  }
  for (const auto& [x, y] : h.edge_map) {
    edge_image.insert(y);
    preimage.emplace(y, x);
  }

  EditScript out;
  auto& ops = out.ops;

  // Deletions.
  std::vector<UpdateProp> updates;
  for (const auto& [key, value] : g1.props()) {
    const auto& [x, k] = key;
    const std::string* y = detail::image_of(h, x);
    if (!y) {
      ops.push_back(DeleteProp{x, k});
      continue;
    }
    auto v2 = g2.prop(*y, k);
    if (!v2)
      ops.push_back(DeleteProp{x, k});
    else if (*v2 != value)
      updates.push_back(UpdateProp{x, k, *v2});
  }
  for (const auto& [e, _] : g1.edges())
    if (!h.edge_map.contains(e)) ops.push_back(DeleteEdge{e});
  for (const auto& [v, _] : g1.nodes())
    if (!h.node_map.contains(v)) ops.push_back(DeleteNode{v});

  // In-place changes. g1 props are visited in (owner, key) order already.
  for (auto& u : updates) ops.push_back(std::move(u));
  for (const auto& [x, y] : h.node_map)
    if (g1.nodes().at(x) != g2.nodes().at(y)) ops.push_back(RelabelNode{x, g2.nodes().at(y)});
  for (const auto& [x, y] : h.edge_map)
    if (g1.edges().at(x).label != g2.edges().at(y).label)
      ops.push_back(RelabelEdge{x, g2.edges().at(y).label});

  // Insertions. Endpoints and owners that were matched keep their g1 ids.
  auto local = [&](const std::string& y) -> const std::string& {
    auto it = preimage.find(y);
    return it == preimage.end() ? y : it->second;
  };
  for (const auto& [y, label] : g2.nodes())
    if (!node_image.contains(y)) ops.push_back(InsertNode{y, label});
  for (const auto& [y, e] : g2.edges())
    if (!edge_image.contains(y)) ops.push_back(InsertEdge{y, local(e.src), local(e.tgt), e.label});
  std::vector<InsertProp> inserts;
  for (const auto& [key, value] : g2.props()) {
    const auto& [y, k] = key;
    auto it = preimage.find(y);
    if (it == preimage.end())
      inserts.push_back(InsertProp{y, k, value});
    else if (!g1.prop(it->second, k))
      inserts.push_back(InsertProp{it->second, k, value});
  }
  detail::sort_by_owner(inserts);
  for (auto& p : inserts) ops.push_back(std::move(p));

  return {out, script_cost(out, cm)};
}

}  // namespace pgmatch
