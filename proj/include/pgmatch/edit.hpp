#pragma once

// Edit operations on property graphs, their preconditions, scripts, and
// per-kind integer cost models.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "pgmatch/errors.hpp"
#include "pgmatch/graph.hpp"

namespace pgmatch {

struct InsertNode {
  std::string node, label;
  bool operator==(const InsertNode&) const = default;
};
struct InsertEdge {
  std::string edge, src, tgt, label;
  bool operator==(const InsertEdge&) const = default;
};
struct InsertProp {
  std::string owner, key, value;
  bool operator==(const InsertProp&) const = default;
};
struct DeleteNode {
  std::string node;
  bool operator==(const DeleteNode&) const = default;
};
struct DeleteEdge {
  std::string edge;
  bool operator==(const DeleteEdge&) const = default;
};
struct DeleteProp {
  std::string owner, key;
  bool operator==(const DeleteProp&) const = default;
};
struct UpdateProp {
  std::string owner, key, value;
  bool operator==(const UpdateProp&) const = default;
};
// In-place relabeling, only produced when labels are soft.
struct RelabelNode {
  std::string node, label;
  bool operator==(const RelabelNode&) const = default;
};
struct RelabelEdge {
  std::string edge, label;
  bool operator==(const RelabelEdge&) const = default;
};

using EditOp = std::variant<InsertNode, InsertEdge, InsertProp, DeleteNode, DeleteEdge,
                            DeleteProp, UpdateProp, RelabelNode, RelabelEdge>;

// Enumerators are listed in canonical phase order.
enum class OpKind : std::uint8_t {
  delete_prop,
  delete_edge,
  delete_node,
  update_prop,
  relabel_node,
  relabel_edge,
  insert_node,
  insert_edge,
  insert_prop,
};
inline constexpr std::size_t kOpKinds = 9;

inline OpKind kind_of(const EditOp& op) {
  struct Visitor {
    OpKind operator()(const InsertNode&) const { return OpKind::insert_node; }
    OpKind operator()(const InsertEdge&) const { return OpKind::insert_edge; }
    OpKind operator()(const InsertProp&) const { return OpKind::insert_prop; }
    OpKind operator()(const DeleteNode&) const { return OpKind::delete_node; }
    OpKind operator()(const DeleteEdge&) const { return OpKind::delete_edge; }
    OpKind operator()(const DeleteProp&) const { return OpKind::delete_prop; }
    OpKind operator()(const UpdateProp&) const { return OpKind::update_prop; }
    OpKind operator()(const RelabelNode&) const { return OpKind::relabel_node; }
    OpKind operator()(const RelabelEdge&) const { return OpKind::relabel_edge; }
  };
  return std::visit(Visitor{}, op);
}

// Short names used by the text format.
inline constexpr std::array<std::string_view, kOpKinds> kOpNames = {
    "delP", "delE", "delV", "updP", "relV", "relE", "insV", "insE", "insP"};

inline std::string_view op_name(OpKind k) { return kOpNames[static_cast<std::size_t>(k)]; }

inline std::optional<OpKind> op_kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kOpKinds; ++i)
    if (kOpNames[i] == name) return static_cast<OpKind>(i);
  return std::nullopt;
}

// Human-readable rendering, e.g. "insE(e1,v1,v2,knows)".
inline std::string describe(const EditOp& op) {
  struct Visitor {
    std::string operator()(const InsertNode& o) const { return "insV(" + o.node + "," + o.label + ")"; }
    std::string operator()(const InsertEdge& o) const {
      return "insE(" + o.edge + "," + o.src + "," + o.tgt + "," + o.label + ")";
    }
    std::string operator()(const InsertProp& o) const {
      return "insP(" + o.owner + "," + o.key + "," + o.value + ")";
    }
    std::string operator()(const DeleteNode& o) const { return "delV(" + o.node + ")"; }
    std::string operator()(const DeleteEdge& o) const { return "delE(" + o.edge + ")"; }
    std::string operator()(const DeleteProp& o) const { return "delP(" + o.owner + "," + o.key + ")"; }
    std::string operator()(const UpdateProp& o) const {
      return "updP(" + o.owner + "," + o.key + "," + o.value + ")";
    }
    std::string operator()(const RelabelNode& o) const { return "relV(" + o.node + "," + o.label + ")"; }
    std::string operator()(const RelabelEdge& o) const { return "relE(" + o.edge + "," + o.label + ")"; }
  };
  return std::visit(Visitor{}, op);
}

// An ordered list of edit operations. At most one op may carry the rewrite
// mark; see rewrite.hpp.
struct EditScript {
  std::vector<EditOp> ops;
  std::optional<std::size_t> mark;

  EditScript() = default;
  EditScript(std::vector<EditOp> o) : ops(std::move(o)) {}  // NOLINT: implicit by intent
  EditScript(std::initializer_list<EditOp> o) : ops(o) {}

  std::size_t size() const noexcept { return ops.size(); }
  bool empty() const noexcept { return ops.empty(); }

  bool operator==(const EditScript&) const = default;
};

// Non-negative integer weight per operation kind. Rational weights must be
// scaled to integers by the caller.
struct CostModel {
  std::array<std::int64_t, kOpKinds> weight{1, 1, 1, 1, 1, 1, 1, 1, 1};

  std::int64_t operator[](OpKind k) const { return weight[static_cast<std::size_t>(k)]; }
  std::int64_t& operator[](OpKind k) { return weight[static_cast<std::size_t>(k)]; }

  static CostModel unit() { return {}; }

  // Second contest configuration: node sub/ins/del 2/4/4, edge sub/ins/del
  // 1/2/2. Properties are not part of that objective, so they are free.
  static CostModel gedc() {
    CostModel cm;
    cm[OpKind::relabel_node] = 2;
    cm[OpKind::insert_node] = 4;
    cm[OpKind::delete_node] = 4;
    cm[OpKind::relabel_edge] = 1;
    cm[OpKind::insert_edge] = 2;
    cm[OpKind::delete_edge] = 2;
    cm[OpKind::insert_prop] = 0;
    cm[OpKind::delete_prop] = 0;
    cm[OpKind::update_prop] = 0;
    return cm;
  }

  bool valid() const {
    for (auto w : weight)
      if (w < 0) return false;
    return true;
  }

  bool operator==(const CostModel&) const = default;
};

namespace detail {

[[noreturn]] inline void violated(const EditOp& op, const std::string& why) {
  throw PreconditionViolated(describe(op), why);
}

inline bool has_incident_edge(const PropertyGraph& g, const std::string& v) {
  for (const auto& [_, e] : g.edges())
    if (e.src == v || e.tgt == v) return true;
  return false;
}

// Applies op to g in place after checking its precondition.
inline void apply_in_place(PropertyGraph& g, const EditOp& op) {
  auto& nodes = g.mutable_nodes();
  auto& edges = g.mutable_edges();
  auto& props = g.mutable_props();
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, InsertNode>) {
          if (g.has_element(o.node)) violated(op, "id already exists");
          nodes.emplace(o.node, o.label);
        } else if constexpr (std::is_same_v<T, InsertEdge>) {
          if (g.has_element(o.edge)) violated(op, "id already exists");
          if (!g.has_node(o.src)) violated(op, "source node does not exist");
          if (!g.has_node(o.tgt)) violated(op, "target node does not exist");
          edges.emplace(o.edge, Edge{o.src, o.tgt, o.label});
        } else if constexpr (std::is_same_v<T, InsertProp>) {
          if (!g.has_element(o.owner)) violated(op, "owner does not exist");
          if (!props.emplace(PropKey{o.owner, o.key}, o.value).second)
            violated(op, "property already exists");
        } else if constexpr (std::is_same_v<T, DeleteNode>) {
          if (!g.has_node(o.node)) violated(op, "node does not exist");
          if (has_incident_edge(g, o.node)) violated(op, "node is an edge endpoint");
          if (g.has_props(o.node)) violated(op, "node has properties");
          nodes.erase(o.node);
        } else if constexpr (std::is_same_v<T, DeleteEdge>) {
          if (!g.has_edge(o.edge)) violated(op, "edge does not exist");
          if (g.has_props(o.edge)) violated(op, "edge has properties");
          edges.erase(o.edge);
        } else if constexpr (std::is_same_v<T, DeleteProp>) {
          if (props.erase(PropKey{o.owner, o.key}) == 0)
            violated(op, "property does not exist");
        } else if constexpr (std::is_same_v<T, UpdateProp>) {
          auto it = props.find(PropKey{o.owner, o.key});
          if (it == props.end()) violated(op, "property does not exist");
          it->second = o.value;
        } else if constexpr (std::is_same_v<T, RelabelNode>) {
          auto it = nodes.find(o.node);
          if (it == nodes.end()) violated(op, "node does not exist");
          it->second = o.label;
        } else if constexpr (std::is_same_v<T, RelabelEdge>) {
          auto it = edges.find(o.edge);
          if (it == edges.end()) violated(op, "edge does not exist");
          it->second.label = o.label;
        }
      },
      op);
}

}  // namespace detail

// Returns op(g). Throws PreconditionViolated when op is not allowed on g.
inline PropertyGraph apply_op(const PropertyGraph& g, const EditOp& op) {
  PropertyGraph out = g;
  detail::apply_in_place(out, op);
  return out;
}

// Left-to-right fold of apply_op. A failure reports the index of the op.
inline PropertyGraph apply_script(const PropertyGraph& g, const EditScript& script) {
  PropertyGraph out = g;
  for (std::size_t i = 0; i < script.ops.size(); ++i) {
    try {
      detail::apply_in_place(out, script.ops[i]);
    } catch (const PreconditionViolated& e) {
      throw PreconditionViolated(e.op(), e.reason(), i);
    }
  }
  return out;
}

inline bool is_valid_script(const PropertyGraph& g, const EditScript& script) {
  try {
    apply_script(g, script);
    return true;
  } catch (const PreconditionViolated&) {
    return false;
  }
}

inline std::int64_t script_cost(const EditScript& script, const CostModel& cm) {
  std::int64_t total = 0;
  for (const auto& op : script.ops) total += cm[kind_of(op)];
  return total;
}

// True iff the op kinds appear in non-decreasing phase order:
// delP* delE* delV* updP* relV* relE* insV* insE* insP*.
inline bool is_canonical(const EditScript& script) {
  for (std::size_t i = 1; i < script.ops.size(); ++i)
    if (kind_of(script.ops[i]) < kind_of(script.ops[i - 1])) return false;
  return true;
}

}  // namespace pgmatch
