#pragma once

// Canonicalization of edit scripts by a marked-operation rewrite system.
//
// A marked op is pushed rightwards past ops of earlier canonical phases,
// cancels against its inverse, or absorbs a later update of the element it
// created. When no rule applies the mark is dropped. Every step either moves
// the mark one position right or removes it, so the length of the marked
// suffix strictly decreases and rewriting terminates.

#include <cstddef>
#include <utility>

#include "pgmatch/edit.hpp"

namespace pgmatch {

// Length of the suffix starting at the marked op, or 0 when unmarked.
inline std::size_t star_length(const EditScript& s) {
  return s.mark ? s.ops.size() - *s.mark : 0;
}

namespace detail {

enum class Step { swap, drop_marked, cancel_both, absorb_next, unmark };

// Decides the first matching rule for `marked; next`.
inline Step rewrite_rule(const EditOp& marked, const EditOp& next) {
  const OpKind a = kind_of(marked);
  const OpKind b = kind_of(next);

  auto same_prop = [](const auto& x, const auto& y) {
    return x.owner == y.owner && x.key == y.key;
  };

  switch (a) {
    case OpKind::delete_edge:
      if (b == OpKind::delete_prop) return Step::swap;
      break;
    case OpKind::delete_node:
      if (b == OpKind::delete_prop || b == OpKind::delete_edge) return Step::swap;
      break;
    case OpKind::update_prop:
      if (b == OpKind::delete_prop)
        return same_prop(std::get<UpdateProp>(marked), std::get<DeleteProp>(next))
                   ? Step::drop_marked
                   : Step::swap;
      if (b == OpKind::delete_edge || b == OpKind::delete_node) return Step::swap;
      break;
    case OpKind::relabel_node:
      if (b == OpKind::delete_node)
        return std::get<RelabelNode>(marked).node == std::get<DeleteNode>(next).node
                   ? Step::drop_marked
                   : Step::swap;
      if (b == OpKind::delete_prop || b == OpKind::delete_edge || b == OpKind::update_prop)
        return Step::swap;
      break;
    case OpKind::relabel_edge:
      if (b == OpKind::delete_edge)
        return std::get<RelabelEdge>(marked).edge == std::get<DeleteEdge>(next).edge
                   ? Step::drop_marked
                   : Step::swap;
      if (b < OpKind::relabel_edge) return Step::swap;
      break;
    case OpKind::insert_node:
      if (b == OpKind::delete_node)
        return std::get<InsertNode>(marked).node == std::get<DeleteNode>(next).node
                   ? Step::cancel_both
                   : Step::swap;
      if (b == OpKind::relabel_node)
        return std::get<InsertNode>(marked).node == std::get<RelabelNode>(next).node
                   ? Step::absorb_next
                   : Step::swap;
      if (b < OpKind::insert_node) return Step::swap;
      break;
    case OpKind::insert_edge:
      if (b == OpKind::delete_edge)
        return std::get<InsertEdge>(marked).edge == std::get<DeleteEdge>(next).edge
                   ? Step::cancel_both
                   : Step::swap;
      if (b == OpKind::relabel_edge)
        return std::get<InsertEdge>(marked).edge == std::get<RelabelEdge>(next).edge
                   ? Step::absorb_next
                   : Step::swap;
      if (b < OpKind::insert_edge) return Step::swap;
      break;
    case OpKind::insert_prop:
      if (b == OpKind::delete_prop)
        return same_prop(std::get<InsertProp>(marked), std::get<DeleteProp>(next))
                   ? Step::cancel_both
                   : Step::swap;
      if (b == OpKind::update_prop)
        return same_prop(std::get<InsertProp>(marked), std::get<UpdateProp>(next))
                   ? Step::absorb_next
                   : Step::swap;
      if (b < OpKind::insert_prop) return Step::swap;
      break;
    case OpKind::delete_prop:
      break;
  }
  return Step::unmark;
}

// The marked op takes over the label or value written by `next`.
inline void absorb(EditOp& marked, const EditOp& next) {
  if (auto* n = std::get_if<InsertNode>(&marked)) {
    n->label = std::get<RelabelNode>(next).label;
  } else if (auto* e = std::get_if<InsertEdge>(&marked)) {
    e->label = std::get<RelabelEdge>(next).label;
  } else {
    std::get<InsertProp>(marked).value = std::get<UpdateProp>(next).value;
  }
}

}  // namespace detail

// Applies the first matching rule at the mark. Returns false when the
// script carries no mark.
inline bool rewrite_step(EditScript& s) {
  if (!s.mark) return false;
  const std::size_t i = *s.mark;
  auto& ops = s.ops;
  if (i + 1 >= ops.size()) {
    s.mark.reset();
    return true;
  }
  switch (detail::rewrite_rule(ops[i], ops[i + 1])) {
    case detail::Step::swap:
      std::swap(ops[i], ops[i + 1]);
      s.mark = i + 1;
      break;
    case detail::Step::drop_marked:
      ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i));
      s.mark.reset();
      break;
    case detail::Step::cancel_both:
      ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i),
                ops.begin() + static_cast<std::ptrdiff_t>(i + 2));
      s.mark.reset();
      break;
    case detail::Step::absorb_next:
      detail::absorb(ops[i], ops[i + 1]);
      ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i + 1));
      break;
    case detail::Step::unmark:
      s.mark.reset();
      break;
  }
  return true;
}

// Rewrites until the mark disappears.
inline void normalize(EditScript& s) {
  while (rewrite_step(s)) {
  }
}

// Canonical script with the same effect on g and no more operations than
// `script`. Folds from the right: each op is marked, prepended to the
// already-canonical suffix, and normalized. Throws PreconditionViolated if
// `script` is not valid on g.
inline EditScript canonicalize(const EditScript& script, const PropertyGraph& g) {
  apply_script(g, script);
  EditScript acc;
  for (auto it = script.ops.rbegin(); it != script.ops.rend(); ++it) {
    acc.ops.insert(acc.ops.begin(), *it);
    acc.mark = 0;
    normalize(acc);
  }
  return acc;
}

}  // namespace pgmatch
