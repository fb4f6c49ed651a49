#pragma once

// Line-oriented text formats for graphs, edit scripts and cost models.
//
//   n <id> <label>
//   e <id> <src> <tgt> <label>
//   p <owner> <key> <value>
//
// Tokens are separated by whitespace. A token that is empty or contains
// whitespace, '"' or '\\', or starts with '#', is written double-quoted with
// backslash escapes. An unquoted '#' starts a comment.

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pgmatch/edit.hpp"
#include "pgmatch/errors.hpp"
#include "pgmatch/graph.hpp"

namespace pgmatch {

inline std::string quote_token(std::string_view s) {
  bool plain = !s.empty() && s.front() != '#';
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '\\') plain = false;
  if (plain) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Splits one line into tokens. Throws ParseError on an unterminated quote.
inline std::vector<std::string> tokenize(std::string_view line, std::size_t line_no = 0) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::string tok;
    if (line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char c = line[i++];
        if (c == '\\' && i < line.size()) {
          tok += line[i++];
        } else if (c == '"') {
          closed = true;
          break;
        } else {
          tok += c;
        }
      }
      if (!closed) throw ParseError("unterminated quoted token", line_no);
    } else {
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
        tok += line[i++];
    }
    out.push_back(std::move(tok));
  }
  return out;
}

namespace detail {

template <class F>
void for_each_record(std::istream& in, F&& f) {
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto toks = tokenize(line, no);
    if (!toks.empty()) f(toks, no);
  }
}

inline void expect_arity(const std::vector<std::string>& t, std::size_t n, std::size_t line) {
  if (t.size() != n)
    throw ParseError("'" + t[0] + "' record expects " + std::to_string(n - 1) +
                         " fields, got " + std::to_string(t.size() - 1),
                     line);
}

inline std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ' ';
    s += quote_token(parts[i]);
  }
  return s;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

// Parses a graph. Rejects duplicate records and graphs with validate()
// violations.
inline PropertyGraph read_graph(std::istream& in) {
  PropertyGraph g;
  detail::for_each_record(in, [&](const std::vector<std::string>& t, std::size_t no) {
    if (t[0] == "n") {
      detail::expect_arity(t, 3, no);
      if (g.has_node(t[1])) throw ParseError("duplicate node '" + t[1] + "'", no);
      g.add_node(t[1], t[2]);
    } else if (t[0] == "e") {
      detail::expect_arity(t, 5, no);
      if (g.has_edge(t[1])) throw ParseError("duplicate edge '" + t[1] + "'", no);
      g.add_edge(t[1], t[2], t[3], t[4]);
    } else if (t[0] == "p") {
      detail::expect_arity(t, 4, no);
      if (g.prop(t[1], t[2]))
        throw ParseError("duplicate property '" + t[2] + "' on '" + t[1] + "'", no);
      g.set_prop(t[1], t[2], t[3]);
    } else {
      throw ParseError("unknown record '" + t[0] + "'", no);
    }
  });
  if (auto bad = validate(g); !bad.empty()) throw InvalidGraph("invalid graph: " + bad.front());
  return g;
}

inline PropertyGraph read_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_graph(in);
}

inline PropertyGraph read_graph_file(const std::string& path) {
  auto in = detail::open_input(path);
  return read_graph(in);
}

inline std::string write_graph(const PropertyGraph& g) {
  std::string out;
  for (const auto& [v, l] : g.nodes()) out += "n " + detail::join({v, l}) + "\n";
  for (const auto& [id, e] : g.edges())
    out += "e " + detail::join({id, e.src, e.tgt, e.label}) + "\n";
  for (const auto& [key, value] : g.props())
    out += "p " + detail::join({key.first, key.second, value}) + "\n";
  return out;
}

inline std::string write_op(const EditOp& op) {
  std::vector<std::string> f;
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, InsertNode>) f = {o.node, o.label};
        else if constexpr (std::is_same_v<T, InsertEdge>) f = {o.edge, o.src, o.tgt, o.label};
        else if constexpr (std::is_same_v<T, InsertProp>) f = {o.owner, o.key, o.value};
        else if constexpr (std::is_same_v<T, DeleteNode>) f = {o.node};
        else if constexpr (std::is_same_v<T, DeleteEdge>) f = {o.edge};
        else if constexpr (std::is_same_v<T, DeleteProp>) f = {o.owner, o.key};
        else if constexpr (std::is_same_v<T, UpdateProp>) f = {o.owner, o.key, o.value};
        else if constexpr (std::is_same_v<T, RelabelNode>) f = {o.node, o.label};
        else f = {o.edge, o.label};
      },
      op);
  return std::string(op_name(kind_of(op))) + " " + detail::join(f);
}

inline std::string write_script(const EditScript& s) {
  std::string out;
  for (const auto& op : s.ops) out += write_op(op) + "\n";
  return out;
}

inline EditOp parse_op(const std::vector<std::string>& t, std::size_t no = 0) {
  auto kind = op_kind_from_name(t.at(0));
  if (!kind) throw ParseError("unknown edit operation '" + t[0] + "'", no);
  switch (*kind) {
    case OpKind::insert_node: detail::expect_arity(t, 3, no); return InsertNode{t[1], t[2]};
    case OpKind::insert_edge: detail::expect_arity(t, 5, no); return InsertEdge{t[1], t[2], t[3], t[4]};
    case OpKind::insert_prop: detail::expect_arity(t, 4, no); return InsertProp{t[1], t[2], t[3]};
    case OpKind::delete_node: detail::expect_arity(t, 2, no); return DeleteNode{t[1]};
    case OpKind::delete_edge: detail::expect_arity(t, 2, no); return DeleteEdge{t[1]};
    case OpKind::delete_prop: detail::expect_arity(t, 3, no); return DeleteProp{t[1], t[2]};
    case OpKind::update_prop: detail::expect_arity(t, 4, no); return UpdateProp{t[1], t[2], t[3]};
    case OpKind::relabel_node: detail::expect_arity(t, 3, no); return RelabelNode{t[1], t[2]};
    case OpKind::relabel_edge: detail::expect_arity(t, 3, no); return RelabelEdge{t[1], t[2]};
  }
  throw ParseError("unreachable", no);
}

inline EditScript read_script(std::istream& in) {
  EditScript s;
  detail::for_each_record(in, [&](const std::vector<std::string>& t, std::size_t no) {
    s.ops.push_back(parse_op(t, no));
  });
  return s;
}

inline EditScript read_script(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_script(in);
}

inline EditScript read_script_file(const std::string& path) {
  auto in = detail::open_input(path);
  return read_script(in);
}

// Cost model file: one "<op-name> <weight>" record per line, e.g. "relV 2".
// Unlisted kinds keep weight 1.
inline CostModel read_cost_model(std::istream& in) {
  CostModel cm;
  detail::for_each_record(in, [&](const std::vector<std::string>& t, std::size_t no) {
    detail::expect_arity(t, 2, no);
    auto kind = op_kind_from_name(t[0]);
    if (!kind) throw ParseError("unknown edit operation '" + t[0] + "'", no);
    std::int64_t w = 0;
    try {
      std::size_t used = 0;
      w = std::stoll(t[1], &used);
      if (used != t[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("weight '" + t[1] + "' is not an integer", no);
    }
    if (w < 0) throw ParseError("weight must be non-negative", no);
    cm[*kind] = w;
  });
  return cm;
}

inline CostModel read_cost_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_cost_model(in);
}

inline CostModel read_cost_model_file(const std::string& path) {
  auto in = detail::open_input(path);
  return read_cost_model(in);
}

inline std::string write_cost_model(const CostModel& cm) {
  std::string out;
  for (std::size_t i = 0; i < kOpKinds; ++i)
    out += std::string(kOpNames[i]) + " " + std::to_string(cm.weight[i]) + "\n";
  return out;
}

inline std::string write_matching(const Matching& h) {
  std::string out;
  for (const auto& [x, y] : h.node_map) out += "h " + detail::join({x, y}) + "\n";
  for (const auto& [x, y] : h.edge_map) out += "h " + detail::join({x, y}) + "\n";
  return out;
}

}  // namespace pgmatch
