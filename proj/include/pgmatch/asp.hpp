#pragma once

// Answer-set encodings: graphs as n/e/p facts and the problem programs for
// homomorphism, isomorphism, subgraph embedding and edit distance.

#include <array>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pgmatch/edit.hpp"
#include "pgmatch/errors.hpp"
#include "pgmatch/graph.hpp"

namespace pgmatch {

// A ground atom pred(arg, ...). Arguments hold the raw (unescaped) text.
struct Atom {
  std::string pred;
  std::vector<std::string> args;

  auto operator<=>(const Atom&) const = default;
};

using FactSet = std::vector<Atom>;

enum class ProblemKind {
  hom,
  iso,
  sub,
  ged,
  ged_relabel,
  gedc_weighted,
  approx_sub_old,
  approx_sub_new,
};

inline constexpr std::array<ProblemKind, 8> kProblemKinds = {
    ProblemKind::hom,           ProblemKind::iso,           ProblemKind::sub,
    ProblemKind::ged,           ProblemKind::ged_relabel,   ProblemKind::gedc_weighted,
    ProblemKind::approx_sub_old, ProblemKind::approx_sub_new};

inline std::string_view kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::hom: return "hom";
    case ProblemKind::iso: return "iso";
    case ProblemKind::sub: return "sub";
    case ProblemKind::ged: return "ged";
    case ProblemKind::ged_relabel: return "ged-relabel";
    case ProblemKind::gedc_weighted: return "gedc";
    case ProblemKind::approx_sub_old: return "approx-sub-old";
    case ProblemKind::approx_sub_new: return "approx-sub-new";
  }
  return "?";
}

inline std::optional<ProblemKind> kind_from_name(std::string_view name) {
  for (auto k : kProblemKinds)
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

inline bool is_decision(ProblemKind k) {
  return k == ProblemKind::hom || k == ProblemKind::iso || k == ProblemKind::sub;
}

inline bool is_edit_distance(ProblemKind k) {
  return k == ProblemKind::ged || k == ProblemKind::ged_relabel ||
         k == ProblemKind::gedc_weighted;
}

// Spelling of disequality in the generated programs: `!=` or `<>`.
enum class Comparison { neq, angle };

struct AspProgram {
  ProblemKind kind;
  std::string text;
};

// ---------------------------------------------------------------------------
// Terms

// Bare when the text is a plain lowercase identifier, quoted otherwise.
// "not" is a keyword and must be quoted.
inline std::string escape_term(std::string_view s) {
  bool bare = !s.empty() && s[0] >= 'a' && s[0] <= 'z' && s != "not";
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_') ||
        static_cast<unsigned char>(c) >= 0x80)
      bare = false;
  if (bare) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string render_atom(const Atom& a) {
  std::string out = a.pred;
  if (a.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += escape_term(a.args[i]);
  }
  out += ')';
  return out;
}

namespace detail {

class AtomReader {
 public:
  explicit AtomReader(std::string_view s) : s_(s) {}

  bool done() {
    skip_space();
    return i_ >= s_.size();
  }

  Atom atom() {
    skip_space();
    Atom a;
    a.pred = identifier();
    if (a.pred.empty()) fail("predicate name expected");
    if (i_ < s_.size() && s_[i_] == '(') {
      ++i_;
      for (;;) {
        skip_space();
        a.args.push_back(term());
        skip_space();
        if (i_ >= s_.size()) fail("unterminated argument list");
        if (s_[i_] == ',') {
          ++i_;
          continue;
        }
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        fail("unexpected character");
      }
    }
    return a;
  }

  void skip(char c) {
    skip_space();
    if (i_ < s_.size() && s_[i_] == c) ++i_;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw SolverParseFailure(why + " at offset " + std::to_string(i_) + " in '" +
                             std::string(s_) + "'");
  }

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::string identifier() {
    std::size_t b = i_;
    if (i_ < s_.size() && (s_[i_] == '_' || std::islower(static_cast<unsigned char>(s_[i_])))) {
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        ++i_;
    }
    return std::string(s_.substr(b, i_ - b));
  }

  std::string term() {
    if (i_ >= s_.size()) fail("term expected");
    if (s_[i_] == '"') {
      std::string out;
      ++i_;
      while (i_ < s_.size() && s_[i_] != '"') {
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
          char c = s_[++i_];
          out += c == 'n' ? '\n' : c;
        } else {
          out += s_[i_];
        }
        ++i_;
      }
      if (i_ >= s_.size()) fail("unterminated string");
      ++i_;
      return out;
    }
    std::size_t b = i_;
    if (s_[i_] == '-') ++i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
      ++i_;
    if (i_ == b) fail("term expected");
    if (i_ < s_.size() && s_[i_] == '(') fail("nested terms are not supported");
    return std::string(s_.substr(b, i_ - b));
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

// Parses whitespace-separated atoms, as printed in a solver model line.
inline std::vector<Atom> parse_atoms(std::string_view line) {
  detail::AtomReader r(line);
  std::vector<Atom> out;
  while (!r.done()) out.push_back(r.atom());
  return out;
}

// ---------------------------------------------------------------------------
// Facts

inline FactSet encode_graph_facts(const PropertyGraph& g, int which) {
  if (which != 1 && which != 2) throw std::invalid_argument("graph side must be 1 or 2");
  const std::string s = std::to_string(which);
  FactSet out;
  for (const auto& [v, l] : g.nodes()) out.push_back({"n" + s, {v, l}});
  for (const auto& [id, e] : g.edges()) out.push_back({"e" + s, {id, e.src, e.tgt, e.label}});
  for (const auto& [key, value] : g.props())
    out.push_back({"p" + s, {key.first, key.second, value}});
  return out;
}

inline std::string render_facts(const FactSet& facts) {
  std::string out;
  for (const auto& f : facts) out += render_atom(f) + ".\n";
  return out;
}

// Rebuilds one side of a job from its facts. Atoms of other predicates are
// ignored.
inline PropertyGraph decode_facts(const std::vector<Atom>& facts, int which) {
  const std::string s = std::to_string(which);
  PropertyGraph g;
  auto arity = [](const Atom& a, std::size_t n) {
    if (a.args.size() != n)
      throw SolverParseFailure("wrong arity for " + a.pred + ": " + render_atom(a));
  };
  for (const auto& a : facts)
    if (a.pred == "n" + s) {
      arity(a, 2);
      g.add_node(a.args[0], a.args[1]);
    }
  for (const auto& a : facts)
    if (a.pred == "e" + s) {
      arity(a, 4);
      g.add_edge(a.args[0], a.args[1], a.args[2], a.args[3]);
    }
  for (const auto& a : facts)
    if (a.pred == "p" + s) {
      arity(a, 3);
      g.set_prop(a.args[0], a.args[1], a.args[2]);
    }
  return g;
}

// Inverse of render_facts: one fact per line, trailing period.
inline std::vector<Atom> parse_facts(std::string_view text) {
  std::vector<Atom> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    detail::AtomReader r(line);
    if (r.done()) continue;
    out.push_back(r.atom());
    r.skip('.');
    if (!r.done()) throw SolverParseFailure("trailing text in fact line '" + line + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Programs

namespace detail {

inline constexpr std::string_view kHom =
    "{h(X,Y) : n2(Y,L)} = 1 :- n1(X,L).\n"
    "{h(X,Y) : e2(Y,S2,T2,L), h(S1,S2), h(T1,T2)} = 1 :- e1(X,S1,T1,L).\n"
    ":- p1(X,K,D), h(X,Y), not p2(Y,K,D).\n";

inline constexpr std::string_view kIso =
    "{h(X,Y) : n1(X,L)} = 1 :- n2(Y,L).\n"
    "{h(X,Y) : e1(X,S1,T1,L), h(S1,S2), h(T1,T2)} = 1 :- e2(Y,S2,T2,L).\n"
    ":- p2(Y,K,D), h(X,Y), not p1(X,K,D).\n";

inline constexpr std::string_view kSub =
    "{h(X,Y) : n1(X,L)} <= 1 :- n2(Y,L).\n"
    "{h(X,Y) : e1(X,S1,T1,L), h(S1,S2), h(T1,T2)} <= 1 :- e2(Y,S2,T2,L).\n";

inline constexpr std::string_view kGedMatch =
    "{h(X,Y) : n2(Y,L)} <= 1 :- n1(X,L).\n"
    "{h(X,Y) : n1(X,L)} <= 1 :- n2(Y,L).\n"
    "{h(X,Y) : e2(Y,S2,T2,L), h(S1,S2), h(T1,T2)} <= 1 :- e1(X,S1,T1,L).\n"
    "{h(X,Y) : e1(X,S1,T1,L), h(S1,S2), h(T1,T2)} <= 1 :- e2(Y,S2,T2,L).\n";

inline constexpr std::string_view kRelabelMatch =
    "{h(X,Y) : n2(Y,_)} <= 1 :- n1(X,_).\n"
    "{h(X,Y) : n1(X,_)} <= 1 :- n2(Y,_).\n"
    "{h(X,Y) : e2(Y,S2,T2,_), h(S1,S2), h(T1,T2)} <= 1 :- e1(X,S1,T1,_).\n"
    "{h(X,Y) : e1(X,S1,T1,_), h(S1,S2), h(T1,T2)} <= 1 :- e2(Y,S2,T2,_).\n";

inline constexpr std::string_view kGedDiff =
    "\n"
    "delete_node(X) :- n1(X,_), not h(X,_).\n"
    "insert_node(Y,L) :- n2(Y,L), not h(_,Y).\n"
    "\n"
    "delete_edge(X) :- e1(X,_,_,_), not h(X,_).\n"
    "insert_edge(Y,S,T,L) :- e2(Y,S,T,L), not h(_,Y).\n"
    "\n"
    "update_prop(X,K,V1,V2) :- p1(X,K,V1), h(X,Y), p2(Y,K,V2), V1 <> V2.\n"
    "delete_prop(X,K) :- p1(X,K,_), h(X,Y), not p2(Y,K,_).\n"
    "delete_prop(X,K) :- p1(X,K,_), delete_node(X).\n"
    "delete_prop(X,K) :- p1(X,K,_), delete_edge(X).\n"
    "insert_prop(Y,K,V) :- p2(Y,K,V), h(X,Y), not p1(X,K,_).\n"
    "insert_prop(Y,K,V) :- p2(Y,K,V), insert_node(Y,_).\n"
    "insert_prop(Y,K,V) :- p2(Y,K,V), insert_edge(Y,_,_,_).\n";

inline constexpr std::string_view kRelabelDiff =
    "relabel_node(X,L2) :- n1(X,L1), h(X,Y), n2(Y,L2), L1 <> L2.\n"
    "relabel_edge(X,L2) :- e1(X,_,_,L1), h(X,Y), e2(Y,_,_,L2), L1 <> L2.\n";

inline constexpr std::string_view kGedCost =
    "\n"
    "node_cost(Y,1) :- insert_node(Y,_).\n"
    "node_cost(X,1) :- delete_node(X).\n"
    "\n"
    "edge_cost(Y,1) :- insert_edge(Y,_,_,_).\n"
    "edge_cost(X,1) :- delete_edge(X).\n";

inline constexpr std::string_view kRelabelCost =
    "node_cost(X,1) :- relabel_node(X,_).\n"
    "edge_cost(X,1) :- relabel_edge(X,_).\n";

inline constexpr std::string_view kGedMinimize =
    "\n"
    "prop_cost(X,K,1) :- update_prop(X,K,V1,V2).\n"
    "prop_cost(X,K,1) :- delete_prop(X,K).\n"
    "prop_cost(Y,K,1) :- insert_prop(Y,K,V).\n"
    "\n"
    "#minimize { NC,X : node_cost(X,NC);\n"
    "              EC,X : edge_cost(X,EC);\n"
    "              LC,X,K : prop_cost(X,K,LC)}.\n";

inline constexpr std::string_view kGedcBody =
    "\n"
    "{ h(X,Y) : n2(Y,_) } <= 1 :- n1(X,_).\n"
    "{ h(X,Y) : n1(X,_) } <= 1 :- n2(Y,_).\n"
    "{ h(X,Y) : e2(Y,S2,T2,_), h(S1,S2), h(T1,T2) } <= 1 :- e1(X,S1,T1,_).\n"
    "{ h(X,Y) : e1(X,S1,T1,_), h(S1,S2), h(T1,T2) } <= 1 :- e2(Y,S2,T2,_).\n"
    "\n"
    "node_cost(X,c_node_sub) :- n1(X,L1), h(X,Y), n2(Y,L2), L1 <> L2.\n"
    "node_cost(Y,c_node_ins) :- n2(Y,L), not h(_,Y).\n"
    "node_cost(X,c_node_del) :- n1(X,_), not h(X,_).\n"
    "\n"
    "edge_cost(X,c_edge_sub) :- e1(X,_,_,L1), h(X,Y), e2(Y,_,_,L2), L1 <> L2.\n"
    "edge_cost(Y,c_edge_ins) :- e2(Y,_,_,_), not h(_,Y).\n"
    "edge_cost(X,c_edge_del) :- e1(X,_,_,_), not h(X,_).\n"
    "\n"
    "#minimize { NC,X : node_cost(X,NC);\n"
    "             EC,X : edge_cost(X,EC)}.\n";

inline constexpr std::string_view kApproxOld =
    "{ h(X,Y) : n2(Y,_)} = 1 :- n1(X,_).\n"
    "{ h(X,Y) : e2(Y,_,_,_)} = 1 :- e1(X,_,_,_).\n"
    ":- X <> Y, h(X,Z), h(Y,Z).\n"
    ":- X <> Y, h(Z,Y), h(Z,X).\n"
    ":- n1(X,L), h(X,Y), not n2(Y,L).\n"
    ":- e1(E1,_,_,L), h(E1,E2), not e2(E2,_,_,L).\n"
    ":- e1(E1,X1,_,_), h(E1,E2), e2(E2,Y1,_,_), not h(X1,Y1).\n"
    ":- e1(E1,_,X2,_), h(E1,E2), e2(E2,_,Y2,_), not h(X2,Y2).\n"
    "\n"
    "#minimize { LC,X,K : prop_cost(X,K,LC) }.\n"
    "prop_cost(X,K,0) :- p1(X,K,V),  h(X,Y), p2(Y,K,V).\n"
    "prop_cost(X,K,1) :- p1(X,K,V1), h(X,Y), p2(Y,K,V2), V1 <> V2.\n"
    "prop_cost(X,K,1) :- p1(X,K,V),  h(X,Y), not p2(Y,K,_).\n";

inline constexpr std::string_view kApproxNew =
    "{h(X,Y) : n2(Y,L)} =  1 :- n1(X,L).\n"
    "{h(X,Y) : n1(X,L)} <= 1 :- n2(Y,L).\n"
    "{h(X,Y) : e2(Y,S2,T2,L), h(S1,S2), h(T1,T2)}  = 1 :- e1(X,S1,T1,L).\n"
    "{h(X,Y) : e1(X,S1,T1,L), h(S1,S2), h(T1,T2)} <= 1 :- e2(Y,S2,T2,L).\n"
    "\n"
    "prop_cost(X,K,0) :- p1(X,K,V),  h(X,Y), p2(Y,K,V).\n"
    "prop_cost(X,K,1) :- p1(X,K,V1), h(X,Y), p2(Y,K,V2), V1 <> V2.\n"
    "prop_cost(X,K,1) :- p1(X,K,V),  h(X,Y), not p2(Y,K,_).\n"
    "#minimize { LC,X,K : prop_cost(X,K,LC) }.\n";

inline std::string spell_comparison(std::string_view text, Comparison cmp) {
  std::string out(text);
  if (cmp == Comparison::angle) return out;
  for (std::size_t at = out.find("<>"); at != std::string::npos; at = out.find("<>", at + 2))
    out.replace(at, 2, "!=");
  return out;
}

}  // namespace detail

// Rule text for a problem kind. A cost model is required for
// gedc_weighted (it supplies the six constants) and rejected otherwise.
// Only the relabel and insert/delete node and edge weights are used; the
// weighted program has no property terms.
inline AspProgram encode_problem(ProblemKind kind, const std::optional<CostModel>& cm = std::nullopt,
                                 Comparison cmp = Comparison::neq) {
  using namespace detail;
  if (kind == ProblemKind::gedc_weighted && !cm)
    throw std::invalid_argument("gedc program needs a cost model");
  if (kind != ProblemKind::gedc_weighted && cm)
    throw std::invalid_argument(std::string("no cost model expected for ") +
                                std::string(kind_name(kind)));
  std::string text;
  switch (kind) {
    case ProblemKind::hom:
      text = kHom;
      break;
    case ProblemKind::iso:
      text = std::string(kHom) + std::string(kIso);
      break;
    case ProblemKind::sub:
      text = std::string(kHom) + std::string(kSub);
      break;
    case ProblemKind::ged:
      text = std::string(kGedMatch) + std::string(kGedDiff) + std::string(kGedCost) +
             std::string(kGedMinimize);
      break;
    case ProblemKind::ged_relabel:
      text = std::string(kRelabelMatch) + std::string(kGedDiff) + std::string(kRelabelDiff) +
             std::string(kGedCost) + std::string(kRelabelCost) + std::string(kGedMinimize);
      break;
    case ProblemKind::gedc_weighted: {
      if (!cm->valid()) throw std::invalid_argument("negative weight in cost model");
      const CostModel& w = *cm;
      auto line = [](std::string_view name, std::int64_t v) {
        return "#const " + std::string(name) + "=" + std::to_string(v) + ".\n";
      };
      text = line("c_node_sub", w[OpKind::relabel_node]) +
             line("c_node_ins", w[OpKind::insert_node]) +
             line("c_node_del", w[OpKind::delete_node]) +
             line("c_edge_sub", w[OpKind::relabel_edge]) +
             line("c_edge_ins", w[OpKind::insert_edge]) +
             line("c_edge_del", w[OpKind::delete_edge]) + std::string(kGedcBody);
      break;
    }
    case ProblemKind::approx_sub_old:
      text = kApproxOld;
      break;
    case ProblemKind::approx_sub_new:
      text = kApproxNew;
      break;
  }
  return {kind, spell_comparison(text, cmp)};
}

// Full solver input: facts of g1, facts of g2, then the rules. The two
// graphs must not share ids (see make_disjoint).
inline std::string render_job(const PropertyGraph& g1, const PropertyGraph& g2, ProblemKind kind,
                              const std::optional<CostModel>& cm = std::nullopt,
                              Comparison cmp = Comparison::neq) {
  for (const auto* g : {&g1, &g2})
    if (auto bad = validate(*g); !bad.empty()) throw InvalidGraph(bad.front());
  for (const auto& id : element_ids(g2))
    if (g1.has_element(id)) throw InvalidGraph("id '" + id + "' occurs in both graphs");
  return render_facts(encode_graph_facts(g1, 1)) + render_facts(encode_graph_facts(g2, 2)) +
         encode_problem(kind, cm, cmp).text;
}

}  // namespace pgmatch
