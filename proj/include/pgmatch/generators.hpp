#pragma once

// Synthetic graphs: chains, cycles and seeded random graphs with a single
// node label and a single edge label.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "pgmatch/graph.hpp"

namespace pgmatch {

struct GenNames {
  std::string node_prefix = "v";
  std::string edge_prefix = "e";
  std::string node_label = "node";
  std::string edge_label = "edge";

  // Prefixes for the second graph of a pair, so the two are disjoint.
  static GenNames second() { return {"w", "f", "node", "edge"}; }
};

// k edges v0 -> v1 -> ... -> vk.
inline PropertyGraph gen_chain(int k, const GenNames& names = {}) {
  if (k < 1) throw std::invalid_argument("chain length must be at least 1");
  PropertyGraph g;
  for (int i = 0; i <= k; ++i) g.add_node(names.node_prefix + std::to_string(i), names.node_label);
  for (int i = 0; i < k; ++i)
    g.add_edge(names.edge_prefix + std::to_string(i), names.node_prefix + std::to_string(i),
               names.node_prefix + std::to_string(i + 1), names.edge_label);
  return g;
}

// k nodes on one directed cycle; k = 1 is a self-loop.
inline PropertyGraph gen_cycle(int k, const GenNames& names = {}) {
  if (k < 1) throw std::invalid_argument("cycle length must be at least 1");
  PropertyGraph g;
  for (int i = 0; i < k; ++i) g.add_node(names.node_prefix + std::to_string(i), names.node_label);
  for (int i = 0; i < k; ++i)
    g.add_edge(names.edge_prefix + std::to_string(i), names.node_prefix + std::to_string(i),
               names.node_prefix + std::to_string((i + 1) % k), names.edge_label);
  return g;
}

// Uniform double in [0, 1) from the top 53 bits, identical on every
// standard library (unlike uniform_real_distribution).
inline double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// n nodes; every ordered pair (i, j), i != j unless self-loops are
// allowed, gets one edge with probability p. Pairs are visited in
// row-major order, so the graph is a pure function of the arguments.
inline PropertyGraph gen_random(int n, double p, std::uint64_t seed, bool self_loops = false,
                                const GenNames& names = {}) {
  if (n < 0) throw std::invalid_argument("node count must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must be in [0, 1]");
  std::mt19937_64 rng(seed);
  PropertyGraph g;
  for (int i = 0; i < n; ++i) g.add_node(names.node_prefix + std::to_string(i), names.node_label);
  int next = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j && !self_loops) continue;
      if (unit_interval(rng) < p)
        g.add_edge(names.edge_prefix + std::to_string(next++), names.node_prefix + std::to_string(i),
                   names.node_prefix + std::to_string(j), names.edge_label);
    }
  return g;
}

}  // namespace pgmatch
