#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "deltacom/graph.hpp"

namespace fixtures {

using deltacom::Graph;
using deltacom::NodeId;

inline Graph make(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges) {
  deltacom::GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_node(std::to_string(i));
  for (auto [u, v] : edges) b.add_edge(u, v);
  return b.build();
}

inline Graph make(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  deltacom::GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_node(std::to_string(i));
  for (auto [u, v] : edges) b.add_edge(u, v);
  return b.build();
}

/// Two triangles {0,1,2} and {3,4,5} joined by the edge 2-3.
inline Graph two_triangles() { return make(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}); }

inline Graph clique(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  }
  return make(n, e);
}

/// Two K5 joined by a single edge 4-5.
inline Graph two_k5() {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId base : {0u, 5u}) {
    for (NodeId u = 0; u < 5; ++u) {
      for (NodeId v = u + 1; v < 5; ++v) e.emplace_back(base + u, base + v);
    }
  }
  e.emplace_back(4, 5);
  return make(10, e);
}

/// count cliques of size k on a ring; clique i's last node links to clique
/// i+1's first node.
inline Graph clique_ring(std::size_t count, std::size_t k) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (std::size_t c = 0; c < count; ++c) {
    const auto base = static_cast<NodeId>(c * k);
    for (NodeId u = 0; u < k; ++u) {
      for (NodeId v = u + 1; v < k; ++v) e.emplace_back(base + u, base + v);
    }
    e.emplace_back(base + static_cast<NodeId>(k - 1), static_cast<NodeId>(((c + 1) % count) * k));
  }
  return make(count * k, e);
}

inline Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (coin(rng)) e.emplace_back(u, v);
    }
  }
  return make(n, e);
}

}  // namespace fixtures
