#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "deltacom/graph.hpp"
#include "deltacom/partition.hpp"

namespace deltacom {

enum class DetectorMethod { kLpm, kLouvain };

struct DetectorConfig {
  DetectorMethod method = DetectorMethod::kLouvain;
  std::uint64_t seed = 1;
  std::size_t max_sweeps = 100;
};

namespace detail {

/// Relabels arbitrary labels to 0..c-1 in order of first appearance.
inline std::vector<CommunityId> compact_labels(std::span<const std::uint32_t> labels) {
  std::vector<CommunityId> out(labels.size());
  constexpr CommunityId kUnset = static_cast<CommunityId>(-1);
  std::vector<CommunityId> remap;
  CommunityId next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto l = labels[i];
    if (l >= remap.size()) remap.resize(l + 1, kUnset);
    if (remap[l] == kUnset) remap[l] = next++;
    out[i] = remap[l];
  }
  return out;
}

}  // namespace detail

/// Asynchronous label propagation. Each sweep visits the nodes in a fresh
/// random order; a node keeps its label when that label is among the most
/// frequent in its neighbourhood, otherwise it takes one of the most frequent
/// labels uniformly at random. Stops after a sweep without changes.
inline PartitionState lpm(const Graph& g, const DetectorConfig& cfg) {
  if (g.num_nodes() == 0) throw Error("lpm: empty graph");
  if (cfg.max_sweeps < 1) throw Error("lpm: max_sweeps must be >= 1");
  const std::size_t n = g.num_nodes();
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::uint32_t> label(n);
  std::iota(label.begin(), label.end(), 0u);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<std::uint32_t> count(n, 0);
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> best;
  for (std::size_t sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t changes = 0;
    for (NodeId v : order) {
      if (g.degree(v) == 0) continue;
      touched.clear();
      std::uint32_t top = 0;
      for (NodeId u : g.neighbors(v)) {
        if (count[label[u]]++ == 0) touched.push_back(label[u]);
        top = std::max(top, count[label[u]]);
      }
      best.clear();
      for (auto l : touched) {
        if (count[l] == top) best.push_back(l);
      }
      const bool keep = count[label[v]] == top;
      for (auto l : touched) count[l] = 0;
      if (keep) continue;
      std::sort(best.begin(), best.end());
      std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
      label[v] = best[pick(rng)];
      ++changes;
    }
    if (changes == 0) break;
  }
  return PartitionState::from_assignment(g, detail::compact_labels(label));
}

namespace detail {

/// Weighted graph used between Louvain levels. loops[i] is the weight of the
/// self-loop of i (edges folded inside an aggregated node), counted once.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> adj;
  std::vector<std::uint64_t> loops;
  std::vector<std::uint64_t> strength;
  std::uint64_t two_m = 0;
};

inline LevelGraph level_from(const Graph& g) {
  LevelGraph lg;
  const std::size_t n = g.num_nodes();
  lg.adj.resize(n);
  lg.loops.assign(n, 0);
  lg.strength.assign(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(v)) lg.adj[v].emplace_back(u, 1);
    lg.strength[v] = g.degree(v);
  }
  lg.two_m = g.total_degree();
  return lg;
}

/// One local-moving phase. Returns true if any node moved.
inline bool local_moving(const LevelGraph& lg, std::vector<std::uint32_t>& comm, std::mt19937_64& rng,
                         std::size_t max_sweeps) {
  using i128 = __int128;
  const std::size_t n = lg.adj.size();
  std::vector<std::uint64_t> total(n, 0);
  for (std::size_t i = 0; i < n; ++i) total[comm[i]] += lg.strength[i];
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<std::uint64_t> link(n, 0);
  std::vector<bool> linked(n, false);
  std::vector<std::uint32_t> touched;
  bool any_move = false;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t moves = 0;
    for (auto v : order) {
      const auto own = comm[v];
      touched.clear();
      for (auto [u, w] : lg.adj[v]) {
        const auto c = comm[u];
        if (!linked[c]) {
          linked[c] = true;
          touched.push_back(c);
        }
        link[c] += w;
      }
      total[own] -= lg.strength[v];
      // Modularity gain of joining c, scaled by 2m: link_c * 2m - k_v * tot_c.
      auto gain = [&](std::uint32_t c) {
        return static_cast<i128>(linked[c] ? link[c] : 0) * static_cast<i128>(lg.two_m) -
               static_cast<i128>(lg.strength[v]) * static_cast<i128>(total[c]);
      };
      std::uint32_t best = own;
      i128 best_gain = gain(own);
      std::sort(touched.begin(), touched.end());
      for (auto c : touched) {
        const i128 gc = gain(c);
        if (gc > best_gain) {
          best_gain = gc;
          best = c;
        }
      }
      for (auto c : touched) {
        link[c] = 0;
        linked[c] = false;
      }
      total[best] += lg.strength[v];
      if (best != own) {
        comm[v] = best;
        ++moves;
        any_move = true;
      }
    }
    if (moves == 0) break;
  }
  return any_move;
}

inline LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm, std::size_t c) {
  LevelGraph out;
  out.adj.resize(c);
  out.loops.assign(c, 0);
  out.strength.assign(c, 0);
  out.two_m = lg.two_m;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> raw(c);
  for (std::size_t v = 0; v < lg.adj.size(); ++v) {
    const auto cv = comm[v];
    out.strength[cv] += lg.strength[v];
    out.loops[cv] += lg.loops[v];
    for (auto [u, w] : lg.adj[v]) {
      const auto cu = comm[u];
      if (cu == cv) {
        if (v < u) out.loops[cv] += w;
      } else {
        raw[cv].emplace_back(cu, w);
      }
    }
  }
  for (std::size_t i = 0; i < c; ++i) {
    auto& r = raw[i];
    std::sort(r.begin(), r.end());
    for (auto [u, w] : r) {
      if (!out.adj[i].empty() && out.adj[i].back().first == u) {
        out.adj[i].back().second += w;
      } else {
        out.adj[i].emplace_back(u, w);
      }
    }
  }
  return out;
}

}  // namespace detail

/// Two-phase greedy modularity optimisation: local moving in a seeded random
/// node order, then aggregation of communities into nodes, until a level
/// produces no move.
inline PartitionState louvain(const Graph& g, const DetectorConfig& cfg) {
  if (g.num_nodes() == 0) throw Error("louvain: empty graph");
  if (cfg.max_sweeps < 1) throw Error("louvain: max_sweeps must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::uint32_t> node_comm(g.num_nodes());
  std::iota(node_comm.begin(), node_comm.end(), 0u);
  if (g.num_edges() == 0) return PartitionState::from_assignment(g, node_comm);
  detail::LevelGraph level = detail::level_from(g);
  for (;;) {
    std::vector<std::uint32_t> comm(level.adj.size());
    std::iota(comm.begin(), comm.end(), 0u);
    if (!detail::local_moving(level, comm, rng, cfg.max_sweeps)) break;
    auto dense = detail::compact_labels(comm);
    const std::size_t c = dense.empty() ? 0 : *std::max_element(dense.begin(), dense.end()) + 1;
    for (auto& x : node_comm) x = dense[x];
    if (c == level.adj.size()) break;
    std::vector<std::uint32_t> dense32(dense.begin(), dense.end());
    level = detail::aggregate(level, dense32, c);
  }
  return PartitionState::from_assignment(g, detail::compact_labels(node_comm));
}

inline PartitionState detect(const Graph& g, const DetectorConfig& cfg) {
  return cfg.method == DetectorMethod::kLpm ? lpm(g, cfg) : louvain(g, cfg);
}

}  // namespace deltacom
