#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace deltacom {

using NodeId = std::uint32_t;
using GroupId = std::uint32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Compact simple undirected graph in CSR form. Nodes are dense indices
/// assigned in first-seen order; the external token of each node is kept in a
/// side table. Immutable once built.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds from an edge list over nodes [0, labels.size()). Self-loops and
  /// repeated edges are expected to have been removed by the caller.
  static Graph from_simple_edges(std::vector<std::string> labels,
                                 std::span<const std::pair<NodeId, NodeId>> edges) {
    Graph g;
    const std::size_t n = labels.size();
    g.labels_ = std::move(labels);
    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : edges) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.neighbors_.resize(g.offsets_[n]);
    std::vector<std::uint64_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
      g.neighbors_[fill[u]++] = v;
      g.neighbors_[fill[v]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    }
    g.num_edges_ = edges.size();
    g.index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      g.index_.emplace(g.labels_[i], static_cast<NodeId>(i));
    }
    return g;
  }

  std::size_t num_nodes() const { return labels_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }

  bool has_edge(NodeId u, NodeId v) const {
    auto adj = neighbors(u);
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  const std::string& label(NodeId v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<NodeId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Canonical edge set: (u, v) with u < v, sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(num_edges_);
    for (NodeId u = 0; u < num_nodes(); ++u) {
      for (NodeId v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  std::uint64_t total_degree() const { return 2 * static_cast<std::uint64_t>(num_edges_); }

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::size_t num_edges_ = 0;
};

/// Accumulates edges by token, dropping self-loops and parallel edges.
class GraphBuilder {
 public:
  NodeId add_node(std::string_view token) {
    auto [it, inserted] = index_.try_emplace(std::string(token), static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.emplace_back(token);
    return it->second;
  }

  void add_edge(std::string_view a, std::string_view b) {
    NodeId u = add_node(a);
    NodeId v = add_node(b);
    add_edge(u, v);
  }

  void add_edge(NodeId u, NodeId v) {
    if (u == v) {
      ++self_loops_;
      return;
    }
    if (u > v) std::swap(u, v);
    edges_.emplace_back(u, v);
  }

  std::size_t self_loops_dropped() const { return self_loops_; }
  std::size_t duplicates_dropped() const { return duplicates_; }

  Graph build() {
    std::sort(edges_.begin(), edges_.end());
    auto last = std::unique(edges_.begin(), edges_.end());
    duplicates_ += static_cast<std::size_t>(edges_.end() - last);
    edges_.erase(last, edges_.end());
    Graph g = Graph::from_simple_edges(std::move(labels_), edges_);
    labels_.clear();
    index_.clear();
    edges_.clear();
    return g;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::size_t self_loops_ = 0;
  std::size_t duplicates_ = 0;
};

/// Optional group (AS) affiliation per node of a graph.
class AffiliationMap {
 public:
  static constexpr GroupId kNone = static_cast<GroupId>(-1);

  AffiliationMap() = default;
  explicit AffiliationMap(std::size_t num_nodes) : group_of_(num_nodes, kNone) {}

  std::size_t num_nodes() const { return group_of_.size(); }
  std::size_t num_groups() const { return names_.size(); }

  GroupId intern(std::string_view name) {
    auto [it, inserted] = index_.try_emplace(std::string(name), static_cast<GroupId>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }

  void assign(NodeId v, GroupId g) { group_of_[v] = g; }

  std::optional<GroupId> group(NodeId v) const {
    if (v >= group_of_.size() || group_of_[v] == kNone) return std::nullopt;
    return group_of_[v];
  }
  bool has_group(NodeId v) const { return v < group_of_.size() && group_of_[v] != kNone; }

  const std::string& group_name(GroupId g) const { return names_[g]; }
  std::optional<GroupId> find_group(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const GroupId> raw() const { return group_of_; }

  double coverage() const {
    if (group_of_.empty()) return 0.0;
    auto covered = std::count_if(group_of_.begin(), group_of_.end(),
                                 [](GroupId g) { return g != kNone; });
    return static_cast<double>(covered) / static_cast<double>(group_of_.size());
  }

  /// Restricts to a subgraph whose node i was node original[i] here. Group
  /// ids and names are preserved.
  AffiliationMap restrict(std::span<const NodeId> original) const {
    AffiliationMap out;
    out.names_ = names_;
    out.index_ = index_;
    out.group_of_.resize(original.size(), kNone);
    for (std::size_t i = 0; i < original.size(); ++i) {
      if (original[i] < group_of_.size()) out.group_of_[i] = group_of_[original[i]];
    }
    return out;
  }

 private:
  std::vector<GroupId> group_of_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, GroupId> index_;
};

/// Induced subgraph plus the map back to the parent's node indices.
struct Subgraph {
  Graph graph;
  std::vector<NodeId> original;
};

inline Subgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep) {
  Subgraph out;
  std::vector<NodeId> new_index(g.num_nodes(), static_cast<NodeId>(-1));
  std::vector<std::string> labels;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!keep[v]) continue;
    new_index[v] = static_cast<NodeId>(out.original.size());
    out.original.push_back(v);
    labels.push_back(g.label(v));
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (!keep[u]) continue;
    for (NodeId v : g.neighbors(u)) {
      if (u < v && keep[v]) edges.emplace_back(new_index[u], new_index[v]);
    }
  }
  out.graph = Graph::from_simple_edges(std::move(labels), edges);
  return out;
}

/// Full-scan structural check: symmetry, no self-loops, no parallel edges,
/// degree sum equal to 2m.
inline bool is_well_formed(const Graph& g) {
  std::uint64_t degree_sum = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto adj = g.neighbors(u);
    degree_sum += adj.size();
    for (std::size_t i = 0; i < adj.size(); ++i) {
      if (adj[i] == u) return false;
      if (i > 0 && adj[i - 1] >= adj[i]) return false;
      if (!g.has_edge(adj[i], u)) return false;
    }
  }
  return degree_sum == g.total_degree();
}

}  // namespace deltacom
