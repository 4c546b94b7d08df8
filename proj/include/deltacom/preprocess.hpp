#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "deltacom/graph.hpp"

namespace deltacom {

/// Maximal subgraph in which every node has degree >= k, by iterative peeling.
inline Subgraph k_core(const Graph& g, std::size_t k) {
  if (k < 1) throw Error("k_core: k must be >= 1");
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> degree(n);
  std::vector<bool> keep(n, true);
  std::deque<NodeId> queue;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = g.degree(v);
    if (degree[v] < k) {
      keep[v] = false;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : g.neighbors(v)) {
      if (!keep[u]) continue;
      if (--degree[u] < k) {
        keep[u] = false;
        queue.push_back(u);
      }
    }
  }
  return induced_subgraph(g, keep);
}

enum class ChainKind : std::uint8_t { kInternalConnection, kInternalTunnel, kInterAsTunnel, kOther };

inline constexpr std::array<ChainKind, 4> kAllChainKinds = {
    ChainKind::kInternalConnection, ChainKind::kInternalTunnel, ChainKind::kInterAsTunnel, ChainKind::kOther};

inline std::string_view to_string(ChainKind kind) {
  switch (kind) {
    case ChainKind::kInternalConnection: return "internal-connection";
    case ChainKind::kInternalTunnel: return "internal-tunnel";
    case ChainKind::kInterAsTunnel: return "inter-as-tunnel";
    case ChainKind::kOther: return "other";
  }
  return "other";
}

inline std::optional<ChainKind> parse_chain_kind(std::string_view s) {
  for (ChainKind k : kAllChainKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// Maximal run of degree-2 nodes between two nodes of degree != 2. The
/// endpoints coincide for a lollipop loop hanging off a single node.
struct Chain {
  NodeId endpoint_a = 0;
  NodeId endpoint_b = 0;
  std::vector<NodeId> interior;
};

struct ChainScan {
  std::vector<Chain> chains;
  /// Connected components made only of degree-2 nodes.
  std::vector<std::vector<NodeId>> cycles;
};

inline ChainScan find_chains(const Graph& g) {
  ChainScan out;
  const std::size_t n = g.num_nodes();
  std::vector<bool> visited(n, false);
  for (NodeId a = 0; a < n; ++a) {
    if (g.degree(a) == 2) continue;
    for (NodeId first : g.neighbors(a)) {
      if (g.degree(first) != 2 || visited[first]) continue;
      Chain chain;
      chain.endpoint_a = a;
      NodeId prev = a;
      NodeId cur = first;
      while (g.degree(cur) == 2) {
        visited[cur] = true;
        chain.interior.push_back(cur);
        auto adj = g.neighbors(cur);
        NodeId next = adj[0] == prev ? adj[1] : adj[0];
        prev = cur;
        cur = next;
      }
      chain.endpoint_b = cur;
      out.chains.push_back(std::move(chain));
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) != 2 || visited[v]) continue;
    std::vector<NodeId> cycle;
    NodeId prev = g.neighbors(v)[1];
    NodeId cur = v;
    while (!visited[cur]) {
      visited[cur] = true;
      cycle.push_back(cur);
      auto adj = g.neighbors(cur);
      NodeId next = adj[0] == prev ? adj[1] : adj[0];
      prev = cur;
      cur = next;
    }
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

inline ChainKind classify_chain(const Chain& chain, const AffiliationMap& aff) {
  auto ga = aff.group(chain.endpoint_a);
  auto gb = aff.group(chain.endpoint_b);
  if (!ga || !gb) return ChainKind::kOther;
  if (*ga != *gb) return ChainKind::kInterAsTunnel;
  bool all_same = true;
  for (NodeId v : chain.interior) {
    auto gv = aff.group(v);
    if (!gv) return ChainKind::kInternalTunnel;
    all_same = all_same && *gv == *ga;
  }
  return all_same ? ChainKind::kInternalConnection : ChainKind::kOther;
}

/// Joint distribution of (degree == 2, has affiliation). cells[d][a] with
/// index 0 = true, 1 = false, matching the row/column order of the usual table.
struct Contingency {
  std::array<std::array<double, 2>, 2> cells{};
  std::size_t nodes = 0;
  /// Phi coefficient; nullopt when a marginal is empty.
  std::optional<double> phi;
};

inline Contingency degree2_affiliation_contingency(const Graph& g, const AffiliationMap& aff) {
  Contingency out;
  std::array<std::array<std::size_t, 2>, 2> counts{};
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const int d = g.degree(v) == 2 ? 0 : 1;
    const int a = aff.has_group(v) ? 0 : 1;
    ++counts[d][a];
  }
  out.nodes = g.num_nodes();
  if (out.nodes == 0) return out;
  const double n = static_cast<double>(out.nodes);
  for (int d = 0; d < 2; ++d) {
    for (int a = 0; a < 2; ++a) out.cells[d][a] = static_cast<double>(counts[d][a]) / n;
  }
  const double row_t = out.cells[0][0] + out.cells[0][1];
  const double row_f = out.cells[1][0] + out.cells[1][1];
  const double col_t = out.cells[0][0] + out.cells[1][0];
  const double col_f = out.cells[0][1] + out.cells[1][1];
  const double denom = row_t * row_f * col_t * col_f;
  if (denom > 0.0) {
    out.phi = (out.cells[0][0] * out.cells[1][1] - out.cells[0][1] * out.cells[1][0]) / std::sqrt(denom);
  }
  return out;
}

struct CollapseResult {
  Subgraph sub;
  std::size_t chains_collapsed = 0;
  std::size_t interior_nodes_removed = 0;
  std::size_t cycles_removed = 0;
  std::size_t cycle_nodes_removed = 0;
  /// Lollipops: chains whose two endpoints coincide.
  std::size_t self_loops_suppressed = 0;
  /// Chains whose endpoint edge already existed or was already added.
  std::size_t parallel_edges_merged = 0;
};

/// Removes chain interiors and degree-2 cycles, joining each chain's
/// endpoints with a single unweighted edge.
inline CollapseResult collapse_chains(const Graph& g, const ChainScan& scan) {
  CollapseResult out;
  const std::size_t n = g.num_nodes();
  std::vector<bool> keep(n, true);
  for (const auto& chain : scan.chains) {
    for (NodeId v : chain.interior) keep[v] = false;
    out.interior_nodes_removed += chain.interior.size();
  }
  for (const auto& cycle : scan.cycles) {
    for (NodeId v : cycle) keep[v] = false;
    out.cycle_nodes_removed += cycle.size();
  }
  out.cycles_removed = scan.cycles.size();
  out.chains_collapsed = scan.chains.size();

  std::vector<NodeId> new_index(n, static_cast<NodeId>(-1));
  std::vector<std::string> labels;
  for (NodeId v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    new_index[v] = static_cast<NodeId>(out.sub.original.size());
    out.sub.original.push_back(v);
    labels.push_back(g.label(v));
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    if (!keep[u]) continue;
    for (NodeId v : g.neighbors(u)) {
      if (u < v && keep[v]) edges.emplace_back(new_index[u], new_index[v]);
    }
  }
  const std::size_t base_edges = edges.size();
  for (const auto& chain : scan.chains) {
    if (chain.endpoint_a == chain.endpoint_b) {
      ++out.self_loops_suppressed;
      continue;
    }
    NodeId a = new_index[chain.endpoint_a];
    NodeId b = new_index[chain.endpoint_b];
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  auto last = std::unique(edges.begin(), edges.end());
  const auto unique_count = static_cast<std::size_t>(last - edges.begin());
  edges.erase(last, edges.end());
  out.parallel_edges_merged = out.chains_collapsed - out.self_loops_suppressed - (unique_count - base_edges);
  out.sub.graph = Graph::from_simple_edges(std::move(labels), edges);
  return out;
}

struct CleaningReport {
  std::size_t nodes_before = 0;
  std::size_t edges_before = 0;
  std::size_t nodes_removed_2core = 0;
  std::size_t chains_found = 0;
  std::array<std::size_t, 4> chains_by_taxonomy{};
  std::size_t chain_nodes_removed = 0;
  std::size_t cycles_removed = 0;
  std::size_t cycle_nodes_removed = 0;
  std::size_t self_loops_suppressed = 0;
  std::size_t parallel_edges_merged = 0;
  std::size_t iterations = 0;
  std::size_t nodes_after = 0;
  std::size_t edges_after = 0;
  double affiliation_coverage_before = 0.0;
  double affiliation_coverage_after = 0.0;
  /// Measured on the first k-core, before any chain is collapsed.
  Contingency contingency;

  std::size_t count(ChainKind kind) const { return chains_by_taxonomy[static_cast<std::size_t>(kind)]; }
};

struct CleanResult {
  Graph graph;
  AffiliationMap affiliations;
  CleaningReport report;
  /// Every chain found, indices into the graph passed to clean_graph.
  std::vector<Chain> chains;
  std::vector<ChainKind> kinds;
};

/// k-core, then chain collapse, repeated until neither step changes the graph
/// (or only once when iterate is false).
inline CleanResult clean_graph(const Graph& input, const AffiliationMap& aff, std::size_t k = 2,
                               bool iterate = true) {
  CleanResult out;
  CleaningReport& rep = out.report;
  rep.nodes_before = input.num_nodes();
  rep.edges_before = input.num_edges();
  rep.affiliation_coverage_before = aff.coverage();

  Graph g = input;
  AffiliationMap a = aff;
  // to_input[v] maps the current graph's node v back to the input graph.
  std::vector<NodeId> to_input(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) to_input[v] = v;

  for (;;) {
    ++rep.iterations;
    Subgraph core = k_core(g, k);
    const std::size_t peeled = g.num_nodes() - core.graph.num_nodes();
    rep.nodes_removed_2core += peeled;
    a = a.restrict(core.original);
    for (auto& v : core.original) v = to_input[v];
    to_input = std::move(core.original);
    g = std::move(core.graph);
    if (rep.iterations == 1) rep.contingency = degree2_affiliation_contingency(g, a);

    ChainScan scan = find_chains(g);
    for (const auto& chain : scan.chains) {
      ChainKind kind = classify_chain(chain, a);
      ++rep.chains_by_taxonomy[static_cast<std::size_t>(kind)];
      Chain mapped{to_input[chain.endpoint_a], to_input[chain.endpoint_b], {}};
      for (NodeId v : chain.interior) mapped.interior.push_back(to_input[v]);
      out.chains.push_back(std::move(mapped));
      out.kinds.push_back(kind);
    }
    rep.chains_found += scan.chains.size();
    CollapseResult collapsed = collapse_chains(g, scan);
    rep.chain_nodes_removed += collapsed.interior_nodes_removed;
    rep.cycles_removed += collapsed.cycles_removed;
    rep.cycle_nodes_removed += collapsed.cycle_nodes_removed;
    rep.self_loops_suppressed += collapsed.self_loops_suppressed;
    rep.parallel_edges_merged += collapsed.parallel_edges_merged;
    const bool changed = peeled > 0 || !scan.chains.empty() || !scan.cycles.empty();
    a = a.restrict(collapsed.sub.original);
    for (auto& v : collapsed.sub.original) v = to_input[v];
    to_input = std::move(collapsed.sub.original);
    g = std::move(collapsed.sub.graph);
    if (!iterate || !changed || g.num_nodes() == 0) break;
  }
  rep.nodes_after = g.num_nodes();
  rep.edges_after = g.num_edges();
  rep.affiliation_coverage_after = a.coverage();
  out.graph = std::move(g);
  out.affiliations = std::move(a);
  return out;
}

/// Flat key=value block.
inline void write_report(std::ostream& os, const CleaningReport& r) {
  auto fixed = [](double x) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6f", x);
    return std::string(buf.data());
  };
  os << "nodes_before=" << r.nodes_before << '\n'
     << "edges_before=" << r.edges_before << '\n'
     << "nodes_removed_2core=" << r.nodes_removed_2core << '\n'
     << "chains_found=" << r.chains_found << '\n';
  for (ChainKind kind : kAllChainKinds) {
    os << "chains." << to_string(kind) << '=' << r.count(kind) << '\n';
  }
  os << "chain_nodes_removed=" << r.chain_nodes_removed << '\n'
     << "cycles_removed=" << r.cycles_removed << '\n'
     << "cycle_nodes_removed=" << r.cycle_nodes_removed << '\n'
     << "self_loops_suppressed=" << r.self_loops_suppressed << '\n'
     << "parallel_edges_merged=" << r.parallel_edges_merged << '\n'
     << "iterations=" << r.iterations << '\n'
     << "nodes_after=" << r.nodes_after << '\n'
     << "edges_after=" << r.edges_after << '\n'
     << "affiliation_coverage_before=" << fixed(r.affiliation_coverage_before) << '\n'
     << "affiliation_coverage_after=" << fixed(r.affiliation_coverage_after) << '\n'
     << "contingency.degree2_affiliated=" << fixed(r.contingency.cells[0][0]) << '\n'
     << "contingency.degree2_unaffiliated=" << fixed(r.contingency.cells[0][1]) << '\n'
     << "contingency.other_affiliated=" << fixed(r.contingency.cells[1][0]) << '\n'
     << "contingency.other_unaffiliated=" << fixed(r.contingency.cells[1][1]) << '\n'
     << "contingency.phi=" << (r.contingency.phi ? fixed(*r.contingency.phi) : std::string("undefined")) << '\n';
}

inline void write_taxonomy_csv(std::ostream& os, const CleaningReport& r) {
  os << "taxonomy,count\n";
  for (ChainKind kind : kAllChainKinds) os << to_string(kind) << ',' << r.count(kind) << '\n';
}

}  // namespace deltacom
