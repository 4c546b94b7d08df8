#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "deltacom/graph.hpp"

namespace deltacom {

inline std::size_t triangles_at(const Graph& g, NodeId i) {
  auto adj = g.neighbors(i);
  std::size_t count = 0;
  for (std::size_t a = 0; a < adj.size(); ++a) {
    // Sorted-list intersection of adj(i) and adj(adj[a]), counting only
    // neighbours beyond adj[a] so each triangle is seen once.
    auto other = g.neighbors(adj[a]);
    auto p = adj.begin() + static_cast<std::ptrdiff_t>(a + 1);
    auto q = std::upper_bound(other.begin(), other.end(), adj[a]);
    while (p != adj.end() && q != other.end()) {
      if (*p < *q) {
        ++p;
      } else if (*q < *p) {
        ++q;
      } else {
        ++count;
        ++p;
        ++q;
      }
    }
  }
  return count;
}

/// Local clustering coefficient; nullopt for nodes of degree < 2.
inline std::optional<double> clustering_coefficient(const Graph& g, NodeId i) {
  const std::size_t k = g.degree(i);
  if (k < 2) return std::nullopt;
  const double pairs = static_cast<double>(k) * static_cast<double>(k - 1) / 2.0;
  return static_cast<double>(triangles_at(g, i)) / pairs;
}

/// Mean degree of the neighbours of i; nullopt for isolated nodes.
inline std::optional<double> avg_neighbor_degree(const Graph& g, NodeId i) {
  const std::size_t k = g.degree(i);
  if (k == 0) return std::nullopt;
  std::uint64_t sum = 0;
  for (NodeId j : g.neighbors(i)) sum += g.degree(j);
  return static_cast<double>(sum) / static_cast<double>(k);
}

/// Continuous maximum-likelihood power-law exponent for a discrete sample,
/// alpha = 1 + N / sum ln(k / (k_min - 1/2)), over the samples >= k_min.
inline double fit_power_law(std::span<const std::size_t> degrees, std::size_t k_min) {
  if (k_min < 1) throw Error("fit_power_law: k_min must be >= 1");
  std::size_t count = 0;
  double log_sum = 0.0;
  std::optional<std::size_t> first;
  bool all_equal = true;
  const double shift = static_cast<double>(k_min) - 0.5;
  for (std::size_t k : degrees) {
    if (k < k_min) continue;
    if (!first) first = k;
    all_equal = all_equal && k == *first;
    log_sum += std::log(static_cast<double>(k) / shift);
    ++count;
  }
  if (count == 0) throw Error("fit_power_law: empty sample");
  if (count < 10) throw Error("fit_power_law: fewer than 10 samples");
  if (all_equal) throw Error("fit_power_law: degenerate constant sample");
  return 1.0 + static_cast<double>(count) / log_sum;
}

struct DegreeStats {
  std::map<std::size_t, std::size_t> degree_histogram;
  /// Counts per bin of width 1/clustering_bins over [0,1]; the last bin is closed.
  std::vector<std::size_t> clustering_histogram;
  std::map<std::size_t, double> clustering_by_degree;
  std::map<std::size_t, double> knn_by_degree;
  std::optional<double> alpha;
  std::size_t alpha_k_min = 1;
};

inline DegreeStats degree_stats(const Graph& g, std::size_t k_min = 1, std::size_t clustering_bins = 20) {
  DegreeStats out;
  out.clustering_histogram.assign(clustering_bins, 0);
  out.alpha_k_min = k_min;
  std::map<std::size_t, double> cc_sum;
  std::map<std::size_t, double> knn_sum;
  std::vector<std::size_t> degrees;
  degrees.reserve(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const std::size_t k = g.degree(v);
    degrees.push_back(k);
    ++out.degree_histogram[k];
    if (auto cc = clustering_coefficient(g, v)) {
      auto bin = static_cast<std::size_t>(*cc * static_cast<double>(clustering_bins));
      ++out.clustering_histogram[std::min(bin, clustering_bins - 1)];
      cc_sum[k] += *cc;
    }
    if (auto knn = avg_neighbor_degree(g, v)) knn_sum[k] += *knn;
  }
  for (auto [k, s] : cc_sum) out.clustering_by_degree[k] = s / static_cast<double>(out.degree_histogram[k]);
  for (auto [k, s] : knn_sum) out.knn_by_degree[k] = s / static_cast<double>(out.degree_histogram[k]);
  try {
    out.alpha = fit_power_law(degrees, k_min);
  } catch (const Error&) {
    out.alpha.reset();
  }
  return out;
}

}  // namespace deltacom
