#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "deltacom/graph.hpp"
#include "deltacom/io.hpp"
#include "deltacom/resolution.hpp"

namespace deltacom {

using CommunityId = std::uint32_t;

/// Aggregates of one community. degree_sum is k_C; internal is e_C, twice
/// the number of internal edges; cut holds e(C,C') (twice the number of
/// edges between C and C') for every C' with e(C,C') > 0, sorted by id.
struct CommunityStats {
  CommunityId id = 0;
  std::uint64_t size = 0;
  std::uint64_t degree_sum = 0;
  std::uint64_t internal = 0;
  std::vector<std::pair<CommunityId, std::uint64_t>> cut;

  friend bool operator==(const CommunityStats&, const CommunityStats&) = default;
};

/// Node-to-community map with per-community aggregates. Community ids are
/// arbitrary; stats are kept sorted by id.
class PartitionState {
 public:
  PartitionState() = default;

  /// Recounts every aggregate from the graph.
  static PartitionState from_assignment(const Graph& g, std::vector<CommunityId> community_of) {
    if (community_of.size() != g.num_nodes()) throw Error("assignment size does not match graph");
    PartitionState p;
    p.two_m_ = g.total_degree();
    p.community_of_ = std::move(community_of);
    std::vector<CommunityId> ids(p.community_of_);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    p.stats_.resize(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) p.stats_[i].id = ids[i];
    std::vector<std::uint32_t> slot(g.num_nodes());
    std::vector<std::uint32_t> start(ids.size() + 1, 0);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      slot[v] = static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), p.community_of_[v]) - ids.begin());
      auto& c = p.stats_[slot[v]];
      ++c.size;
      c.degree_sum += g.degree(v);
      ++start[slot[v] + 1];
    }
    for (std::size_t i = 0; i < ids.size(); ++i) start[i + 1] += start[i];
    std::vector<NodeId> members(g.num_nodes());
    {
      std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
      for (NodeId v = 0; v < g.num_nodes(); ++v) members[fill[slot[v]]++] = v;
    }
    std::vector<std::uint64_t> weight(ids.size(), 0);
    std::vector<std::uint32_t> touched;
    for (std::uint32_t i = 0; i < ids.size(); ++i) {
      auto& c = p.stats_[i];
      touched.clear();
      for (std::uint32_t k = start[i]; k < start[i + 1]; ++k) {
        for (NodeId u : g.neighbors(members[k])) {
          const std::uint32_t s = slot[u];
          if (s == i) {
            ++c.internal;
          } else {
            if (weight[s] == 0) touched.push_back(s);
            weight[s] += 2;
          }
        }
      }
      std::sort(touched.begin(), touched.end());
      c.cut.reserve(touched.size());
      for (auto s : touched) {
        c.cut.emplace_back(ids[s], weight[s]);
        weight[s] = 0;
      }
    }
    return p;
  }

  /// Assembles a state from precomputed aggregates (used by the engine).
  static PartitionState from_parts(std::uint64_t two_m, std::vector<CommunityId> community_of,
                                   std::vector<CommunityStats> stats) {
    PartitionState p;
    p.two_m_ = two_m;
    p.community_of_ = std::move(community_of);
    p.stats_ = std::move(stats);
    std::sort(p.stats_.begin(), p.stats_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return p;
  }

  std::uint64_t two_m() const { return two_m_; }
  std::size_t num_nodes() const { return community_of_.size(); }
  std::size_t num_communities() const { return stats_.size(); }
  CommunityId community(NodeId v) const { return community_of_[v]; }
  std::span<const CommunityId> community_of() const { return community_of_; }
  std::span<const CommunityStats> communities() const { return stats_; }

  const CommunityStats* find(CommunityId id) const {
    auto it = std::lower_bound(stats_.begin(), stats_.end(), id,
                               [](const CommunityStats& c, CommunityId x) { return c.id < x; });
    if (it == stats_.end() || it->id != id) return nullptr;
    return &*it;
  }

  const CommunityStats& at(CommunityId id) const {
    const CommunityStats* c = find(id);
    if (c == nullptr) throw Error("unknown community " + std::to_string(id));
    return *c;
  }

  std::uint64_t cut(CommunityId a, CommunityId b) const {
    const auto& list = at(a).cut;
    auto it = std::lower_bound(list.begin(), list.end(), std::make_pair(b, std::uint64_t{0}));
    return it != list.end() && it->first == b ? it->second : 0;
  }

  /// Bookkeeping invariants: sum of k_C is 2m, sum of e_C plus e(C,C') over
  /// unordered pairs is 2m, cut symmetric and strictly positive.
  bool well_formed() const {
    std::uint64_t k_total = 0;
    std::uint64_t mass = 0;
    for (const auto& c : stats_) {
      k_total += c.degree_sum;
      mass += c.internal;
      for (auto [other, w] : c.cut) {
        if (w == 0 || other == c.id) return false;
        const CommunityStats* o = find(other);
        if (o == nullptr || cut(other, c.id) != w) return false;
        if (other > c.id) mass += w;
      }
    }
    return k_total == two_m_ && mass == two_m_;
  }

  friend bool operator==(const PartitionState&, const PartitionState&) = default;

 private:
  std::uint64_t two_m_ = 0;
  std::vector<CommunityId> community_of_;
  std::vector<CommunityStats> stats_;
};

/// Q_t = (1/2m) sum_C [e_C - t k_C^2 / 2m]; t = 1 gives Newman modularity.
inline double generalized_modularity(const PartitionState& p, double t) {
  if (p.two_m() == 0) throw Error("modularity undefined for a graph without edges");
  const long double two_m = static_cast<long double>(p.two_m());
  long double internal = 0;
  long double penalty = 0;
  for (const auto& c : p.communities()) {
    internal += static_cast<long double>(c.internal);
    penalty += static_cast<long double>(c.degree_sum) * static_cast<long double>(c.degree_sum);
  }
  return static_cast<double>((internal - static_cast<long double>(t) * penalty / two_m) / two_m);
}

inline double modularity(const PartitionState& p) { return generalized_modularity(p, 1.0); }

/// Change of Q_t when communities a and b are joined:
/// (1/2m) (e(C,C') - t k_C k_C' / m).
inline double delta_q_t(const PartitionState& p, CommunityId a, CommunityId b, double t) {
  if (a == b) throw Error("delta_q_t needs two distinct communities");
  const auto& ca = p.at(a);
  const auto& cb = p.at(b);
  const long double two_m = static_cast<long double>(p.two_m());
  const long double e = static_cast<long double>(p.cut(a, b));
  const long double kk = static_cast<long double>(ca.degree_sum) * static_cast<long double>(cb.degree_sum);
  return static_cast<double>((e - static_cast<long double>(t) * 2 * kk / two_m) / two_m);
}

/// A connected pair of communities with its merge ratio.
struct CandidateMerge {
  Resolution t;
  CommunityId a = 0;
  CommunityId b = 0;
};

/// The largest e(C,C')*m/(k_C k_C') over connected pairs, the resolution at
/// which joining them stops losing Q_t. Ties go to the smallest
/// (min id, max id); nullopt once no connected pair remains.
inline std::optional<CandidateMerge> next_resolution(const PartitionState& p) {
  std::optional<CandidateMerge> best;
  for (const auto& c : p.communities()) {
    for (auto [other, w] : c.cut) {
      if (other < c.id) continue;
      const auto& o = p.at(other);
      Resolution t = Resolution::make(w * (p.two_m() / 2), c.degree_sum * o.degree_sum);
      if (!best || t > best->t || (t == best->t && std::pair(c.id, other) < std::pair(best->a, best->b))) {
        best = CandidateMerge{t, c.id, other};
      }
    }
  }
  return best;
}

struct WeakOptimality {
  bool ok = true;
  /// A connected pair whose merge would increase Q_t, when !ok.
  std::optional<std::pair<CommunityId, CommunityId>> witness;
};

/// Checks that no connected pair has a positive merge gain at t, which then
/// holds for every larger t as well. Pass the lower end of the partition's
/// resolution interval. Disconnected pairs always lose, so only the cut
/// lists need scanning.
inline WeakOptimality weak_optimality_check(const PartitionState& p, Resolution t) {
  using u128 = unsigned __int128;
  WeakOptimality out;
  for (const auto& c : p.communities()) {
    for (auto [other, w] : c.cut) {
      if (other < c.id) continue;
      const auto& o = p.at(other);
      // gain > 0  <=>  w*m/(k k') > t
      const u128 lhs = static_cast<u128>(w) * (p.two_m() / 2) * t.den;
      const u128 rhs = static_cast<u128>(c.degree_sum) * o.degree_sum * t.num;
      if (lhs > rhs) {
        out.ok = false;
        out.witness = std::pair(c.id, other);
        return out;
      }
    }
  }
  return out;
}

inline void write_partition(std::ostream& os, const Graph& g, std::span<const CommunityId> community_of) {
  for (NodeId v = 0; v < g.num_nodes(); ++v) os << g.label(v) << ' ' << community_of[v] << '\n';
}

/// "node community" lines as token pairs, in file order.
inline std::vector<std::pair<std::string, std::string>> parse_partition(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) return;
    if (tokens.size() != 2) throw ParseError("expected node and community tokens", line_no);
    out.emplace_back(tokens[0], tokens[1]);
  });
  return out;
}

}  // namespace deltacom
