#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "deltacom/graph.hpp"
#include "deltacom/io.hpp"
#include "deltacom/partition.hpp"
#include "deltacom/resolution.hpp"

namespace deltacom {

/// One agglomeration step: communities a and b were joined into result at
/// resolution t. Singletons carry their node index as id; the community
/// created by the i-th merge (0-based ordinal) gets id n + i.
struct MergeEvent {
  std::size_t ordinal = 0;
  Resolution t;
  CommunityId a = 0;
  CommunityId b = 0;
  CommunityId result = 0;

  friend bool operator==(const MergeEvent&, const MergeEvent&) = default;
};

/// Ordered merges from the all-singleton partition down to one community
/// per connected component. Merges sharing a resolution value form one
/// batch; the partition after a batch at t is the one valid on (t', t],
/// where t' is the next batch's value.
struct Dendrogram {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  std::vector<MergeEvent> events;
  Resolution t_max;
  Resolution t_min;

  bool empty() const { return events.empty(); }

  /// Distinct resolution values, decreasing.
  std::vector<Resolution> breakpoints() const {
    std::vector<Resolution> out;
    for (const auto& e : events) {
      if (out.empty() || !(out.back() == e.t)) out.push_back(e.t);
    }
    return out;
  }

  /// Number of events applied after each batch, aligned with breakpoints().
  std::vector<std::size_t> batch_ends() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (i + 1 == events.size() || !(events[i + 1].t == events[i].t)) out.push_back(i + 1);
    }
    return out;
  }

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;
};

/// Incremental agglomerative optimizer for Q_t. Each step joins the connected
/// pair with the largest e(C,C')*m/(k_C k_C'), which is exactly the pair with
/// zero gain at the current resolution; the frontier keeps all connected
/// pairs in an ordered tree so the head is found in O(log m).
class Agglomerator {
 public:
  explicit Agglomerator(const Graph& g) : two_m_(g.total_degree()), num_nodes_(g.num_nodes()) {
    if (g.num_edges() == 0) throw Error("deltacom needs a graph with at least one edge");
    const std::size_t capacity = 2 * num_nodes_;
    degree_sum_.assign(capacity, 0);
    internal_.assign(capacity, 0);
    size_.assign(capacity, 0);
    parent_.resize(capacity);
    adjacency_.resize(capacity);
    for (CommunityId c = 0; c < capacity; ++c) parent_[c] = c;
    for (NodeId v = 0; v < num_nodes_; ++v) {
      degree_sum_[v] = g.degree(v);
      size_[v] = 1;
      auto& list = adjacency_[v];
      list.reserve(g.degree(v));
      for (NodeId u : g.neighbors(v)) list.emplace_back(u, 2);
    }
    for (NodeId v = 0; v < num_nodes_; ++v) {
      for (NodeId u : g.neighbors(v)) {
        if (v < u) frontier_.insert(key(v, u, 2));
      }
    }
    next_id_ = static_cast<CommunityId>(num_nodes_);
  }

  bool done() const { return frontier_.empty(); }

  std::optional<CandidateMerge> head() const {
    if (frontier_.empty()) return std::nullopt;
    const PairKey& k = *frontier_.begin();
    return CandidateMerge{Resolution::make(k.cut * (two_m_ / 2), k.kk), k.lo, k.hi};
  }

  /// Joins the frontier head. Precondition: !done().
  MergeEvent merge_next() {
    const PairKey top = *frontier_.begin();
    frontier_.erase(frontier_.begin());
    const CommunityId a = top.lo;
    const CommunityId b = top.hi;
    const CommunityId r = next_id_++;
    MergeEvent event{events_.size(), Resolution::make(top.cut * (two_m_ / 2), top.kk), a, b, r};

    auto& la = adjacency_[a];
    auto& lb = adjacency_[b];
    std::vector<std::pair<CommunityId, std::uint64_t>> merged;
    merged.reserve(la.size() + lb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < la.size() || j < lb.size()) {
      if (i < la.size() && la[i].first == b) {
        ++i;
        continue;
      }
      if (j < lb.size() && lb[j].first == a) {
        ++j;
        continue;
      }
      if (j >= lb.size() || (i < la.size() && la[i].first < lb[j].first)) {
        merged.push_back(la[i++]);
      } else if (i >= la.size() || lb[j].first < la[i].first) {
        merged.push_back(lb[j++]);
      } else {
        merged.emplace_back(la[i].first, la[i].second + lb[j].second);
        ++i;
        ++j;
      }
    }

    // Rekey every pair touching a or b before their degrees change.
    for (const auto& [d, w] : la) {
      if (d != b) frontier_.erase(key(a, d, w));
    }
    for (const auto& [d, w] : lb) {
      if (d != a) frontier_.erase(key(b, d, w));
    }
    degree_sum_[r] = degree_sum_[a] + degree_sum_[b];
    internal_[r] = internal_[a] + internal_[b] + top.cut;
    size_[r] = size_[a] + size_[b];
    for (const auto& [d, w] : merged) {
      auto& ld = adjacency_[d];
      for (CommunityId gone : {std::max(a, b), std::min(a, b)}) {
        auto it = std::lower_bound(ld.begin(), ld.end(), gone,
                                   [](const auto& entry, CommunityId x) { return entry.first < x; });
        if (it != ld.end() && it->first == gone) ld.erase(it);
      }
      ld.emplace_back(r, w);
      frontier_.insert(key(d, r, w));
    }
    parent_[a] = r;
    parent_[b] = r;
    std::vector<std::pair<CommunityId, std::uint64_t>>().swap(la);
    std::vector<std::pair<CommunityId, std::uint64_t>>().swap(lb);
    adjacency_[r] = std::move(merged);
    events_.push_back(event);
    return event;
  }

  std::span<const MergeEvent> events() const { return events_; }

  CommunityId community_of(NodeId v) const {
    CommunityId c = v;
    while (parent_[c] != c) c = parent_[c];
    CommunityId x = v;
    while (parent_[x] != c) {
      CommunityId next = parent_[x];
      parent_[x] = c;
      x = next;
    }
    return c;
  }

  /// Current partition built from the incremental aggregates (no recount).
  PartitionState snapshot() const {
    std::vector<CommunityId> assignment(num_nodes_);
    std::vector<CommunityId> live;
    for (NodeId v = 0; v < num_nodes_; ++v) {
      assignment[v] = community_of(v);
      live.push_back(assignment[v]);
    }
    std::sort(live.begin(), live.end());
    live.erase(std::unique(live.begin(), live.end()), live.end());
    std::vector<CommunityStats> stats;
    stats.reserve(live.size());
    for (CommunityId c : live) {
      CommunityStats s;
      s.id = c;
      s.size = size_[c];
      s.degree_sum = degree_sum_[c];
      s.internal = internal_[c];
      s.cut = adjacency_[c];
      std::sort(s.cut.begin(), s.cut.end());
      stats.push_back(std::move(s));
    }
    return PartitionState::from_parts(two_m_, std::move(assignment), std::move(stats));
  }

  Dendrogram finish() && {
    while (!done()) merge_next();
    Dendrogram d;
    d.num_nodes = num_nodes_;
    d.num_edges = static_cast<std::size_t>(two_m_ / 2);
    d.events = std::move(events_);
    d.t_max = d.events.front().t;
    d.t_min = d.events.back().t;
    return d;
  }

 private:
  // Frontier entry: cut = e(C,C'), kk = k_C * k_C'. Ordered by ratio
  // cut/kk decreasing, then (lo, hi) increasing.
  struct PairKey {
    std::uint64_t cut;
    std::uint64_t kk;
    CommunityId lo;
    CommunityId hi;
  };
  struct PairOrder {
    bool operator()(const PairKey& x, const PairKey& y) const {
      using u128 = unsigned __int128;
      const u128 lhs = static_cast<u128>(x.cut) * y.kk;
      const u128 rhs = static_cast<u128>(y.cut) * x.kk;
      if (lhs != rhs) return lhs > rhs;
      if (x.lo != y.lo) return x.lo < y.lo;
      return x.hi < y.hi;
    }
  };

  PairKey key(CommunityId c, CommunityId d, std::uint64_t cut) const {
    return PairKey{cut, degree_sum_[c] * degree_sum_[d], std::min(c, d), std::max(c, d)};
  }

  std::uint64_t two_m_;
  std::size_t num_nodes_;
  CommunityId next_id_ = 0;
  std::vector<std::uint64_t> degree_sum_;
  std::vector<std::uint64_t> internal_;
  std::vector<std::uint64_t> size_;
  mutable std::vector<CommunityId> parent_;
  std::vector<std::vector<std::pair<CommunityId, std::uint64_t>>> adjacency_;
  std::set<PairKey, PairOrder> frontier_;
  std::vector<MergeEvent> events_;
};

/// Full multiresolution run: every weakly optimal partition C_t from
/// t_max (all singletons) down to t_min (one community per component).
inline Dendrogram run(const Graph& g) { return Agglomerator(g).finish(); }

/// Node-to-community labels after replaying a prefix of the merges.
struct Assignment {
  std::vector<CommunityId> community_of;
  std::size_t merges_applied = 0;
  bool clamped = false;
};

inline Assignment replay(const Dendrogram& d, std::size_t merges) {
  Assignment out;
  merges = std::min(merges, d.events.size());
  std::vector<CommunityId> parent(d.num_nodes + merges);
  for (CommunityId c = 0; c < parent.size(); ++c) parent[c] = c;
  for (std::size_t i = 0; i < merges; ++i) {
    const auto& e = d.events[i];
    parent[e.a] = e.result;
    parent[e.b] = e.result;
  }
  out.community_of.resize(d.num_nodes);
  for (NodeId v = 0; v < d.num_nodes; ++v) {
    CommunityId c = v;
    while (parent[c] != c) c = parent[c];
    CommunityId x = v;
    while (parent[x] != c) {
      CommunityId next = parent[x];
      parent[x] = c;
      x = next;
    }
    out.community_of[v] = c;
  }
  out.merges_applied = merges;
  return out;
}

/// Relative tolerance under which a decimal resolution selects a breakpoint.
inline constexpr long double kResolutionTolerance = 1e-12L;

/// Number of merges whose partition is C_t: all events with resolution >= t.
/// Resolutions above t_max select the singletons, as does t_max itself unless
/// every merge happened there (then the last partition wins).
inline std::size_t merges_at(const Dendrogram& d, Resolution t) {
  if (d.empty()) throw Error("empty dendrogram");
  if (t > d.t_max || (t == d.t_max && d.t_min < d.t_max)) return 0;
  auto it = std::partition_point(d.events.begin(), d.events.end(),
                                 [t](const MergeEvent& e) { return e.t >= t; });
  return static_cast<std::size_t>(it - d.events.begin());
}

/// Decimal variant; t matches a breakpoint within kResolutionTolerance.
inline std::size_t merges_at(const Dendrogram& d, double t) {
  if (d.empty()) throw Error("empty dendrogram");
  const long double lowered = static_cast<long double>(t) * (1.0L - kResolutionTolerance);
  auto reaches = [lowered](const Resolution& r) {
    return static_cast<long double>(r.num) >= lowered * static_cast<long double>(r.den);
  };
  const long double raised = static_cast<long double>(t) * (1.0L + kResolutionTolerance);
  const bool above_max = static_cast<long double>(d.t_max.num) < raised * static_cast<long double>(d.t_max.den);
  if (above_max && (!reaches(d.t_max) || d.t_min < d.t_max)) return 0;
  auto it = std::partition_point(d.events.begin(), d.events.end(),
                                 [&](const MergeEvent& e) { return reaches(e.t); });
  return static_cast<std::size_t>(it - d.events.begin());
}

inline Assignment assignment_at(const Dendrogram& d, double t) {
  if (d.empty()) throw Error("empty dendrogram");
  const bool clamped = t > d.t_max.value() || t < d.t_min.value();
  Assignment out = replay(d, merges_at(d, t));
  out.clamped = clamped;
  return out;
}

inline Assignment assignment_at(const Dendrogram& d, Resolution t) {
  if (d.empty()) throw Error("empty dendrogram");
  const bool clamped = t > d.t_max || t < d.t_min;
  Assignment out = replay(d, merges_at(d, t));
  out.clamped = clamped;
  return out;
}

inline PartitionState partition_at(const Graph& g, const Dendrogram& d, double t) {
  return PartitionState::from_assignment(g, assignment_at(d, t).community_of);
}

inline PartitionState partition_at(const Graph& g, const Dendrogram& d, Resolution t) {
  return PartitionState::from_assignment(g, assignment_at(d, t).community_of);
}

/// Header "n m t_max t_min", then "ordinal t_rational t_decimal a b result".
inline void write_dendrogram(std::ostream& os, const Dendrogram& d) {
  os << d.num_nodes << ' ' << d.num_edges << ' ' << d.t_max.str() << ' ' << d.t_min.str() << '\n';
  for (const auto& e : d.events) {
    os << e.ordinal << ' ' << e.t.str() << ' ' << format_double(e.t.value()) << ' ' << e.a << ' ' << e.b << ' '
       << e.result << '\n';
  }
}

inline Dendrogram parse_dendrogram(std::string_view text) {
  Dendrogram d;
  bool header = true;
  auto to_u64 = [](std::string_view s, std::size_t line_no) {
    try {
      std::size_t used = 0;
      std::string str(s);
      auto v = std::stoull(str, &used);
      if (used != str.size()) throw ParseError("bad integer " + str, line_no);
      return static_cast<std::uint64_t>(v);
    } catch (const std::logic_error&) {
      throw ParseError("bad integer " + std::string(s), line_no);
    }
  };
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto tok = detail::tokenize(line);
    if (tok.empty()) return;
    try {
      if (header) {
        if (tok.size() != 4) throw ParseError("dendrogram header needs n m t_max t_min", line_no);
        d.num_nodes = to_u64(tok[0], line_no);
        d.num_edges = to_u64(tok[1], line_no);
        d.t_max = Resolution::parse(tok[2]);
        d.t_min = Resolution::parse(tok[3]);
        header = false;
        return;
      }
      if (tok.size() != 6) throw ParseError("merge line needs ordinal t decimal a b result", line_no);
      MergeEvent e;
      e.ordinal = to_u64(tok[0], line_no);
      e.t = Resolution::parse(tok[1]);
      e.a = static_cast<CommunityId>(to_u64(tok[3], line_no));
      e.b = static_cast<CommunityId>(to_u64(tok[4], line_no));
      e.result = static_cast<CommunityId>(to_u64(tok[5], line_no));
      if (e.ordinal != d.events.size() || e.result != d.num_nodes + e.ordinal || e.a >= e.result ||
          e.b >= e.result || e.a == e.b) {
        throw ParseError("inconsistent merge event", line_no);
      }
      if (!d.events.empty() && e.t > d.events.back().t) throw ParseError("resolution increases", line_no);
      d.events.push_back(e);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(err.what(), line_no);
    }
  });
  if (header) throw Error("empty dendrogram file");
  return d;
}

}  // namespace deltacom
