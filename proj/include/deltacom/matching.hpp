#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "deltacom/deltacom.hpp"
#include "deltacom/graph.hpp"
#include "deltacom/io.hpp"
#include "deltacom/partition.hpp"
#include "deltacom/resolution.hpp"

namespace deltacom {

/// Groups below this size are reported but flagged as small.
inline constexpr std::size_t kSmallGroup = 5;

struct Group {
  std::string name;
  std::vector<NodeId> nodes;
};

/// Ground-truth node groups (disjoint), ordered by first appearance of the
/// group in the affiliation table.
struct GroundTruth {
  std::vector<Group> groups;

  static GroundTruth from_affiliations(const AffiliationMap& aff, std::size_t min_size = 1) {
    std::vector<Group> all(aff.num_groups());
    for (GroupId g = 0; g < aff.num_groups(); ++g) all[g].name = aff.group_name(g);
    auto raw = aff.raw();
    for (NodeId v = 0; v < raw.size(); ++v) {
      if (raw[v] != AffiliationMap::kNone) all[raw[v]].nodes.push_back(v);
    }
    GroundTruth gt;
    for (auto& g : all) {
      if (!g.nodes.empty() && g.nodes.size() >= min_size) gt.groups.push_back(std::move(g));
    }
    return gt;
  }

  /// Group index per node, or -1.
  std::vector<std::int64_t> membership(std::size_t num_nodes) const {
    std::vector<std::int64_t> out(num_nodes, -1);
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (NodeId v : groups[i].nodes) out[v] = static_cast<std::int64_t>(i);
    }
    return out;
  }
};

/// "group node node ..." lines. Nodes missing from g are skipped with a
/// warning; a node listed in two groups is an error.
inline GroundTruth parse_ground_truth(std::string_view text, const Graph& g, std::vector<std::string>& warnings) {
  GroundTruth gt;
  std::vector<bool> taken(g.num_nodes(), false);
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) return;
    Group grp;
    grp.name = std::string(tokens[0]);
    std::size_t skipped = 0;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto v = g.find(tokens[i]);
      if (!v) {
        ++skipped;
        continue;
      }
      if (taken[*v]) throw ParseError("node " + std::string(tokens[i]) + " is in two groups", line_no);
      taken[*v] = true;
      grp.nodes.push_back(*v);
    }
    if (grp.nodes.empty()) {
      warnings.push_back("line " + std::to_string(line_no) + ": group " + grp.name + " has no node in the graph");
      return;
    }
    if (skipped > 0) {
      warnings.push_back("line " + std::to_string(line_no) + ": " + std::to_string(skipped) + " unknown nodes of " +
                         grp.name + " skipped");
    }
    gt.groups.push_back(std::move(grp));
  });
  return gt;
}

/// Best-matching community of one group.
struct MatchResult {
  std::string group;
  std::size_t group_size = 0;
  std::optional<CommunityId> community;
  double score = 0.0;
  /// Resolution at which the community was found (multiresolution modes).
  std::optional<double> resolution;
  std::optional<Resolution> exact_resolution;
  std::string method;
  bool small = false;
};

inline double jaccard(std::span<const NodeId> a, std::span<const NodeId> b) {
  if (a.empty() && b.empty()) throw Error("jaccard of two empty sets");
  std::vector<NodeId> sa(a.begin(), a.end());
  std::vector<NodeId> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  std::size_t common = 0;
  auto i = sa.begin();
  auto j = sb.begin();
  while (i != sa.end() && j != sb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

/// J from counts: |C ∩ A| / (|C| + |A| - |C ∩ A|).
inline double jaccard_from_counts(std::uint64_t common, std::uint64_t size_c, std::uint64_t size_a) {
  return static_cast<double>(common) / static_cast<double>(size_c + size_a - common);
}

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline MatchResult blank_result(const Group& g, std::string_view method) {
  MatchResult r;
  r.group = g.name;
  r.group_size = g.nodes.size();
  r.method = std::string(method);
  r.small = g.nodes.size() < kSmallGroup;
  return r;
}

}  // namespace detail

/// Best Jaccard match of each group inside a single partition. Only
/// communities meeting the group are candidates; ties go to the smaller id.
inline std::vector<MatchResult> recall_r1(std::span<const CommunityId> community_of, const GroundTruth& gt,
                                          std::string_view method = "r1", unsigned threads = 1) {
  std::unordered_map<CommunityId, std::uint64_t> sizes;
  for (CommunityId c : community_of) ++sizes[c];
  std::vector<MatchResult> out(gt.groups.size());
  detail::parallel_for(gt.groups.size(), threads, [&](std::size_t i) {
    const Group& g = gt.groups[i];
    MatchResult r = detail::blank_result(g, method);
    std::unordered_map<CommunityId, std::uint64_t> common;
    for (NodeId v : g.nodes) ++common[community_of[v]];
    for (auto [c, k] : common) {
      const double j = jaccard_from_counts(k, sizes.at(c), g.nodes.size());
      if (!r.community || j > r.score || (j == r.score && c < *r.community)) {
        r.score = j;
        r.community = c;
      }
    }
    out[i] = std::move(r);
  });
  return out;
}

inline std::vector<MatchResult> recall_r1(const PartitionState& p, const GroundTruth& gt,
                                          std::string_view method = "r1", unsigned threads = 1) {
  return recall_r1(p.community_of(), gt, method, threads);
}

/// Best Jaccard match of each group over every partition of the dendrogram.
/// Walks the merges once; per community it tracks only the groups it meets,
/// and after each batch of equal-resolution merges re-scores only groups
/// whose overlap grew.
inline std::vector<MatchResult> recall_r2(const Dendrogram& d, const GroundTruth& gt) {
  if (d.empty()) throw Error("empty dendrogram");
  const std::size_t n = d.num_nodes;
  const std::size_t total = n + d.events.size();
  auto member = gt.membership(n);

  using GroupCounts = std::unordered_map<std::uint32_t, std::uint32_t>;
  std::vector<GroupCounts> counts(total);
  std::vector<std::vector<std::uint32_t>> dirty(total);
  std::vector<std::uint64_t> size(total, 0);
  std::vector<bool> alive(total, false);

  std::vector<MatchResult> out;
  out.reserve(gt.groups.size());
  for (const auto& g : gt.groups) {
    MatchResult r = detail::blank_result(g, "r2");
    // Singletons: the initial partition, labelled by t_max.
    r.community = *std::min_element(g.nodes.begin(), g.nodes.end());
    r.score = jaccard_from_counts(1, 1, g.nodes.size());
    r.exact_resolution = d.t_max;
    r.resolution = d.t_max.value();
    out.push_back(std::move(r));
  }
  for (NodeId v = 0; v < n; ++v) {
    size[v] = 1;
    alive[v] = true;
    if (member[v] >= 0) counts[v].emplace(static_cast<std::uint32_t>(member[v]), 1);
  }

  std::vector<CommunityId> created;
  struct Candidate {
    double score;
    CommunityId community;
  };
  std::map<std::uint32_t, Candidate> batch_best;
  std::size_t i = 0;
  while (i < d.events.size()) {
    const Resolution t = d.events[i].t;
    created.clear();
    for (; i < d.events.size() && d.events[i].t == t; ++i) {
      const auto& e = d.events[i];
      CommunityId big = e.a;
      CommunityId small = e.b;
      if (counts[big].size() < counts[small].size()) std::swap(big, small);
      GroupCounts merged = std::move(counts[big]);
      std::vector<std::uint32_t> touched = std::move(dirty[big]);
      for (auto [grp, k] : counts[small]) {
        merged[grp] += k;
        touched.push_back(grp);
      }
      touched.insert(touched.end(), dirty[small].begin(), dirty[small].end());
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      GroupCounts().swap(counts[small]);
      std::vector<std::uint32_t>().swap(dirty[small]);
      counts[e.result] = std::move(merged);
      dirty[e.result] = std::move(touched);
      size[e.result] = size[e.a] + size[e.b];
      alive[e.a] = false;
      alive[e.b] = false;
      alive[e.result] = true;
      created.push_back(e.result);
    }
    batch_best.clear();
    for (CommunityId c : created) {
      if (!alive[c]) continue;
      for (auto grp : dirty[c]) {
        const double j = jaccard_from_counts(counts[c].at(grp), size[c], gt.groups[grp].nodes.size());
        auto [it, inserted] = batch_best.try_emplace(grp, Candidate{j, c});
        if (!inserted && (j > it->second.score || (j == it->second.score && c < it->second.community))) {
          it->second = Candidate{j, c};
        }
      }
      dirty[c].clear();
    }
    for (auto [grp, cand] : batch_best) {
      MatchResult& r = out[grp];
      if (cand.score > r.score) {
        r.score = cand.score;
        r.community = cand.community;
        r.exact_resolution = t;
        r.resolution = t.value();
      }
    }
  }
  return out;
}

/// Per-group matching inside C_t at a given resolution per group, choosing
/// the community from a uniform sample of the group and scoring it against
/// the whole group. T is double or Resolution.
template <typename T>
std::vector<MatchResult> recall_at(const Dendrogram& d, const GroundTruth& gt, std::span<const T> resolutions,
                                   double sample_fraction, std::uint64_t seed, std::string_view method = "r3") {
  if (d.empty()) throw Error("empty dendrogram");
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) throw Error("sample_fraction must be in (0, 1]");
  if (resolutions.size() != gt.groups.size()) throw Error("one resolution per group expected");
  const std::size_t n = d.num_nodes;
  const std::size_t groups = gt.groups.size();

  std::vector<std::size_t> merges(groups);
  for (std::size_t i = 0; i < groups; ++i) merges[i] = merges_at(d, resolutions[i]);
  std::vector<std::size_t> order(groups);
  for (std::size_t i = 0; i < groups; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return merges[x] < merges[y]; });

  // Union-find over nodes; each root remembers its community id and size.
  std::vector<NodeId> parent(n);
  std::vector<std::uint64_t> size(n, 1);
  std::vector<CommunityId> label(n);
  std::vector<NodeId> root_of(n + d.events.size());
  for (NodeId v = 0; v < n; ++v) {
    parent[v] = v;
    label[v] = v;
    root_of[v] = v;
  }
  auto find = [&](NodeId v) {
    NodeId r = v;
    while (parent[r] != r) r = parent[r];
    while (parent[v] != r) {
      NodeId next = parent[v];
      parent[v] = r;
      v = next;
    }
    return r;
  };

  std::vector<MatchResult> out(groups);
  std::size_t applied = 0;
  std::unordered_map<NodeId, std::uint64_t> common;
  for (std::size_t gi : order) {
    for (; applied < merges[gi]; ++applied) {
      const auto& e = d.events[applied];
      NodeId ra = root_of[e.a];
      NodeId rb = root_of[e.b];
      if (size[ra] < size[rb]) std::swap(ra, rb);
      parent[rb] = ra;
      size[ra] += size[rb];
      label[ra] = e.result;
      root_of[e.result] = ra;
    }
    const Group& g = gt.groups[gi];
    MatchResult r = detail::blank_result(g, method);
    r.exact_resolution.reset();
    if constexpr (std::is_same_v<T, Resolution>) {
      r.exact_resolution = resolutions[gi];
      r.resolution = resolutions[gi].value();
    } else {
      r.resolution = static_cast<double>(resolutions[gi]);
    }

    std::vector<NodeId> sample;
    const auto want = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(sample_fraction * static_cast<double>(g.nodes.size()) - 1e-9)));
    if (want >= g.nodes.size()) {
      sample = g.nodes;
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(gi), static_cast<std::uint32_t>(gi >> 32)};
      std::mt19937_64 rng(seq);
      std::sample(g.nodes.begin(), g.nodes.end(), std::back_inserter(sample), want, rng);
    }

    common.clear();
    for (NodeId v : sample) ++common[find(v)];
    std::optional<NodeId> best_root;
    double best = -1.0;
    for (auto [root, k] : common) {
      const double j = jaccard_from_counts(k, size[root], sample.size());
      if (!best_root || j > best || (j == best && label[root] < label[*best_root])) {
        best = j;
        best_root = root;
      }
    }
    std::uint64_t hits = 0;
    for (NodeId v : g.nodes) hits += find(v) == *best_root ? 1 : 0;
    r.community = label[*best_root];
    r.score = jaccard_from_counts(hits, size[*best_root], g.nodes.size());
    out[gi] = std::move(r);
  }
  return out;
}

/// log10(t_best) = intercept + slope * log10(size).
struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double correlation = 0.0;
  std::size_t points = 0;
};

inline RegressionFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("regression needs paired samples");
  if (x.size() < 3) throw Error("regression needs at least 3 points");
  const double n = static_cast<double>(x.size());
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0;
  double syy = 0;
  double sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw Error("regression: no variance in group sizes");
  RegressionFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  fit.r2 = syy > 0.0 ? std::min(1.0, fit.correlation * fit.correlation) : 1.0;
  return fit;
}

/// Log-log least squares of best resolution against group size, over the
/// groups of at least min_size nodes that have a positive resolution.
inline RegressionFit size_resolution_regression(std::span<const MatchResult> results, std::size_t min_size = 1) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : results) {
    if (r.group_size < min_size || !r.resolution || !(*r.resolution > 0.0) || !std::isfinite(*r.resolution)) {
      continue;
    }
    x.push_back(std::log10(static_cast<double>(r.group_size)));
    y.push_back(std::log10(*r.resolution));
  }
  return fit_line(x, y);
}

struct PredictedResolution {
  double t = 0.0;
  bool clamped = false;
};

/// t = 10^(intercept + slope * log10(size)), clamped to [t_lo, t_hi].
inline PredictedResolution predict_resolution(const RegressionFit& fit, std::size_t size,
                                              double t_lo = 0.0,
                                              double t_hi = std::numeric_limits<double>::infinity()) {
  if (size < 1) throw Error("predict_resolution: size must be >= 1");
  PredictedResolution p;
  p.t = std::pow(10.0, fit.intercept + fit.slope * std::log10(static_cast<double>(size)));
  if (p.t > t_hi) {
    p.t = t_hi;
    p.clamped = true;
  } else if (p.t < t_lo) {
    p.t = t_lo;
    p.clamped = true;
  }
  return p;
}

/// Sample-based retrieval: resolution predicted from the group size, then
/// the community best matching a random sample of the group.
inline std::vector<MatchResult> recall_r3(const Dendrogram& d, const GroundTruth& gt, double sample_fraction,
                                          const RegressionFit& fit, std::uint64_t seed,
                                          std::size_t* clamped_count = nullptr) {
  std::vector<double> t(gt.groups.size());
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < gt.groups.size(); ++i) {
    auto p = predict_resolution(fit, gt.groups[i].nodes.size(), d.t_min.value(), d.t_max.value());
    t[i] = p.t;
    clamped += p.clamped ? 1 : 0;
  }
  if (clamped_count != nullptr) *clamped_count = clamped;
  return recall_at<double>(d, gt, t, sample_fraction, seed, "r3");
}

/// Mean score; equals the area above the empirical CDF of the scores.
inline double mean_recall(std::span<const MatchResult> results) {
  if (results.empty()) throw Error("mean_recall of no results");
  double sum = 0.0;
  for (const auto& r : results) sum += r.score;
  return sum / static_cast<double>(results.size());
}

/// Right-continuous empirical CDF: (score, fraction of scores <= score) at
/// each distinct score.
inline std::vector<std::pair<double, double>> cumulative_distribution(std::span<const double> scores) {
  if (scores.empty()) throw Error("cumulative_distribution of no scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    out.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

inline std::vector<double> scores_of(std::span<const MatchResult> results) {
  std::vector<double> out;
  out.reserve(results.size());
  for (const auto& r : results) out.push_back(r.score);
  return out;
}

struct NodeNotion {
  bool labelled = false;
  std::uint64_t k = 0;
  std::uint64_t k_in = 0;
  /// Largest number of edges into any single other group.
  std::uint64_t k_out_max = 0;
  bool strong = false;
  bool hu = false;
};

struct GroupNotion {
  std::size_t size = 0;
  std::size_t strong = 0;
  std::size_t hu = 0;
};

struct NotionReport {
  std::vector<NodeNotion> nodes;
  std::vector<GroupNotion> groups;
  std::size_t labelled_nodes = 0;
  std::size_t strong_nodes = 0;
  std::size_t hu_violators = 0;
  std::size_t groups_with_hu_violators = 0;
};

/// Per-node community notions against a labelling (group index per node,
/// or kNone). Strong: k_in > k/2. Hu: k_in strictly above the edge count to
/// every other single group. Unlabelled neighbours count toward k only.
inline NotionReport community_notion_diagnostics(const Graph& g, std::span<const GroupId> label,
                                                 std::size_t num_groups) {
  NotionReport rep;
  rep.nodes.resize(g.num_nodes());
  rep.groups.resize(num_groups);
  std::unordered_map<GroupId, std::uint64_t> foreign;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    NodeNotion& nn = rep.nodes[v];
    nn.k = g.degree(v);
    if (label[v] == AffiliationMap::kNone) continue;
    nn.labelled = true;
    foreign.clear();
    for (NodeId u : g.neighbors(v)) {
      if (label[u] == label[v]) {
        ++nn.k_in;
      } else if (label[u] != AffiliationMap::kNone) {
        nn.k_out_max = std::max(nn.k_out_max, ++foreign[label[u]]);
      }
    }
    nn.strong = 2 * nn.k_in > nn.k;
    nn.hu = nn.k_in > nn.k_out_max;
    auto& gn = rep.groups[label[v]];
    ++gn.size;
    gn.strong += nn.strong ? 1 : 0;
    gn.hu += nn.hu ? 1 : 0;
    ++rep.labelled_nodes;
    rep.strong_nodes += nn.strong ? 1 : 0;
    rep.hu_violators += nn.hu ? 0 : 1;
  }
  for (const auto& gn : rep.groups) rep.groups_with_hu_violators += gn.hu < gn.size ? 1 : 0;
  return rep;
}

inline void write_matches_csv(std::ostream& os, std::span<const MatchResult> results) {
  os << "group,size,community,score,resolution,resolution_exact,method,small\n";
  for (const auto& r : results) {
    os << r.group << ',' << r.group_size << ',' << (r.community ? std::to_string(*r.community) : std::string())
       << ',' << format_double(r.score) << ',' << (r.resolution ? format_double(*r.resolution) : std::string())
       << ',' << (r.exact_resolution ? r.exact_resolution->str() : std::string()) << ',' << r.method << ','
       << (r.small ? 1 : 0) << '\n';
  }
}

inline std::vector<MatchResult> parse_matches_csv(std::string_view text) {
  std::vector<MatchResult> out;
  bool header = true;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) return;
    if (header) {
      header = false;
      if (line != "group,size,community,score,resolution,resolution_exact,method,small") {
        throw ParseError("unexpected match CSV header", line_no);
      }
      return;
    }
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (;;) {
      auto comma = line.find(',', pos);
      f.emplace_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (f.size() != 8) throw ParseError("match CSV row needs 8 fields", line_no);
    try {
      MatchResult r;
      r.group = f[0];
      r.group_size = std::stoull(f[1]);
      if (!f[2].empty()) r.community = static_cast<CommunityId>(std::stoull(f[2]));
      r.score = std::stod(f[3]);
      if (!f[4].empty()) r.resolution = std::stod(f[4]);
      if (!f[5].empty()) r.exact_resolution = Resolution::parse(f[5]);
      r.method = f[6];
      r.small = f[7] == "1";
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("malformed match CSV row", line_no);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  });
  return out;
}

inline void write_cdf_csv(std::ostream& os, std::span<const std::pair<double, double>> cdf) {
  os << "score,cumulative_fraction\n";
  for (auto [s, f] : cdf) os << format_double(s) << ',' << format_double(f) << '\n';
}

inline void write_fit(std::ostream& os, const RegressionFit& fit) {
  os << "slope,intercept,r2,correlation,points\n"
     << format_double(fit.slope) << ',' << format_double(fit.intercept) << ',' << format_double(fit.r2) << ','
     << format_double(fit.correlation) << ',' << fit.points << '\n';
}

inline RegressionFit parse_fit(std::string_view text) {
  auto nl = text.find('\n');
  if (nl == std::string_view::npos || text.substr(0, nl) != "slope,intercept,r2,correlation,points") {
    throw Error("unexpected regression file header");
  }
  std::string row(text.substr(nl + 1));
  while (!row.empty() && (row.back() == '\n' || row.back() == '\r')) row.pop_back();
  RegressionFit fit;
  char tail = 0;
  unsigned long long points = 0;
  if (std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf,%llu%c", &fit.slope, &fit.intercept, &fit.r2, &fit.correlation,
                  &points, &tail) != 5) {
    throw Error("malformed regression row");
  }
  fit.points = points;
  return fit;
}

}  // namespace deltacom
