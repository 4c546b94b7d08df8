#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deltacom/graph.hpp"
#include "deltacom/io.hpp"
#include "deltacom/matching.hpp"
#include "deltacom/preprocess.hpp"

namespace deltacom {

struct ChainDecoration {
  ChainKind kind = ChainKind::kInternalConnection;
  std::size_t count = 0;
  std::size_t min_length = 1;
  std::size_t max_length = 3;
};

/// Planted partition: Erdős–Rényi blocks of the given sizes with internal
/// probability p_in, Bernoulli(p_out) edges between blocks, plus optional
/// chain and tendril decorations.
struct SynthSpec {
  std::vector<std::size_t> sizes;
  double p_in = 0.5;
  double p_out = 0.0;
  std::vector<ChainDecoration> chains;
  std::size_t tendrils = 0;
  std::size_t tendril_min_length = 1;
  std::size_t tendril_max_length = 3;
  std::uint64_t seed = 1;
  std::size_t max_retries = 1000;

  void validate() const {
    if (sizes.empty()) throw Error("synth: no community sizes");
    for (auto s : sizes) {
      if (s < 3) throw Error("synth: community sizes must be >= 3");
    }
    if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) throw Error("synth: need 0 <= p_out < p_in <= 1");
    for (const auto& c : chains) {
      if (c.min_length < 1 || c.max_length < c.min_length) throw Error("synth: bad chain length range");
    }
    if (tendril_min_length < 1 || tendril_max_length < tendril_min_length) {
      throw Error("synth: bad tendril length range");
    }
  }
};

struct PlantedChain {
  ChainKind kind = ChainKind::kOther;
  NodeId a = 0;
  NodeId b = 0;
  std::vector<NodeId> interior;
};

struct PlantedTendril {
  NodeId anchor = 0;
  std::vector<NodeId> nodes;
};

struct SynthGraph {
  Graph graph;
  AffiliationMap affiliations;
  /// Planted blocks over the base (non-decoration) nodes.
  GroundTruth truth;
  std::size_t base_nodes = 0;
  std::size_t base_edges = 0;
  std::vector<PlantedChain> chains;
  std::vector<PlantedTendril> tendrils;
};

namespace detail {

/// Bernoulli(p) over all pairs i < j of [0, n), visiting only the successes
/// via geometric skips.
template <typename Fn>
void for_each_random_pair(std::size_t n, double p, std::mt19937_64& rng, Fn&& fn) {
  if (n < 2 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::size_t v = 1; v < n; ++v) {
      for (std::size_t w = 0; w < v; ++w) fn(w, v);
    }
    return;
  }
  std::geometric_distribution<std::uint64_t> skip(p);
  std::uint64_t v = 1;
  std::uint64_t w = 0;
  bool first = true;
  for (;;) {
    std::uint64_t step = skip(rng);
    w += first ? step : step + 1;
    first = false;
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v >= n) break;
    fn(static_cast<std::size_t>(w), static_cast<std::size_t>(v));
  }
}

inline bool is_connected(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  if (n <= 1) return true;
  std::vector<std::vector<NodeId>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<bool> seen(n, false);
  std::deque<NodeId> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : adj[v]) {
      if (!seen[u]) {
        seen[u] = true;
        ++reached;
        queue.push_back(u);
      }
    }
  }
  return reached == n;
}

inline std::vector<std::string> numbered_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return labels;
}

}  // namespace detail

struct Decorated {
  Graph graph;
  AffiliationMap affiliations;
  std::vector<PlantedChain> chains;
};

/// Inserts count degree-2 paths between sampled endpoint pairs. Endpoints are
/// affiliated nodes of degree >= 3; interiors get affiliations that realise
/// the requested taxonomy (same group, none, or a third group for "other").
inline Decorated decorate_chains(const Graph& g, const AffiliationMap& aff, const ChainDecoration& deco,
                                 std::uint64_t seed) {
  Decorated out;
  if (deco.count == 0) {
    out.graph = g;
    out.affiliations = aff;
    return out;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<NodeId>> eligible_by_group(aff.num_groups());
  std::vector<NodeId> eligible;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.degree(v) < 3) continue;
    if (auto grp = aff.group(v)) {
      eligible_by_group[*grp].push_back(v);
      eligible.push_back(v);
    }
  }
  std::vector<GroupId> multi_groups;
  for (GroupId grp = 0; grp < eligible_by_group.size(); ++grp) {
    if (eligible_by_group[grp].size() >= 2) multi_groups.push_back(grp);
  }
  std::size_t groups_with_eligible = 0;
  for (const auto& list : eligible_by_group) groups_with_eligible += list.empty() ? 0 : 1;
  const bool same_group = deco.kind != ChainKind::kInterAsTunnel;
  if (same_group && multi_groups.empty()) throw Error("decorate_chains: no group has two eligible endpoints");
  if (!same_group && groups_with_eligible < 2) throw Error("decorate_chains: need eligible endpoints in two groups");
  if (deco.kind == ChainKind::kOther && aff.num_groups() < 2) throw Error("decorate_chains: need a second group");

  auto labels = g.labels();
  auto edges = g.edges();
  AffiliationMap new_aff = aff;
  std::vector<std::pair<NodeId, GroupId>> interior_groups;
  std::uniform_int_distribution<std::size_t> length(deco.min_length, deco.max_length);
  auto pick = [&rng](std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng); };

  for (std::size_t c = 0; c < deco.count; ++c) {
    PlantedChain chain;
    chain.kind = deco.kind;
    GroupId ga = 0;
    if (same_group) {
      ga = multi_groups[pick(multi_groups.size())];
      const auto& pool = eligible_by_group[ga];
      std::size_t i = pick(pool.size());
      std::size_t j = pick(pool.size() - 1);
      if (j >= i) ++j;
      chain.a = pool[i];
      chain.b = pool[j];
    } else {
      chain.a = eligible[pick(eligible.size())];
      ga = *aff.group(chain.a);
      do {
        chain.b = eligible[pick(eligible.size())];
      } while (*aff.group(chain.b) == ga);
    }
    const std::size_t len = length(rng);
    NodeId prev = chain.a;
    for (std::size_t k = 0; k < len; ++k) {
      auto v = static_cast<NodeId>(labels.size());
      labels.push_back(std::to_string(v));
      chain.interior.push_back(v);
      edges.emplace_back(prev, v);
      prev = v;
    }
    edges.emplace_back(prev, chain.b);
    switch (deco.kind) {
      case ChainKind::kInternalConnection:
        for (NodeId v : chain.interior) interior_groups.emplace_back(v, ga);
        break;
      case ChainKind::kOther: {
        GroupId other = static_cast<GroupId>((ga + 1 + pick(aff.num_groups() - 1)) % aff.num_groups());
        for (NodeId v : chain.interior) interior_groups.emplace_back(v, other);
        break;
      }
      default:
        break;
    }
    out.chains.push_back(std::move(chain));
  }
  GraphBuilder builder;
  for (const auto& l : labels) builder.add_node(l);
  for (auto [u, v] : edges) builder.add_edge(u, v);
  out.graph = builder.build();
  AffiliationMap grown(out.graph.num_nodes());
  for (GroupId grp = 0; grp < aff.num_groups(); ++grp) grown.intern(aff.group_name(grp));
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (auto grp = aff.group(v)) grown.assign(v, *grp);
  }
  for (auto [v, grp] : interior_groups) grown.assign(v, grp);
  out.affiliations = std::move(grown);
  return out;
}

inline SynthGraph generate(const SynthSpec& spec) {
  spec.validate();
  SynthGraph out;
  std::mt19937_64 rng(spec.seed);
  std::size_t n = 0;
  for (auto s : spec.sizes) n += s;
  std::vector<std::uint32_t> block(n);
  std::vector<std::pair<NodeId, NodeId>> edges;
  AffiliationMap aff(n);
  std::size_t offset = 0;
  for (std::size_t b = 0; b < spec.sizes.size(); ++b) {
    const std::size_t s = spec.sizes[b];
    const GroupId grp = aff.intern("g" + std::to_string(b));
    std::vector<std::pair<NodeId, NodeId>> local;
    std::size_t attempt = 0;
    for (;; ++attempt) {
      if (attempt >= spec.max_retries) {
        throw Error("synth: community " + std::to_string(b) + " not connected after " +
                    std::to_string(spec.max_retries) + " draws; use a larger p_in");
      }
      local.clear();
      detail::for_each_random_pair(s, spec.p_in, rng, [&](std::size_t u, std::size_t v) {
        local.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
      });
      if (detail::is_connected(s, local)) break;
    }
    for (auto [u, v] : local) {
      edges.emplace_back(static_cast<NodeId>(offset + u), static_cast<NodeId>(offset + v));
    }
    Group truth_group;
    truth_group.name = aff.group_name(grp);
    for (std::size_t i = 0; i < s; ++i) {
      block[offset + i] = static_cast<std::uint32_t>(b);
      aff.assign(static_cast<NodeId>(offset + i), grp);
      truth_group.nodes.push_back(static_cast<NodeId>(offset + i));
    }
    out.truth.groups.push_back(std::move(truth_group));
    offset += s;
  }
  detail::for_each_random_pair(n, spec.p_out, rng, [&](std::size_t u, std::size_t v) {
    if (block[u] != block[v]) edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  });
  std::sort(edges.begin(), edges.end());
  out.graph = Graph::from_simple_edges(detail::numbered_labels(n), edges);
  out.affiliations = std::move(aff);
  out.base_nodes = n;
  out.base_edges = out.graph.num_edges();

  for (std::size_t i = 0; i < spec.chains.size(); ++i) {
    Decorated d = decorate_chains(out.graph, out.affiliations, spec.chains[i], rng());
    out.graph = std::move(d.graph);
    out.affiliations = std::move(d.affiliations);
    for (auto& c : d.chains) out.chains.push_back(std::move(c));
  }

  if (spec.tendrils > 0) {
    std::vector<NodeId> anchors;
    for (NodeId v = 0; v < out.base_nodes; ++v) {
      if (out.graph.degree(v) >= 3) anchors.push_back(v);
    }
    if (anchors.empty()) throw Error("synth: no node of degree >= 3 to anchor tendrils");
    auto labels = out.graph.labels();
    auto all_edges = out.graph.edges();
    std::uniform_int_distribution<std::size_t> length(spec.tendril_min_length, spec.tendril_max_length);
    std::uniform_int_distribution<std::size_t> which(0, anchors.size() - 1);
    for (std::size_t t = 0; t < spec.tendrils; ++t) {
      PlantedTendril tendril;
      tendril.anchor = anchors[which(rng)];
      const std::size_t len = length(rng);
      NodeId prev = tendril.anchor;
      for (std::size_t k = 0; k < len; ++k) {
        auto v = static_cast<NodeId>(labels.size());
        labels.push_back(std::to_string(v));
        tendril.nodes.push_back(v);
        all_edges.emplace_back(prev, v);
        prev = v;
      }
      out.tendrils.push_back(std::move(tendril));
    }
    AffiliationMap grown(labels.size());
    for (GroupId grp = 0; grp < out.affiliations.num_groups(); ++grp) grown.intern(out.affiliations.group_name(grp));
    for (NodeId v = 0; v < out.graph.num_nodes(); ++v) {
      if (auto grp = out.affiliations.group(v)) grown.assign(v, *grp);
    }
    std::sort(all_edges.begin(), all_edges.end());
    out.graph = Graph::from_simple_edges(std::move(labels), all_edges);
    out.affiliations = std::move(grown);
  }
  return out;
}

namespace detail {

inline std::vector<std::size_t> parse_size_list(std::string_view s) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    std::string item(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) {
      auto x = item.find('x');
      if (x == std::string::npos) {
        out.push_back(std::stoull(item));
      } else {
        const std::size_t size = std::stoull(item.substr(0, x));
        const std::size_t copies = std::stoull(item.substr(x + 1));
        out.insert(out.end(), copies, size);
      }
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::pair<std::size_t, std::size_t> parse_range(std::string_view s) {
  auto v = parse_size_list(s);
  if (v.size() == 1) return {v[0], v[0]};
  if (v.size() != 2) throw Error("expected min,max");
  return {v[0], v[1]};
}

}  // namespace detail

/// Flat key=value spec, "version=1" first. sizes accepts "SxC" for C
/// communities of size S, e.g. "sizes=20x10,40".
inline SynthSpec parse_synth_spec(std::string_view text) {
  SynthSpec spec;
  std::pair<std::size_t, std::size_t> chain_len{1, 3};
  bool versioned = false;
  detail::for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    auto hash = raw.find('#');
    std::string line(raw.substr(0, hash));
    line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; }),
               line.end());
    if (line.empty()) return;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    try {
      if (key == "version") {
        if (value != "1") throw ParseError("unsupported spec version " + value, line_no);
        versioned = true;
      } else if (key == "sizes") {
        spec.sizes = detail::parse_size_list(value);
      } else if (key == "p_in") {
        spec.p_in = std::stod(value);
      } else if (key == "p_out") {
        spec.p_out = std::stod(value);
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
      } else if (key == "max_retries") {
        spec.max_retries = std::stoull(value);
      } else if (key == "chain_length") {
        chain_len = detail::parse_range(value);
      } else if (key.rfind("chains.", 0) == 0) {
        auto kind = parse_chain_kind(key.substr(7));
        if (!kind) throw ParseError("unknown chain kind " + key.substr(7), line_no);
        spec.chains.push_back(ChainDecoration{*kind, std::stoull(value), 0, 0});
      } else if (key == "tendrils") {
        spec.tendrils = std::stoull(value);
      } else if (key == "tendril_length") {
        std::tie(spec.tendril_min_length, spec.tendril_max_length) = detail::parse_range(value);
      } else {
        throw ParseError("unknown key " + key, line_no);
      }
    } catch (const std::logic_error&) {
      throw ParseError("bad value for " + key, line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  });
  if (!versioned) throw Error("synth spec lacks version=1");
  for (auto& c : spec.chains) {
    c.min_length = chain_len.first;
    c.max_length = chain_len.second;
  }
  return spec;
}

/// "group node node ..." per planted block.
inline void write_ground_truth(std::ostream& os, const Graph& g, const GroundTruth& gt) {
  for (const auto& grp : gt.groups) {
    os << grp.name;
    for (NodeId v : grp.nodes) os << ' ' << g.label(v);
    os << '\n';
  }
}

/// "chain kind a b interior..." and "tendril anchor nodes..." lines.
inline void write_decorations(std::ostream& os, const Graph& g, const SynthGraph& s) {
  for (const auto& c : s.chains) {
    os << "chain " << to_string(c.kind) << ' ' << g.label(c.a) << ' ' << g.label(c.b);
    for (NodeId v : c.interior) os << ' ' << g.label(v);
    os << '\n';
  }
  for (const auto& t : s.tendrils) {
    os << "tendril " << g.label(t.anchor);
    for (NodeId v : t.nodes) os << ' ' << g.label(v);
    os << '\n';
  }
}

}  // namespace deltacom
