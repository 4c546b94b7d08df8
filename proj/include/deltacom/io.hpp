#pragma once

#include <zlib.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "deltacom/graph.hpp"

namespace deltacom {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads a whole file, transparently inflating gzip input.
inline std::string read_text_file(const std::string& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) throw Error("cannot open " + path);
  std::string out;
  std::array<char, 1 << 16> buffer{};
  for (;;) {
    int got = gzread(file, buffer.data(), static_cast<unsigned>(buffer.size()));
    if (got < 0) {
      int code = 0;
      std::string msg = gzerror(file, &code);
      gzclose(file);
      throw Error("read error in " + path + ": " + msg);
    }
    if (got == 0) break;
    out.append(buffer.data(), static_cast<std::size_t>(got));
  }
  gzclose(file);
  return out;
}

namespace detail {

/// Splits a line into whitespace tokens, stopping at '#'.
inline std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
    tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    fn(text.substr(pos, end - pos), line_no);
    pos = end + 1;
  }
}

}  // namespace detail

struct LoadResult {
  Graph graph;
  AffiliationMap affiliations;
  std::size_t duplicates_dropped = 0;
  std::size_t self_loops_dropped = 0;
  std::vector<std::string> warnings;
};

inline LoadResult parse_edge_list(std::string_view text) {
  GraphBuilder builder;
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) return;
    if (tokens.size() != 2) throw ParseError("expected two node tokens", line_no);
    builder.add_edge(tokens[0], tokens[1]);
  });
  LoadResult out;
  out.graph = builder.build();
  out.duplicates_dropped = builder.duplicates_dropped();
  out.self_loops_dropped = builder.self_loops_dropped();
  out.affiliations = AffiliationMap(out.graph.num_nodes());
  return out;
}

/// Attaches "node group" lines to an already loaded graph. Lines naming
/// unknown nodes are skipped with a warning.
inline void parse_affiliations(std::string_view text, const Graph& g, AffiliationMap& aff,
                               std::vector<std::string>& warnings) {
  if (aff.num_nodes() != g.num_nodes()) aff = AffiliationMap(g.num_nodes());
  detail::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) return;
    if (tokens.size() != 2) throw ParseError("expected node and group tokens", line_no);
    auto node = g.find(tokens[0]);
    if (!node) {
      warnings.push_back("line " + std::to_string(line_no) + ": affiliation for unknown node " +
                         std::string(tokens[0]) + " skipped");
      return;
    }
    aff.assign(*node, aff.intern(tokens[1]));
  });
}

inline LoadResult load_edge_list(const std::string& graph_path,
                                 const std::string& affiliation_path = {}) {
  LoadResult out = parse_edge_list(read_text_file(graph_path));
  if (!affiliation_path.empty()) {
    parse_affiliations(read_text_file(affiliation_path), out.graph, out.affiliations, out.warnings);
  }
  return out;
}

inline void write_edge_list(std::ostream& os, const Graph& g) {
  for (auto [u, v] : g.edges()) os << g.label(u) << ' ' << g.label(v) << '\n';
}

inline void write_affiliations(std::ostream& os, const Graph& g, const AffiliationMap& aff) {
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (auto grp = aff.group(v)) os << g.label(v) << ' ' << aff.group_name(*grp) << '\n';
  }
}

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x) {
  std::array<char, 64> buf{};
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf.data(), buf.size(), "%.*g", precision, x);
    if (std::strtod(buf.data(), nullptr) == x) break;
  }
  return buf.data();
}

}  // namespace deltacom
