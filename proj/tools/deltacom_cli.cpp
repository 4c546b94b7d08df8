// deltacom command line: stats, preprocess, detect, match, regress, synth.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "deltacom/baselines.hpp"
#include "deltacom/deltacom.hpp"
#include "deltacom/io.hpp"
#include "deltacom/matching.hpp"
#include "deltacom/preprocess.hpp"
#include "deltacom/stats.hpp"
#include "deltacom/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace deltacom;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output_dir = ".";
};

/// Tracks the files one subcommand writes so they can be removed together
/// when anything fails.
class Run {
 public:
  Run(std::string subcommand, const Globals& g) : subcommand_(std::move(subcommand)), globals_(g) {
    out_dir_ = g.output_dir;
    fs::create_directories(out_dir_);
  }

  void input(const std::string& path) {
    if (!path.empty()) inputs_.push_back(path);
  }

  json& params() { return params_; }

  fs::path write(const std::string& name, const std::function<void(std::ostream&)>& fill) {
    fs::path path = out_dir_ / name;
    outputs_.push_back(path);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    fill(os);
    os.flush();
    if (!os) throw Error("write failed: " + path.string());
    return path;
  }

  void finish(double seconds) {
    json m;
    m["subcommand"] = subcommand_;
    m["inputs"] = inputs_;
    json outs = json::array();
    for (const auto& p : outputs_) outs.push_back(p.string());
    m["outputs"] = outs;
    m["seed"] = globals_.seed;
    m["threads"] = globals_.threads;
    m["parameters"] = params_;
    m["tool_version"] = kToolVersion;
    m["schema_version"] = kSchemaVersion;
    m["duration_seconds"] = seconds;
    fs::path path = out_dir_ / (subcommand_ + ".manifest.json");
    outputs_.push_back(path);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << m.dump(2) << '\n';
    if (!os) throw Error("write failed: " + path.string());
  }

  void discard() noexcept {
    for (const auto& p : outputs_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    outputs_.clear();
  }

 private:
  std::string subcommand_;
  Globals globals_;
  fs::path out_dir_;
  std::vector<std::string> inputs_;
  std::vector<fs::path> outputs_;
  json params_ = json::object();
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

LoadResult load(Run& run, const std::string& graph, const std::string& aff = {}) {
  run.input(graph);
  run.input(aff);
  LoadResult r = load_edge_list(graph, aff);
  print_warnings(r.warnings);
  return r;
}

// ---- stats ----

struct StatsArgs {
  std::string graph;
  std::string affiliations;
  std::size_t k_min = 1;
  std::size_t bins = 20;
};

void cmd_stats(Run& run, const StatsArgs& a) {
  auto in = load(run, a.graph, a.affiliations);
  if (a.bins < 1) throw UsageError("--bins must be >= 1");
  run.params()["k_min"] = a.k_min;
  run.params()["bins"] = a.bins;
  DegreeStats s = degree_stats(in.graph, a.k_min, a.bins);
  run.write("degree_histogram.csv", [&](std::ostream& os) {
    os << "degree,count\n";
    for (auto [k, c] : s.degree_histogram) os << k << ',' << c << '\n';
  });
  run.write("clustering_histogram.csv", [&](std::ostream& os) {
    os << "bin_low,bin_high,count\n";
    for (std::size_t i = 0; i < s.clustering_histogram.size(); ++i) {
      const double w = 1.0 / static_cast<double>(a.bins);
      os << format_double(static_cast<double>(i) * w) << ',' << format_double(static_cast<double>(i + 1) * w) << ','
         << s.clustering_histogram[i] << '\n';
    }
  });
  run.write("clustering_by_degree.csv", [&](std::ostream& os) {
    os << "degree,mean_clustering\n";
    for (auto [k, c] : s.clustering_by_degree) os << k << ',' << format_double(c) << '\n';
  });
  run.write("knn_by_degree.csv", [&](std::ostream& os) {
    os << "degree,mean_neighbor_degree\n";
    for (auto [k, c] : s.knn_by_degree) os << k << ',' << format_double(c) << '\n';
  });
  run.write("summary.csv", [&](std::ostream& os) {
    os << "key,value\n";
    os << "nodes," << in.graph.num_nodes() << '\n';
    os << "edges," << in.graph.num_edges() << '\n';
    os << "alpha_k_min," << s.alpha_k_min << '\n';
    os << "alpha," << (s.alpha ? format_double(*s.alpha) : std::string()) << '\n';
    if (!a.affiliations.empty()) {
      os << "affiliation_coverage," << format_double(in.affiliations.coverage()) << '\n';
      os << "groups," << in.affiliations.num_groups() << '\n';
    }
  });
}

// ---- preprocess ----

struct PreprocessArgs {
  std::string graph;
  std::string affiliations;
  std::size_t k = 2;
  bool iterate = true;
};

void cmd_preprocess(Run& run, const PreprocessArgs& a) {
  auto in = load(run, a.graph, a.affiliations);
  if (a.k < 1) throw UsageError("--k must be >= 1");
  run.params()["k"] = a.k;
  run.params()["iterate"] = a.iterate;
  CleanResult r = clean_graph(in.graph, in.affiliations, a.k, a.iterate);
  run.write("cleaned.edges", [&](std::ostream& os) { write_edge_list(os, r.graph); });
  if (!a.affiliations.empty()) {
    run.write("cleaned.aff", [&](std::ostream& os) { write_affiliations(os, r.graph, r.affiliations); });
  }
  run.write("report.txt", [&](std::ostream& os) { write_report(os, r.report); });
  run.write("taxonomy.csv", [&](std::ostream& os) { write_taxonomy_csv(os, r.report); });
  run.write("chains.csv", [&](std::ostream& os) {
    os << "kind,endpoint_a,endpoint_b,length\n";
    for (std::size_t i = 0; i < r.chains.size(); ++i) {
      const auto& c = r.chains[i];
      os << to_string(r.kinds[i]) << ',' << in.graph.label(c.endpoint_a) << ',' << in.graph.label(c.endpoint_b)
         << ',' << c.interior.size() << '\n';
    }
  });
}

// ---- detect ----

struct DetectArgs {
  std::string graph;
  std::string method = "deltacom";
  std::size_t max_sweeps = 100;
};

void cmd_detect(Run& run, const DetectArgs& a, const Globals& g) {
  if (a.method != "deltacom" && a.method != "louvain" && a.method != "lpm") {
    throw UsageError("unknown method " + a.method + " (expected deltacom, louvain or lpm)");
  }
  auto in = load(run, a.graph);
  run.params()["method"] = a.method;
  auto summary = [&](const PartitionState& p, std::ostream& os) {
    os << "method,communities,modularity\n";
    os << a.method << ',' << p.num_communities() << ',' << format_double(modularity(p)) << '\n';
  };
  if (a.method == "deltacom") {
    Dendrogram d = deltacom::run(in.graph);
    auto path = run.write("dendrogram.txt", [&](std::ostream& os) { write_dendrogram(os, d); });
    if (!(parse_dendrogram(read_text_file(path.string())).events == d.events)) {
      throw Error("dendrogram did not survive a round trip");
    }
    PartitionState p = partition_at(in.graph, d, 1.0);
    run.write("partition_t1.txt", [&](std::ostream& os) { write_partition(os, in.graph, p.community_of()); });
    run.write("detect_summary.csv", [&](std::ostream& os) { summary(p, os); });
    return;
  }
  run.params()["max_sweeps"] = a.max_sweeps;
  DetectorConfig cfg{a.method == "lpm" ? DetectorMethod::kLpm : DetectorMethod::kLouvain, g.seed, a.max_sweeps};
  PartitionState p = detect(in.graph, cfg);
  run.write("partition.txt", [&](std::ostream& os) { write_partition(os, in.graph, p.community_of()); });
  run.write("detect_summary.csv", [&](std::ostream& os) { summary(p, os); });
}

// ---- match ----

struct MatchArgs {
  std::string graph;
  std::string truth;
  std::string affiliations;
  std::string dendrogram;
  std::string partition;
  std::string mode = "r2";
  double resolution = 1.0;
  double sample_fraction = 1.0;
  std::string fit;
  std::string fit_from;
  std::size_t min_size = 1;
};

std::vector<CommunityId> read_partition(const std::string& path, const Graph& g) {
  auto pairs = parse_partition(read_text_file(path));
  std::vector<CommunityId> out(g.num_nodes(), 0);
  std::vector<bool> seen(g.num_nodes(), false);
  std::map<std::string, CommunityId> ids;
  for (const auto& [node, comm] : pairs) {
    auto v = g.find(node);
    if (!v) throw Error("partition names unknown node " + node);
    if (seen[*v]) throw Error("partition lists node " + node + " twice");
    seen[*v] = true;
    auto [it, fresh] = ids.emplace(comm, static_cast<CommunityId>(ids.size()));
    out[*v] = it->second;
  }
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!seen[v]) throw Error("partition misses node " + g.label(v));
  }
  return out;
}

RegressionFit fit_from_matches(const std::string& path, std::size_t min_size) {
  auto rows = parse_matches_csv(read_text_file(path));
  return size_resolution_regression(rows, min_size);
}

void cmd_match(Run& run, const MatchArgs& a, const Globals& g) {
  if (a.mode != "r1" && a.mode != "r2" && a.mode != "r3") throw UsageError("unknown mode " + a.mode);
  if (a.truth.empty() == a.affiliations.empty()) throw UsageError("give exactly one of --truth or --affiliations");
  if (a.dendrogram.empty() == a.partition.empty()) throw UsageError("give exactly one of --dendrogram or --partition");
  if (a.mode != "r1" && a.dendrogram.empty()) throw UsageError("mode " + a.mode + " needs --dendrogram");
  if (a.mode == "r3" && a.fit.empty() == a.fit_from.empty()) {
    throw UsageError("mode r3 needs exactly one of --fit or --fit-from");
  }
  if (a.mode != "r3" && (!a.fit.empty() || !a.fit_from.empty())) throw UsageError("--fit applies to mode r3 only");
  if (!(a.sample_fraction > 0.0 && a.sample_fraction <= 1.0)) throw UsageError("--sample-fraction must be in (0, 1]");

  auto in = load(run, a.graph, a.affiliations);
  GroundTruth gt;
  if (!a.truth.empty()) {
    run.input(a.truth);
    std::vector<std::string> warnings;
    gt = parse_ground_truth(read_text_file(a.truth), in.graph, warnings);
    print_warnings(warnings);
  } else {
    gt = GroundTruth::from_affiliations(in.affiliations);
  }
  if (gt.groups.empty()) throw Error("no ground-truth group meets the graph");
  run.params()["mode"] = a.mode;

  std::vector<MatchResult> results;
  std::size_t clamped = 0;
  Dendrogram d;
  if (!a.dendrogram.empty()) {
    run.input(a.dendrogram);
    d = parse_dendrogram(read_text_file(a.dendrogram));
    if (d.num_nodes != in.graph.num_nodes() || d.num_edges != in.graph.num_edges()) {
      throw Error("dendrogram does not belong to this graph");
    }
  }
  if (a.mode == "r1") {
    std::vector<CommunityId> comm;
    if (!a.partition.empty()) {
      run.input(a.partition);
      comm = read_partition(a.partition, in.graph);
    } else {
      run.params()["resolution"] = a.resolution;
      comm = assignment_at(d, a.resolution).community_of;
    }
    results = recall_r1(comm, gt, "r1", g.threads);
  } else if (a.mode == "r2") {
    results = recall_r2(d, gt);
  } else {
    RegressionFit fit;
    if (!a.fit.empty()) {
      run.input(a.fit);
      fit = parse_fit(read_text_file(a.fit));
    } else {
      run.input(a.fit_from);
      run.params()["min_size"] = a.min_size;
      fit = fit_from_matches(a.fit_from, a.min_size);
      run.write("fit.csv", [&](std::ostream& os) { write_fit(os, fit); });
    }
    run.params()["sample_fraction"] = a.sample_fraction;
    results = recall_r3(d, gt, a.sample_fraction, fit, g.seed, &clamped);
  }
  run.write("matches.csv", [&](std::ostream& os) { write_matches_csv(os, results); });
  auto scores = scores_of(results);
  run.write("cdf.csv", [&](std::ostream& os) { write_cdf_csv(os, cumulative_distribution(scores)); });
  run.write("summary.txt", [&](std::ostream& os) {
    std::size_t small = 0;
    for (const auto& r : results) small += r.small ? 1 : 0;
    os << "mode=" << a.mode << '\n';
    os << "groups=" << results.size() << '\n';
    os << "small_groups=" << small << '\n';
    os << "mean_recall=" << format_double(mean_recall(results)) << '\n';
    if (a.mode == "r3") os << "clamped_resolutions=" << clamped << '\n';
  });
}

// ---- regress ----

struct RegressArgs {
  std::string matches;
  std::size_t min_size = 1;
};

void cmd_regress(Run& run, const RegressArgs& a) {
  run.input(a.matches);
  run.params()["min_size"] = a.min_size;
  RegressionFit fit = fit_from_matches(a.matches, a.min_size);
  run.write("fit.csv", [&](std::ostream& os) { write_fit(os, fit); });
}

// ---- synth ----

struct SynthArgs {
  std::string spec;
};

void cmd_synth(Run& run, const SynthArgs& a, const Globals& g, bool seed_given) {
  run.input(a.spec);
  SynthSpec spec = parse_synth_spec(read_text_file(a.spec));
  if (seed_given) spec.seed = g.seed;
  run.params()["spec_seed"] = spec.seed;
  SynthGraph s = generate(spec);
  run.write("graph.edges", [&](std::ostream& os) { write_edge_list(os, s.graph); });
  run.write("graph.aff", [&](std::ostream& os) { write_affiliations(os, s.graph, s.affiliations); });
  run.write("groundtruth.txt", [&](std::ostream& os) { write_ground_truth(os, s.graph, s.truth); });
  run.write("decorations.txt", [&](std::ostream& os) { write_decorations(os, s.graph, s); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiresolution modularity community detection pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);
  Globals globals;
  auto* seed_opt = app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads for r1 matching")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--output-dir", globals.output_dir, "Directory for outputs")->capture_default_str();

  StatsArgs stats;
  auto* sc_stats = app.add_subcommand("stats", "Degree, clustering and power-law statistics");
  sc_stats->add_option("graph", stats.graph, "Edge list")->required();
  sc_stats->add_option("--affiliations", stats.affiliations, "Node group file");
  sc_stats->add_option("--k-min", stats.k_min, "Lower degree cutoff of the power-law fit")->capture_default_str();
  sc_stats->add_option("--bins", stats.bins, "Clustering histogram bins")->capture_default_str();

  PreprocessArgs pre;
  auto* sc_pre = app.add_subcommand("preprocess", "k-core and chain collapse");
  sc_pre->add_option("graph", pre.graph, "Edge list")->required();
  sc_pre->add_option("affiliations", pre.affiliations, "Node group file");
  sc_pre->add_option("--k", pre.k, "Core order")->capture_default_str();
  sc_pre->add_flag("--iterate,!--no-iterate", pre.iterate, "Repeat until nothing changes")->capture_default_str();

  DetectArgs det;
  auto* sc_det = app.add_subcommand("detect", "Community detection");
  sc_det->add_option("graph", det.graph, "Edge list")->required();
  sc_det->add_option("--method", det.method, "deltacom, louvain or lpm")->capture_default_str();
  sc_det->add_option("--max-sweeps", det.max_sweeps, "Sweep cap for louvain and lpm")->capture_default_str();

  MatchArgs match;
  auto* sc_match = app.add_subcommand("match", "Score communities against ground truth");
  sc_match->add_option("--graph", match.graph, "Edge list the communities were computed on")->required();
  sc_match->add_option("--truth", match.truth, "Ground-truth file, one group per line");
  sc_match->add_option("--affiliations", match.affiliations, "Node group file used as ground truth");
  sc_match->add_option("--dendrogram", match.dendrogram, "Dendrogram from detect");
  sc_match->add_option("--partition", match.partition, "Partition from detect");
  sc_match->add_option("--mode", match.mode, "r1, r2 or r3")->capture_default_str();
  sc_match->add_option("--resolution", match.resolution, "Resolution for r1 on a dendrogram")->capture_default_str();
  sc_match->add_option("--sample-fraction", match.sample_fraction, "Sampled share of each group (r3)")
      ->capture_default_str();
  sc_match->add_option("--fit", match.fit, "Regression file (r3)");
  sc_match->add_option("--fit-from", match.fit_from, "r2 matches.csv to regress first (r3)");
  sc_match->add_option("--min-size", match.min_size, "Smallest group used by --fit-from")->capture_default_str();

  RegressArgs reg;
  auto* sc_reg = app.add_subcommand("regress", "Fit log10(t) against log10(size)");
  sc_reg->add_option("matches", reg.matches, "r2 matches.csv")->required();
  sc_reg->add_option("--min-size", reg.min_size, "Smallest group used in the fit")->capture_default_str();

  SynthArgs syn;
  auto* sc_syn = app.add_subcommand("synth", "Planted-partition graph generator");
  sc_syn->add_option("spec", syn.spec, "key=value spec file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auto* chosen = app.get_subcommands().front();
  Run run(chosen->get_name(), globals);
  const auto start = std::chrono::steady_clock::now();
  try {
    if (chosen == sc_stats) {
      cmd_stats(run, stats);
    } else if (chosen == sc_pre) {
      cmd_preprocess(run, pre);
    } else if (chosen == sc_det) {
      cmd_detect(run, det, globals);
    } else if (chosen == sc_match) {
      cmd_match(run, match, globals);
    } else if (chosen == sc_reg) {
      cmd_regress(run, reg);
    } else {
      cmd_synth(run, syn, globals, seed_opt->count() > 0);
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    run.finish(took.count());
  } catch (const UsageError& e) {
    run.discard();
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    run.discard();
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
