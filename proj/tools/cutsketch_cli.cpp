// cutsketch command-line interface.

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cutsketch/bench.hpp"
#include "cutsketch/codec.hpp"
#include "cutsketch/distmincut.hpp"
#include "cutsketch/general_sketch.hpp"
#include "cutsketch/generators.hpp"
#include "cutsketch/graph_io.hpp"
#include "cutsketch/partition.hpp"
#include "cutsketch/sparsify.hpp"

using namespace cutsketch;
using nlohmann::json;

namespace {

struct Common {
  std::uint64_t seed = 1;
  double eps = 0.1;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--eps", c.eps, "accuracy parameter");
  cmd->add_option("--out", c.out, "output file (default stdout)");
}

void emit_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

void emit_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  if (path.empty()) throw InputError("binary output needs --out");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Comma or whitespace separated vertex ids.
std::vector<Vertex> parse_ids(const std::string& text) {
  std::string spaced = text;
  for (char& ch : spaced) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(spaced);
  std::vector<Vertex> ids;
  long long v = 0;
  while (in >> v) {
    if (v < 0) throw InputError("negative vertex id in query set");
    ids.push_back(static_cast<Vertex>(v));
  }
  if (!in.eof()) throw InputError("malformed query set '" + text + "'");
  return ids;
}

VertexSet make_set(std::size_t n, const std::vector<Vertex>& ids) {
  for (Vertex v : ids) {
    if (v >= n) throw InputError("vertex " + std::to_string(v) + " out of range for n = " + std::to_string(n));
  }
  return VertexSet::from_list(n, ids);
}

json estimate_json(const Estimate& est) {
  json j;
  j["estimate"] = est.value;
  j["scale"] = est.scale;
  j["trivial_query"] = est.trivial_query;
  j["zero_cut"] = est.zero_cut;
  j["clamped"] = est.clamped;
  json terms = json::array();
  for (const ClassTerms& t : est.terms) terms.push_back({{"class", t.index}, {"cross", t.cross}, {"intra", t.intra}});
  j["terms"] = terms;
  return j;
}

std::vector<double> parse_list(const std::string& text) {
  std::string spaced = text;
  for (char& ch : spaced) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(spaced);
  std::vector<double> out;
  double x = 0;
  while (in >> x) out.push_back(x);
  if (!in.eof() || out.empty()) throw InputError("malformed list '" + text + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"for-each cut sketches: build, query, benchmark"};
  app.require_subcommand(1);

  // gen
  Common gen_c;
  std::string gen_kind = "gnp";
  std::size_t gen_n = 100;
  double gen_p = 0.2;
  double gen_wmax = 1e6;
  std::size_t gen_block = 0;
  bool gen_binary = false;
  auto* gen = app.add_subcommand("gen", "generate a graph");
  add_common(gen, gen_c);
  gen->add_option("--kind", gen_kind, "gnp|complete|path|cycle|star|dumbbell|weighted|hard|probe");
  gen->add_option("--n", gen_n, "vertex count");
  gen->add_option("--p", gen_p, "edge probability");
  gen->add_option("--wmax", gen_wmax, "max weight for --kind weighted");
  gen->add_option("--block", gen_block, "block size D for --kind probe (default 1/(4 eps))");
  gen->add_flag("--binary", gen_binary, "write the CUTSK1 binary form");

  // build
  Common build_c;
  std::string build_graph;
  std::size_t build_reps = 0;
  double build_kappa = kDefaultSparsifierKappa;
  bool build_quantized = false;
  auto* build = app.add_subcommand("build", "build a sketch");
  add_common(build, build_c);
  build->add_option("--graph", build_graph, "input graph")->required();
  build->add_option("--reps", build_reps, "median repetitions (0: ceil(25 ln n))");
  build->add_option("--kappa", build_kappa, "sparsifier sampling constant");
  build->add_flag("--quantized", build_quantized, "store weights quantized");

  // query
  Common query_c;
  std::string query_sketch;
  std::string query_graph;
  std::vector<std::string> query_sets;
  std::string query_sets_file;
  auto* qry = app.add_subcommand("query", "estimate cut weights from a sketch");
  add_common(qry, query_c);
  qry->add_option("--sketch", query_sketch, "sketch file")->required();
  qry->add_option("--set", query_sets, "vertex ids of S, comma separated (repeatable)");
  qry->add_option("--sets", query_sets_file, "file with one query set per line");
  qry->add_option("--graph", query_graph, "graph for reporting exact values");

  // bench-accuracy
  Common ba_c;
  std::string ba_graph;
  std::size_t ba_trials = 20;
  std::size_t ba_queries = 100;
  std::string ba_dist = "uniform";
  std::string ba_format = "json";
  std::size_t ba_reps = 0;
  std::size_t ba_block = 0;
  auto* ba = app.add_subcommand("bench-accuracy", "accuracy of sketches against exact cut values");
  add_common(ba, ba_c);
  ba->add_option("--graph", ba_graph, "input graph")->required();
  ba->add_option("--trials", ba_trials, "sketch seeds");
  ba->add_option("--queries", ba_queries, "queries per sketch");
  ba->add_option("--dist", ba_dist, "uniform|singleton|hardblocks");
  ba->add_option("--format", ba_format, "json|csv");
  ba->add_option("--reps", ba_reps, "median repetitions (0: ceil(25 ln n))");
  ba->add_option("--block", ba_block, "hard-instance side length (0: infer)");

  // bench-size
  Common bs_c;
  std::string bs_ns = "50,100,200,400";
  std::string bs_epss;
  double bs_degree = 60;
  double bs_p = 0;
  std::size_t bs_reps = 1;
  bool bs_quantized = false;
  std::string bs_format = "csv";
  auto* bs = app.add_subcommand("bench-size", "sketch size against the quality-(1+eps) sparsifier");
  add_common(bs, bs_c);
  bs->add_option("--n-list", bs_ns, "vertex counts");
  bs->add_option("--eps-list", bs_epss, "eps values (default --eps)");
  bs->add_option("--degree", bs_degree, "expected degree of G(n, degree/n)");
  bs->add_option("--p", bs_p, "fixed edge probability (overrides --degree)");
  bs->add_option("--reps", bs_reps, "median repetitions (0: ceil(25 ln n))");
  bs->add_flag("--quantized", bs_quantized, "quantized weights");
  bs->add_option("--format", bs_format, "csv|json");

  // dist-mincut
  Common dm_c;
  std::string dm_graph;
  std::size_t dm_shards = 4;
  std::size_t dm_reps = 0;
  auto* dm = app.add_subcommand("dist-mincut", "simulated distributed minimum cut");
  add_common(dm, dm_c);
  dm->add_option("--graph", dm_graph, "input graph")->required();
  dm->add_option("--shards", dm_shards, "server count k");
  dm->add_option("--reps", dm_reps, "median repetitions per server sketch (0: ceil(25 ln n))");

  // edge-probe
  Common ep_c;
  std::string ep_graph;
  std::optional<Vertex> ep_u;
  std::optional<Vertex> ep_v;
  std::size_t ep_n = 400;
  std::size_t ep_probes = 100;
  std::size_t ep_reps = 0;
  auto* ep = app.add_subcommand("edge-probe", "recover edges from three cut queries");
  add_common(ep, ep_c);
  ep->add_option("--graph", ep_graph, "graph to probe (default: generated probe instance)");
  ep->add_option("--u", ep_u, "first vertex (single probe)");
  ep->add_option("--v", ep_v, "second vertex (single probe)");
  ep->add_option("--n", ep_n, "vertex count of the generated instance");
  ep->add_option("--probes", ep_probes, "probes, split between edges and non-edges");
  ep->add_option("--reps", ep_reps, "median repetitions (0: ceil(25 ln n))");

  // certify
  Common ce_c;
  std::string ce_graph;
  std::size_t ce_reps = 1;
  auto* ce = app.add_subcommand("certify", "exhaustively check the partitions of a sketch build");
  add_common(ce, ce_c);
  ce->add_option("--graph", ce_graph, "input graph")->required();
  ce->add_option("--reps", ce_reps, "median repetitions (0: ceil(25 ln n))");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      Graph g;
      if (gen_kind == "gnp") {
        g = gen_gnp(gen_n, gen_p, gen_c.seed);
      } else if (gen_kind == "complete") {
        g = gen_complete(gen_n);
      } else if (gen_kind == "path") {
        g = gen_path(gen_n);
      } else if (gen_kind == "cycle") {
        g = gen_cycle(gen_n);
      } else if (gen_kind == "star") {
        g = gen_star(gen_n);
      } else if (gen_kind == "dumbbell") {
        g = gen_dumbbell(gen_n);
      } else if (gen_kind == "weighted") {
        g = gen_weighted_range(gen_n, gen_p, gen_wmax, gen_c.seed);
      } else if (gen_kind == "hard") {
        g = gen_hard_instance(gen_n, gen_c.eps, gen_c.seed);
      } else if (gen_kind == "probe") {
        const std::size_t block = gen_block ? gen_block : static_cast<std::size_t>(std::lround(1 / (4 * gen_c.eps)));
        g = gen_probe_instance(gen_n, block, gen_c.seed);
      } else {
        throw InputError("unknown graph kind '" + gen_kind + "'");
      }
      if (gen_binary) {
        emit_bytes(gen_c.out, serialize(g));
      } else {
        std::ostringstream text;
        write_graph_text(text, g);
        emit_text(gen_c.out, text.str());
      }
    } else if (*build) {
      const Graph g = load_graph(build_graph);
      const CutSketch sk = build_sketch(g, build_c.eps, build_c.seed, {build_kappa, build_reps, {}});
      emit_bytes(build_c.out, serialize(sk, {build_quantized}));
      std::cerr << to_json(size_report(sk, {build_quantized})).dump() << '\n';
    } else if (*qry) {
      const CutSketch sk = deserialize_sketch(read_bytes(query_sketch));
      std::optional<Graph> g;
      if (!query_graph.empty()) g = load_graph(query_graph);
      std::vector<std::string> lines = query_sets;
      if (!query_sets_file.empty()) {
        std::ifstream in(query_sets_file);
        if (!in) throw InputError("cannot open " + query_sets_file);
        for (std::string line; std::getline(in, line);) {
          if (!line.empty()) lines.push_back(line);
        }
      }
      if (lines.empty()) throw InputError("no query sets given (--set or --sets)");
      json out = json::array();
      for (const std::string& line : lines) {
        const VertexSet s = make_set(sk.n, parse_ids(line));
        json j = estimate_json(query(sk, s));
        j["set"] = line;
        if (g) j["exact"] = cut_weight(*g, s);
        out.push_back(j);
      }
      emit_text(query_c.out, out.dump(2) + "\n");
    } else if (*ba) {
      const Graph g = load_graph(ba_graph);
      BenchOptions o;
      o.queries = ba_queries;
      o.seeds = ba_trials;
      o.dist = parse_query_dist(ba_dist);
      o.seed = ba_c.seed;
      o.sketch.repetitions = ba_reps;
      o.block_side = ba_block;
      o.instance = ba_graph;
      const BenchReport r = bench_accuracy(g, ba_c.eps, o);
      if (ba_format == "csv") {
        std::ostringstream csv;
        csv << "instance,eps,trials,queries_per_trial,success_fraction,p50,p90,p99,bits_total,wall_seconds\n";
        csv << r.instance << ',' << r.eps << ',' << r.trials << ',' << r.queries_per_trial << ','
            << r.success_fraction << ',' << r.p50 << ',' << r.p90 << ',' << r.p99 << ',' << r.size.bits_total << ','
            << r.wall_seconds << '\n';
        emit_text(ba_c.out, csv.str());
      } else if (ba_format == "json") {
        emit_text(ba_c.out, to_json(r).dump(2) + "\n");
      } else {
        throw InputError("unknown format '" + ba_format + "'");
      }
    } else if (*bs) {
      const std::vector<double> ns = parse_list(bs_ns);
      const std::vector<double> epss = bs_epss.empty() ? std::vector<double>{bs_c.eps} : parse_list(bs_epss);
      json rows = json::array();
      std::ostringstream csv;
      csv << "n,eps,bits_total,sparsifier_bits\n";
      for (double nd : ns) {
        const auto n = static_cast<std::size_t>(nd);
        const double p = bs_p > 0 ? bs_p : std::min(1.0, bs_degree / nd);
        const Graph g = gen_gnp(n, p, bs_c.seed);
        for (double eps : epss) {
          const CutSketch sk = build_sketch(g, eps, bs_c.seed, {kDefaultSparsifierKappa, bs_reps, {}});
          const SizeReport sr = size_report(sk, {bs_quantized});
          const SizeReport base = size_report(sparsify(g, 1 + eps, bs_c.seed));
          csv << n << ',' << eps << ',' << sr.bits_total << ',' << base.bits_total << '\n';
          rows.push_back({{"n", n}, {"eps", eps}, {"bits_total", sr.bits_total}, {"sparsifier_bits", base.bits_total},
                          {"report", to_json(sr)}});
        }
      }
      if (bs_format == "json") {
        emit_text(bs_c.out, rows.dump(2) + "\n");
      } else if (bs_format == "csv") {
        emit_text(bs_c.out, csv.str());
      } else {
        throw InputError("unknown format '" + bs_format + "'");
      }
    } else if (*dm) {
      const Graph g = load_graph(dm_graph);
      const CoordinatorResult r = distributed_min_cut(g, dm_shards, dm_c.eps, dm_c.seed, {kDefaultSparsifierKappa, dm_reps});
      json j;
      j["mincut_estimate"] = r.mincut_estimate;
      j["witness"] = r.witness.members();
      j["bytes_sent_per_server"] = r.bytes_sent_per_server;
      j["candidates_evaluated"] = r.candidates_evaluated;
      emit_text(dm_c.out, j.dump(2) + "\n");
    } else if (*ep) {
      const std::size_t block = static_cast<std::size_t>(std::lround(1 / (4 * ep_c.eps)));
      const Graph g = ep_graph.empty() ? gen_probe_instance(ep_n, block, ep_c.seed) : load_graph(ep_graph);
      const CutSketch sk = build_sketch(g, ep_c.eps, ep_c.seed, {kDefaultSparsifierKappa, ep_reps, {}});
      if (ep_u || ep_v) {
        if (!ep_u || !ep_v) throw InputError("single probe needs both --u and --v");
        const ProbeResult r = edge_probe(sk, *ep_u, *ep_v, ep_c.eps);
        emit_text(ep_c.out, json{{"edge", r.edge},
                                 {"statistic", r.statistic},
                                 {"indeterminate", r.indeterminate},
                                 {"degree_warning", r.degree_warning}}
                                    .dump(2) +
                                "\n");
      } else {
        // Probe pairs inside random blocks, half known edges and half non-edges.
        if (!ep_graph.empty()) throw InputError("probe experiments run on the generated instance; use --u/--v with --graph");
        std::vector<std::vector<char>> adj(g.num_vertices(), std::vector<char>(g.num_vertices(), 0));
        for (const Edge& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = 1;
        Rng rng = Rng(ep_c.seed).derive("probes");
        std::size_t edge_ok = 0, edge_n = 0, non_ok = 0, non_n = 0, warnings = 0;
        const std::size_t blocks = g.num_vertices() / (2 * block);
        while (edge_n + non_n < ep_probes) {
          const std::size_t b = rng.below(blocks);
          const auto u = static_cast<Vertex>(2 * block * b + rng.below(block));
          const auto v = static_cast<Vertex>(2 * block * b + block + rng.below(block));
          const bool is_edge = adj[u][v] != 0;
          if (is_edge ? edge_n >= ep_probes / 2 : non_n >= ep_probes - ep_probes / 2) continue;
          const ProbeResult r = edge_probe(sk, u, v, ep_c.eps);
          warnings += r.degree_warning ? 1 : 0;
          if (is_edge) {
            ++edge_n;
            edge_ok += r.edge ? 1 : 0;
          } else {
            ++non_n;
            non_ok += r.edge ? 0 : 1;
          }
        }
        json j;
        j["n"] = g.num_vertices();
        j["eps"] = ep_c.eps;
        j["block"] = block;
        j["edge_probes"] = edge_n;
        j["edge_correct"] = edge_ok;
        j["non_edge_probes"] = non_n;
        j["non_edge_correct"] = non_ok;
        j["degree_warnings"] = warnings;
        emit_text(ep_c.out, j.dump(2) + "\n");
      }
    } else if (*ce) {
      const Graph g = load_graph(ce_graph);
      std::mutex mu;
      std::size_t certified = 0, failed = 0, skipped = 0;
      SketchOptions o;
      o.repetitions = ce_reps;
      o.observer = [&](std::span<const Edge> edges, const Partition& partition, double eps) {
        ClassPartition cp{partition, {}, eps};
        bool small = true;
        for (const auto& part : partition.parts()) small = small && part.size() <= kExactPartCap;
        const bool ok = small && certify_partition(cp, edges);
        std::lock_guard lock(mu);
        if (!small) {
          ++skipped;
        } else if (ok) {
          ++certified;
        } else {
          ++failed;
        }
      };
      build_sketch(g, ce_c.eps, ce_c.seed, o);
      emit_text(ce_c.out, json{{"certified", certified}, {"failed", failed}, {"skipped_large_parts", skipped},
                               {"all_certified", failed == 0}}
                                  .dump(2) +
                              "\n");
      return failed == 0 ? 0 : 2;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const DecodeError& e) {
    std::cerr << "decode error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
