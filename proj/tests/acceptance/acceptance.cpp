// Acceptance checks. Usage: acceptance <criterion 1-11 | all>
// Each criterion prints one PASS/FAIL line and the exit code is nonzero on
// any failure. Tolerances are the constants below.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "cutsketch/bench.hpp"
#include "cutsketch/codec.hpp"
#include "cutsketch/distmincut.hpp"
#include "cutsketch/foreach_sketch.hpp"
#include "cutsketch/general_sketch.hpp"
#include "cutsketch/generators.hpp"
#include "cutsketch/oracles.hpp"
#include "cutsketch/parallel.hpp"
#include "cutsketch/partition.hpp"
#include "cutsketch/sparsify.hpp"

using namespace cutsketch;

namespace {

constexpr double kSuccessRate = 7.0 / 9.0;
constexpr double kStandardErrors = 4.0;
constexpr double kVarianceConstant = 44.0;
constexpr double kVarianceSlack = 1.15;
constexpr double kSlopeTarget = 1.0;
constexpr double kSlopeToleranceN = 0.2;
constexpr double kSlopeToleranceEps = 0.3;
constexpr int kSparsifierSeedsNeeded = 15;
constexpr int kDistTrialsNeeded = 45;
constexpr double kProbeRate = 0.7;
constexpr int kMonteCarloSeeds = 2000;
// Expected degree of the G(n, d/n) graphs used for the size slopes.
constexpr double kSizeDegree = 60;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

VertexSet random_cut(std::size_t n, Rng& rng) {
  for (;;) {
    VertexSet s(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (rng() & 1U) s.insert(static_cast<Vertex>(v));
    }
    if (!s.trivial()) return s;
  }
}

VertexSet prefix_set(std::size_t n, std::size_t k) {
  VertexSet s(n);
  for (std::size_t v = 0; v < k; ++v) s.insert(static_cast<Vertex>(v));
  return s;
}

struct Fixture {
  std::string name;
  Graph g;
  VertexSet s;
  double eps;
};

// Five (graph, S, eps) triples shared by the unbiasedness and variance
// checks. Class degrees exceed 2/eps so that parts are not all singletons.
// All weights are at most 5, so no edge is discarded at any scale c >= 1.
std::vector<Fixture> estimator_fixtures() {
  std::vector<Fixture> out;
  Rng rng(2024);
  out.push_back({"K60 S={0,1}", gen_complete(60), prefix_set(60, 2), 0.1});
  {
    Graph g = gen_gnp(100, 0.6, 1);
    out.push_back({"gnp(100,0.6) |S|=3", g, prefix_set(100, 3), 0.1});
  }
  out.push_back({"dumbbell(60) S=5 clique vertices", gen_dumbbell(60), prefix_set(60, 5), 0.1});
  {
    Graph g = gen_weighted_range(60, 0.8, 5, 3);
    out.push_back({"weighted(60,0.8,w<=5) |S|=3", g, prefix_set(60, 3), 0.1});
  }
  {
    Graph g = gen_hard_instance(64, 0.25, 2);
    out.push_back({"hard(64) eps 1/4 block query", g, hard_block_query(g, 16, rng), 0.25});
  }
  return out;
}

// Scale the estimator uses for s when the sparsifier is exact.
double correct_scale(const Graph& g, const VertexSet& s) {
  const auto [lo, hi] = scale_range(g, g.num_vertices());
  return std::pow(kScaleBase, choose_scale(cut_weight(g, s), lo, hi).exponent);
}

constexpr double kEps = 0.1;

Outcome criterion1() {
  struct Instance {
    std::string name;
    Graph g;
  };
  const std::vector<Instance> instances{
      {"gnp(100,0.2)", gen_gnp(100, 0.2, 1)},
      {"hard(128, built at eps 1/4)", gen_hard_instance(128, 0.25, 1)},
      {"dumbbell(50)", gen_dumbbell(50)},
  };
  Outcome o{true, ""};
  for (const Instance& inst : instances) {
    BenchOptions opt;
    opt.queries = 100;
    opt.seeds = 20;
    opt.dist = QueryDist::uniform;
    opt.seed = 1;
    const BenchReport r = bench_accuracy(inst.g, kEps, opt);
    o.pass = o.pass && r.success_fraction >= kSuccessRate;
    o.detail += inst.name + " success " + fmt(r.success_fraction) + " p50 " + fmt(r.p50) + " p99 " + fmt(r.p99) +
                "; ";
  }
  o.detail += "need >= " + fmt(kSuccessRate) + " with error <= 27 eps, eps = 0.1";
  return o;
}

Outcome criterion2() {
  Outcome o{true, ""};
  for (const Fixture& f : estimator_fixtures()) {
    const double c = correct_scale(f.g, f.s);
    const double truth = cut_weight(f.g, f.s);
    std::vector<double> x(kMonteCarloSeeds);
    parallel_for(kMonteCarloSeeds, [&](std::size_t t) {
      x[t] = estimate_cut(build_scale(f.g, c, f.eps, Rng(77).derive("unbiased", t).key()), f.s).value;
    });
    double sum = 0;
    double sq = 0;
    for (double v : x) {
      sum += v;
      sq += v * v;
    }
    const double mean = sum / kMonteCarloSeeds;
    const double se = std::sqrt(std::max(0.0, sq / kMonteCarloSeeds - mean * mean) / kMonteCarloSeeds);
    // Exact agreement up to rounding counts as z = 0 when every draw is exact.
    const double gap = std::abs(mean - truth) <= 1e-9 * truth ? 0 : std::abs(mean - truth);
    const double z = gap == 0 ? 0 : (se > 0 ? gap / se : 1e9);
    o.pass = o.pass && z <= kStandardErrors;
    o.detail += f.name + " mean " + fmt(mean) + " truth " + fmt(truth) + " se " + fmt(se) + " z " + fmt(z) + "; ";
  }
  o.detail += "need |z| <= 4 over 2000 seeds at the correct scale";
  return o;
}

Outcome criterion3() {
  Outcome o{true, ""};
  for (const Fixture& f : estimator_fixtures()) {
    const double c = correct_scale(f.g, f.s);
    const std::size_t n = f.g.num_vertices();
    // Fix the importance sample and the partitions; redraw only the
    // incident-edge samples.
    const ImportanceSample sample = importance_sample(f.g, c, f.eps, 91);
    const auto classes = split_classes(sample.kept);
    std::vector<Partition> partitions;
    for (const auto& [index, edges] : classes) partitions.push_back(recursive_partition(n, edges, f.eps).partition);
    const double w_tilde = cut_weight(sample.kept, f.s);

    std::vector<double> x(kMonteCarloSeeds);
    parallel_for(kMonteCarloSeeds, [&](std::size_t t) {
      const std::uint64_t seed = Rng(78).derive("variance", t).key();
      double total = 0;
      for (std::size_t i = 0; i < classes.size(); ++i) {
        const ClassSketch cs = build_class(n, classes[i].first, classes[i].second, partitions[i], f.eps, seed);
        const ClassTerms terms = estimate_class(cs, f.s);
        total += terms.cross + terms.intra;
      }
      x[t] = total;
    });
    double sum = 0;
    double sq = 0;
    for (double v : x) {
      sum += v;
      sq += v * v;
    }
    const double mean = sum / kMonteCarloSeeds;
    const double var = sq / (kMonteCarloSeeds - 1) - mean * mean * kMonteCarloSeeds / (kMonteCarloSeeds - 1);
    const double bound = kVarianceConstant * f.eps * f.eps * w_tilde * kVarianceSlack;
    o.pass = o.pass && var <= bound;
    std::size_t parts = 0;
    for (const Partition& p : partitions) parts += p.num_parts;
    o.detail += f.name + " var " + fmt(var) + " bound " + fmt(bound) + " (w~ " + fmt(w_tilde) + ", " +
                std::to_string(classes.size()) + " classes, " + std::to_string(parts) + " parts); ";
  }
  o.detail += "scaled units, conditional on the importance sample";
  return o;
}

struct ClassAudit {
  std::mutex mu;
  std::size_t classes = 0;
  std::size_t certified = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  std::size_t over_budget = 0;
  double worst_ratio = 0;
  bool certify = false;

  ClassObserver observer() {
    return [this](std::span<const Edge> edges, const Partition& partition, double eps) {
      std::size_t cross = 0;
      for (const Edge& e : edges) cross += partition.part_of[e.u] != partition.part_of[e.v] ? 1 : 0;
      const double budget = cross_edge_budget(partition.num_vertices(), eps);
      int verdict = 0;  // 0 skipped, 1 certified, 2 failed
      if (certify) {
        bool small = true;
        for (const auto& part : partition.parts()) small = small && part.size() <= kExactPartCap;
        if (small) verdict = certify_partition(ClassPartition{partition, {}, eps}, edges) ? 1 : 2;
      }
      std::lock_guard lock(mu);
      ++classes;
      if (static_cast<double>(cross) > budget) ++over_budget;
      if (budget > 0) worst_ratio = std::max(worst_ratio, static_cast<double>(cross) / budget);
      if (certify) {
        if (verdict == 0) ++skipped;
        if (verdict == 1) ++certified;
        if (verdict == 2) ++failed;
      }
    };
  }
};

Outcome criterion4() {
  ClassAudit audit;
  audit.certify = true;
  SketchOptions opt;
  opt.repetitions = 3;
  opt.observer = audit.observer();
  const std::vector<Graph> graphs{gen_gnp(40, 0.3, 1),     gen_gnp(40, 0.15, 2),   gen_gnp(20, 0.5, 3),
                                  gen_hard_instance(32, 0.25, 4), gen_dumbbell(40), gen_cycle(40),
                                  gen_weighted_range(40, 0.3, 1e6, 5), gen_complete(12), gen_star(30)};
  for (std::size_t i = 0; i < graphs.size(); ++i) build_sketch(graphs[i], 0.25, 100 + i, opt);
  Outcome o;
  o.pass = audit.failed == 0 && audit.certified > 0;
  o.detail = std::to_string(audit.certified) + " classes certified, " + std::to_string(audit.failed) + " failed, " +
             std::to_string(audit.skipped) + " with a part above " + std::to_string(kExactPartCap) +
             " vertices (not checkable) over " + std::to_string(graphs.size()) + " sketches at eps 1/4";
  return o;
}

Outcome criterion5() {
  ClassAudit audit;
  SketchOptions opt;
  opt.repetitions = 3;
  opt.observer = audit.observer();
  struct Build {
    Graph g;
    double eps;
  };
  const std::vector<Build> builds{
      {gen_gnp(100, 0.2, 1), 0.1},      {gen_hard_instance(128, 0.25, 1), 0.1},
      {gen_dumbbell(50), 0.1},          {gen_weighted_range(80, 0.3, 1e12, 2), 0.1},
      {gen_gnp(200, 0.3, 3), 0.05},     {gen_complete(60), 0.25},
      {gen_gnp(40, 0.3, 4), 0.25},      {gen_probe_instance(400, 5, 5), 0.05},
  };
  for (std::size_t i = 0; i < builds.size(); ++i) build_sketch(builds[i].g, builds[i].eps, 200 + i, opt);
  Outcome o;
  o.pass = audit.over_budget == 0 && audit.classes > 0;
  o.detail = std::to_string(audit.classes) + " classes, " + std::to_string(audit.over_budget) +
             " over n ceil(log2 n)/eps; largest cross/budget " + fmt(audit.worst_ratio);
  return o;
}

Outcome criterion6() {
  std::size_t cuts = 0;
  std::size_t bad41 = 0;
  std::size_t bad42 = 0;
  std::size_t bad43 = 0;
  std::size_t bad_window = 0;
  double lowest_ratio = 1;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 4 + seed % 9;
    const Graph g = gen_weighted_range(n, 0.5 + 0.05 * static_cast<double>(seed % 6), 1e12, 5000 + seed);
    const double nn = static_cast<double>(n);
    const auto tree = max_spanning_tree(g);
    const auto stored = window_representatives(tree);

    // Routed estimate matches the reduced graph at every stored scale.
    for (std::size_t k : stored) {
      const double threshold = nn * nn * tree[k].w;
      std::size_t count = 0;
      while (count < tree.size() && tree[count].w >= threshold) ++count;
      std::vector<Edge> heavy;
      for (const Edge& e : g.edges()) {
        if (e.w >= threshold) heavy.push_back(e);
      }
      const std::span<const Edge> prefix(tree.data(), count);
      if (!(components(n, prefix) == components(n, heavy))) ++bad43;
    }

    for_each_cut(g, [&](const VertexSet& s, Weight w) {
      ++cuts;
      const auto route = route_query(tree, stored, n, s);
      if (!route) {
        if (w != 0) ++bad41;
        return;
      }
      double heaviest = 0;
      for (const Edge& e : g.edges()) {
        if (s.contains(e.u) != s.contains(e.v)) heaviest = std::max(heaviest, e.w);
      }
      if (tree[route->first_crossing].w != heaviest) ++bad41;
      const double wk = tree[route->stored].w;
      const double window = wk / tree[route->first_crossing].w;
      if (window < 1 || window >= 2) ++bad_window;
      double gk = 0;
      for (const Edge& e : g.edges()) {
        if (s.contains(e.u) != s.contains(e.v) && e.w >= wk / (nn * nn * nn)) gk += e.w;
      }
      const double ratio = gk / w;
      lowest_ratio = std::min(lowest_ratio, ratio);
      if (ratio > 1 || ratio < 1 - 1 / nn) ++bad42;
      const std::size_t count = route->heavy_prefix ? *route->heavy_prefix + 1 : 0;
      if (prefix_representatives(n, tree, count) != reduced_graph(g, wk).representative) ++bad43;
    });
  }
  Outcome o;
  o.pass = bad41 == 0 && bad42 == 0 && bad43 == 0 && bad_window == 0;
  o.detail = std::to_string(cuts) + " cuts on 50 graphs (n 4..12, weights up to 1e12): heaviest-edge violations " +
             std::to_string(bad41) + ", ratio violations " + std::to_string(bad42) + " (lowest ratio " +
             fmt(lowest_ratio) + "), component violations " + std::to_string(bad43) + ", window violations " +
             std::to_string(bad_window);
  return o;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

double sketch_bits(const Graph& g, double eps, std::uint64_t seed) {
  return static_cast<double>(size_report(build_sketch(g, eps, seed, {kDefaultSparsifierKappa, 1, {}})).bits_total);
}

Outcome criterion7() {
  std::vector<double> ns{50, 100, 200, 400};
  std::vector<double> bits_n;
  for (double n : ns) bits_n.push_back(sketch_bits(gen_gnp(static_cast<std::size_t>(n), kSizeDegree / n, 1), 0.1, 1));
  const double slope_n = fit_slope(ns, bits_n);

  const Graph g200 = gen_gnp(200, kSizeDegree / 200, 1);
  std::vector<double> inv_eps;
  std::vector<double> bits_e;
  for (double eps : {0.2, 0.1, 0.05}) {
    inv_eps.push_back(1 / eps);
    bits_e.push_back(sketch_bits(g200, eps, 1));
  }
  const double slope_e = fit_slope(inv_eps, bits_e);

  const Graph dense = gen_gnp(200, 0.3, 2);
  const double foreach_bits = sketch_bits(dense, 0.05, 2);
  const Sparsifier h = sparsify(dense, 1.05, 2);
  const auto sparsifier_bits = static_cast<double>(size_report(h).bits_total);
  const bool a = std::abs(slope_n - kSlopeTarget) <= kSlopeToleranceN;
  const bool b = std::abs(slope_e - kSlopeTarget) <= kSlopeToleranceEps;
  const bool c = foreach_bits < sparsifier_bits;
  Outcome o;
  o.pass = a && b && c;
  o.detail = std::string("(a) ") + (a ? "pass" : "FAIL") + " slope vs n " + fmt(slope_n) + "; (b) " +
             (b ? "pass" : "FAIL") + " slope vs 1/eps " + fmt(slope_e) + "; (c) " + (c ? "pass" : "FAIL") +
             " for-each bits " + fmt(foreach_bits) + " vs (1+eps)-sparsifier bits " + fmt(sparsifier_bits) +
             " (kept " + std::to_string(h.graph.num_edges()) + " of " + std::to_string(dense.num_edges()) +
             " edges)";
  return o;
}

bool within(const Graph& g, const Graph& h, double rho) {
  bool ok = true;
  for_each_cut(g, [&](const VertexSet& s, Weight w) {
    const double x = cut_weight(h, s);
    if (x > rho * w * (1 + 1e-12) || x < w / rho * (1 - 1e-12)) ok = false;
  });
  return ok;
}

Outcome criterion8() {
  int single = 0;
  int merged = 0;
  std::size_t sampled = 0;
  std::size_t edges = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = gen_gnp(12, 0.5, 900 + seed);
    for (double p : sampling_probabilities(g, 1.4)) {
      ++edges;
      sampled += p < 1 ? 1 : 0;
    }
    single += within(g, sparsify(g, 1.4, seed).graph, 1.4) ? 1 : 0;
    Sparsifier m{Graph(12), 1.4, 0};
    const auto shards = shard_edges(g, 3, seed);
    for (std::size_t i = 0; i < shards.size(); ++i) m = merge(m, sparsify(shards[i], 1.4, seed * 3 + i));
    merged += within(g, m.graph, 1.4) ? 1 : 0;
  }
  Outcome o;
  o.pass = single >= kSparsifierSeedsNeeded && merged >= kSparsifierSeedsNeeded;
  o.detail = "single " + std::to_string(single) + "/20, merged over 3 shards " + std::to_string(merged) +
             "/20 preserve all 2047 cuts within 1.4; edges with keep probability < 1: " + std::to_string(sampled) +
             "/" + std::to_string(edges);
  return o;
}

Outcome criterion9() {
  struct Instance {
    std::string name;
    Graph g;
  };
  const std::vector<Instance> instances{{"gnp(40,0.3)", gen_gnp(40, 0.3, 1)}, {"cycle(30)", gen_cycle(30)}};
  Outcome o{true, ""};
  for (const Instance& inst : instances) {
    const double truth = min_cut_exact(inst.g).value;
    int good = 0;
    std::size_t byte_mismatch = 0;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
      const CoordinatorResult r = distributed_min_cut(inst.g, 4, kEps, trial);
      good += r.mincut_estimate <= (1 + 27 * kEps) * truth ? 1 : 0;
      const auto shards = shard_edges(inst.g, 4, trial);
      for (std::uint32_t i = 0; i < 4; ++i) {
        const std::size_t bytes = serialize(build_message(shards[i], i, kEps, trial)).size();
        if (r.bytes_sent_per_server.size() != 4 || r.bytes_sent_per_server[i] != bytes) ++byte_mismatch;
      }
    }
    o.pass = o.pass && good >= kDistTrialsNeeded && byte_mismatch == 0;
    o.detail += inst.name + " " + std::to_string(good) + "/50 within (1+27eps) of " + fmt(truth) +
                ", byte mismatches " + std::to_string(byte_mismatch) + "; ";
  }
  o.detail += "need >= 45/50";
  return o;
}

Outcome criterion10() {
  const double eps = 0.05;
  const auto block = static_cast<std::size_t>(std::lround(1 / (4 * eps)));
  const Graph g = gen_probe_instance(400, block, 10);
  const CutSketch sk = build_sketch(g, eps, 10);
  std::vector<std::vector<char>> adj(400, std::vector<char>(400, 0));
  for (const Edge& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = 1;
  Rng rng = Rng(10).derive("probes");
  int edge_ok = 0;
  int edge_n = 0;
  int non_ok = 0;
  int non_n = 0;
  int warnings = 0;
  int indeterminate = 0;
  const std::size_t blocks = 400 / (2 * block);
  while (edge_n + non_n < 100) {
    const std::size_t b = rng.below(blocks);
    const auto u = static_cast<Vertex>(2 * block * b + rng.below(block));
    const auto v = static_cast<Vertex>(2 * block * b + block + rng.below(block));
    const bool is_edge = adj[u][v] != 0;
    if (is_edge ? edge_n >= 50 : non_n >= 50) continue;
    const ProbeResult r = edge_probe(sk, u, v, eps);
    warnings += r.degree_warning ? 1 : 0;
    indeterminate += r.indeterminate ? 1 : 0;
    if (is_edge) {
      ++edge_n;
      edge_ok += r.edge ? 1 : 0;
    } else {
      ++non_n;
      non_ok += r.edge ? 0 : 1;
    }
  }
  Outcome o;
  o.pass = edge_ok >= kProbeRate * edge_n && non_ok >= kProbeRate * non_n;
  o.detail = "edges " + std::to_string(edge_ok) + "/" + std::to_string(edge_n) + ", non-edges " +
             std::to_string(non_ok) + "/" + std::to_string(non_n) + " correct (n 400, eps 0.05, D " +
             std::to_string(block) + "); degree warnings " + std::to_string(warnings) + ", indeterminate " +
             std::to_string(indeterminate);
  return o;
}

Outcome criterion11() {
  const Graph g = gen_weighted_range(60, 0.3, 1e3, 3);
  const CutSketch a = build_sketch(g, kEps, 42);
  const CutSketch b = build_sketch(g, kEps, 42);
  const auto bytes_a = serialize(a);
  const auto bytes_b = serialize(b);
  const CutSketch back = deserialize_sketch(bytes_a);
  const bool identical = bytes_a == bytes_b;
  const bool reencoded = serialize(back) == bytes_a;
  Rng rng(43);
  int differing_runs = 0;
  int differing_codec = 0;
  for (int q = 0; q < 1000; ++q) {
    const VertexSet s = random_cut(60, rng);
    const double x = query(a, s).value;
    differing_runs += x != query(b, s).value ? 1 : 0;
    differing_codec += x != query(back, s).value ? 1 : 0;
  }
  Outcome o;
  o.pass = identical && reencoded && differing_runs == 0 && differing_codec == 0;
  o.detail = std::string("two builds ") + (identical ? "byte-identical" : "DIFFER") + " (" +
             std::to_string(bytes_a.size()) + " bytes), re-encode " + (reencoded ? "identical" : "DIFFERS") +
             "; differing answers over 1000 queries: between runs " + std::to_string(differing_runs) +
             ", after decode " + std::to_string(differing_codec);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10, criterion11};
  std::vector<int> which;
  const std::string arg = argc > 1 ? argv[1] : "all";
  if (arg == "all") {
    for (int i = 1; i <= 11; ++i) which.push_back(i);
  } else {
    const int k = std::atoi(arg.c_str());
    if (k < 1 || k > 11) {
      std::cerr << "usage: acceptance <1-11|all>\n";
      return 2;
    }
    which.push_back(k);
  }
  int failures = 0;
  for (int k : which) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " [" << fmt(secs) << " s] " << o.detail
              << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
