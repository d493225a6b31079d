#include "cutsketch/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "cutsketch/parallel.hpp"

namespace cutsketch {

QueryDist parse_query_dist(const std::string& name) {
  if (name == "uniform") return QueryDist::uniform;
  if (name == "singleton") return QueryDist::singleton;
  if (name == "hardblocks") return QueryDist::hardblocks;
  throw InputError("unknown query distribution '" + name + "' (expected uniform, singleton or hardblocks)");
}

std::string to_string(QueryDist dist) {
  switch (dist) {
    case QueryDist::uniform:
      return "uniform";
    case QueryDist::singleton:
      return "singleton";
    case QueryDist::hardblocks:
      return "hardblocks";
  }
  return "uniform";
}

VertexSet hard_block_query(const Graph& g, std::size_t block_side, Rng& rng) {
  const std::size_t n = g.num_vertices();
  if (block_side == 0) {
    std::size_t deg0 = 0;
    for (const Edge& e : g.edges()) deg0 += (e.u == 0 || e.v == 0) ? 1 : 0;
    block_side = 2 * deg0;
  }
  if (block_side < 2 || n % (2 * block_side) != 0) {
    throw InputError("graph does not have hard-instance block structure (side " + std::to_string(block_side) + ")");
  }
  const std::size_t blocks = n / (2 * block_side);
  const auto base = static_cast<Vertex>(2 * block_side * rng.below(blocks));
  std::vector<Vertex> left(block_side);
  for (std::size_t i = 0; i < block_side; ++i) left[i] = base + static_cast<Vertex>(i);
  std::shuffle(left.begin(), left.end(), rng);
  VertexSet s(n);
  for (std::size_t i = 0; i < block_side / 2; ++i) s.insert(left[i]);
  for (std::size_t i = 0; i < block_side; ++i) {
    if (rng() & 1U) s.insert(base + static_cast<Vertex>(block_side + i));
  }
  return s;
}

VertexSet draw_query(const Graph& g, QueryDist dist, Rng& rng, std::size_t block_side) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw InputError("queries need at least two vertices");
  switch (dist) {
    case QueryDist::singleton:
      return VertexSet::from_list(n, std::vector<Vertex>{static_cast<Vertex>(rng.below(n))});
    case QueryDist::hardblocks:
      return hard_block_query(g, block_side, rng);
    case QueryDist::uniform:
      break;
  }
  for (;;) {
    VertexSet s(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (rng() & 1U) s.insert(static_cast<Vertex>(v));
    }
    if (!s.trivial()) return s;
  }
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0;
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

nlohmann::json to_json(const BenchReport& r) {
  nlohmann::json j;
  j["instance"] = r.instance;
  j["eps"] = r.eps;
  j["trials"] = r.trials;
  j["queries_per_trial"] = r.queries_per_trial;
  j["success_fraction"] = r.success_fraction;
  j["error_quantiles"] = {{"p50", r.p50}, {"p90", r.p90}, {"p99", r.p99}};
  j["size"] = to_json(r.size);
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

BenchReport bench_accuracy(const Graph& g, double eps, const BenchOptions& options) {
  if (options.seeds == 0 || options.queries == 0) throw InputError("bench needs at least one trial and one query");
  const auto start = std::chrono::steady_clock::now();
  const Rng root(options.seed);
  std::vector<std::vector<double>> errors(options.seeds);
  SizeReport first_size;
  parallel_for(options.seeds, [&](std::size_t trial) {
    const CutSketch sk = build_sketch(g, eps, root.derive("trial", trial).key(), options.sketch);
    if (trial == 0) first_size = size_report(sk);
    Rng queries = root.derive("queries", trial);
    auto& errs = errors[trial];
    for (std::size_t q = 0; q < options.queries; ++q) {
      const VertexSet s = draw_query(g, options.dist, queries, options.block_side);
      const double truth = cut_weight(g, s);
      const double est = query(sk, s).value;
      if (truth > 0) {
        errs.push_back(std::abs(est - truth) / truth);
      } else {
        errs.push_back(est == 0 ? 0.0 : std::numeric_limits<double>::infinity());
      }
    }
  });
  std::vector<double> all;
  for (const auto& e : errors) all.insert(all.end(), e.begin(), e.end());
  std::sort(all.begin(), all.end());
  const double limit = kSuccessErrorFactor * eps;
  const auto ok = std::count_if(all.begin(), all.end(), [&](double e) { return e <= limit; });

  BenchReport r;
  r.instance = options.instance;
  r.eps = eps;
  r.trials = options.seeds;
  r.queries_per_trial = options.queries;
  r.success_fraction = static_cast<double>(ok) / static_cast<double>(all.size());
  r.p50 = quantile(all, 0.5);
  r.p90 = quantile(all, 0.9);
  r.p99 = quantile(all, 0.99);
  r.size = first_size;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ProbeResult edge_probe(const CutSketch& sk, Vertex u, Vertex v, double eps) {
  if (u >= sk.n || v >= sk.n || u == v) throw InputError("probe needs two distinct vertices of the sketch");
  const std::vector<Vertex> both{u, v};
  const double du = query(sk, VertexSet::from_list(sk.n, std::vector<Vertex>{u})).value;
  const double dv = query(sk, VertexSet::from_list(sk.n, std::vector<Vertex>{v})).value;
  const double duv = query(sk, VertexSet::from_list(sk.n, both)).value;
  ProbeResult r;
  r.statistic = du + dv - duv;
  r.edge = r.statistic >= 1.0;
  r.indeterminate = du == 0 && dv == 0;
  const double bound = 1.0 / (4 * eps) + 0.25;
  r.degree_warning = du > bound || dv > bound;
  return r;
}

}  // namespace cutsketch
