#include "cutsketch/general_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cutsketch/rng.hpp"

namespace cutsketch {

std::vector<Edge> max_spanning_tree(const Graph& g) {
  std::vector<std::uint32_t> order(g.num_edges());
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return g.edge(a).w > g.edge(b).w; });
  UnionFind uf(g.num_vertices());
  std::vector<Edge> tree;
  for (auto i : order) {
    const Edge& e = g.edge(i);
    if (e.w <= 0) break;
    if (uf.unite(e.u, e.v)) tree.push_back(e);
  }
  return tree;
}

std::vector<std::size_t> window_representatives(const std::vector<Edge>& tree) {
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < tree.size(); ++j) {
    // Weights are non-increasing, so the latest kept position has the
    // smallest ratio to e_j among all kept ones.
    if (kept.empty() || tree[kept.back()].w / tree[j].w >= 2.0) kept.push_back(j);
  }
  return kept;
}

namespace {

double cube(double x) { return x * x * x; }

std::vector<Vertex> smallest_in_group(const Partition& p) {
  std::vector<Vertex> name_of_part(p.num_parts, 0);
  std::vector<char> seen(p.num_parts, 0);
  for (std::size_t v = 0; v < p.num_vertices(); ++v) {
    if (!seen[p.part_of[v]]) {
      seen[p.part_of[v]] = 1;
      name_of_part[p.part_of[v]] = static_cast<Vertex>(v);
    }
  }
  std::vector<Vertex> rep(p.num_vertices());
  for (std::size_t v = 0; v < p.num_vertices(); ++v) rep[v] = name_of_part[p.part_of[v]];
  return rep;
}

}  // namespace

ReducedGraph reduced_graph(const Graph& g, Weight wj) {
  if (!(wj > 0)) throw InputError("reduced graph needs a positive pivot weight");
  const auto n = static_cast<double>(g.num_vertices());
  const double low = wj / cube(n);
  const double high = n * n * wj;

  std::vector<Edge> heavy;
  for (const Edge& e : g.edges()) {
    if (e.w >= high) heavy.push_back(e);
  }
  ReducedGraph out;
  out.contraction = components(g.num_vertices(), heavy);
  out.representative = smallest_in_group(out.contraction);
  out.graph = Graph(g.num_vertices());
  for (const Edge& e : g.edges()) {
    if (e.w < low || e.w >= high) continue;
    const Vertex a = out.representative[e.u];
    const Vertex b = out.representative[e.v];
    if (a != b) out.graph.add_edge(a, b, e.w);
  }
  return out;
}

std::optional<Route> route_query(const std::vector<Edge>& tree, const std::vector<std::size_t>& stored,
                                 std::size_t n, const VertexSet& s) {
  std::size_t j = 0;
  while (j < tree.size() && s.contains(tree[j].u) == s.contains(tree[j].v)) ++j;
  if (j == tree.size()) return std::nullopt;
  Route r;
  r.first_crossing = j;
  const auto it = std::upper_bound(stored.begin(), stored.end(), j);
  if (it == stored.begin()) throw std::logic_error("no stored window at or before the first crossing edge");
  r.stored_slot = static_cast<std::size_t>(it - stored.begin()) - 1;
  r.stored = stored[r.stored_slot];
  const double threshold = static_cast<double>(n) * static_cast<double>(n) * tree[r.stored].w;
  std::size_t count = 0;
  while (count < tree.size() && tree[count].w >= threshold) ++count;
  if (count > 0) r.heavy_prefix = count - 1;
  return r;
}

std::vector<Vertex> prefix_representatives(std::size_t n, const std::vector<Edge>& tree, std::size_t count) {
  return smallest_in_group(components(n, std::span<const Edge>(tree.data(), count)));
}

std::size_t default_repetitions(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(25.0 * std::log(std::max<std::size_t>(n, 2))));
}

std::vector<std::size_t> CutSketch::stored_positions() const {
  std::vector<std::size_t> out;
  out.reserve(scales.size());
  for (const auto& sc : scales) out.push_back(sc.position);
  return out;
}

CutSketch build_sketch(const Graph& g, double eps, std::uint64_t seed, const SketchOptions& options) {
  check_eps(eps);
  double w_min = 0;
  double w_max = 0;
  for (const Edge& e : g.edges()) {
    if (e.w <= 0) continue;
    w_min = w_min == 0 ? e.w : std::min(w_min, e.w);
    w_max = std::max(w_max, e.w);
  }
  if (w_min > 0 && w_max / w_min > 0x1.0p64) {
    throw InputError("weight ratio " + std::to_string(w_max / w_min) + " exceeds W_max = 2^64");
  }

  const Rng root(seed);
  const std::size_t n = g.num_vertices();
  CutSketch sk;
  sk.n = n;
  sk.eps = eps;
  sk.seed = seed;
  sk.repetitions = static_cast<std::uint32_t>(options.repetitions == 0 ? default_repetitions(n) : options.repetitions);
  sk.sparsifier = sparsify(g, kScaleSparsifierQuality, root.derive("sparsifier").key(), options.kappa);
  sk.tree_edges = max_spanning_tree(g);

  const BasicOptions basic{options.kappa, sk.repetitions, n, options.observer};
  for (std::size_t j : window_representatives(sk.tree_edges)) {
    StoredScale stored;
    stored.position = static_cast<std::uint32_t>(j);
    stored.unit = sk.tree_edges[j].w / cube(static_cast<double>(n));
    const ReducedGraph reduced = reduced_graph(g, sk.tree_edges[j].w);
    const auto parts = components(n, reduced.graph.edges()).parts();
    for (const auto& members : parts) {
      if (members.size() < 2) continue;
      Graph local = induced_subgraph(reduced.graph, members);
      std::vector<Edge> scaled(local.edges().begin(), local.edges().end());
      for (Edge& e : scaled) e.w /= stored.unit;
      const std::uint64_t comp_seed = root.derive("window", j).derive("component", members.front()).key();
      ComponentSketch cs;
      cs.vertices = members;
      cs.sketch = build_basic(Graph(members.size(), std::move(scaled)), eps, comp_seed, basic);
      stored.components.push_back(std::move(cs));
    }
    sk.scales.push_back(std::move(stored));
  }
  return sk;
}

Estimate query(const CutSketch& sk, const VertexSet& s) {
  if (s.universe() != sk.n) {
    throw InputError("query set over " + std::to_string(s.universe()) + " vertices, sketch has " +
                     std::to_string(sk.n));
  }
  Estimate est;
  if (s.trivial()) {
    est.trivial_query = true;
    return est;
  }
  const auto route = route_query(sk.tree_edges, sk.stored_positions(), sk.n, s);
  if (!route) {
    est.zero_cut = true;
    return est;
  }
  const StoredScale& stored = sk.scales[route->stored_slot];
  est.scale = sk.tree_edges[route->stored].w;

  std::vector<Vertex> rep(sk.n);
  if (route->heavy_prefix) {
    rep = prefix_representatives(sk.n, sk.tree_edges, *route->heavy_prefix + 1);
  } else {
    std::iota(rep.begin(), rep.end(), 0U);
  }

  double total = 0;
  for (const ComponentSketch& comp : stored.components) {
    VertexSet local(comp.vertices.size());
    for (std::size_t i = 0; i < comp.vertices.size(); ++i) {
      const Vertex name = comp.vertices[i];
      if (rep[name] != name) throw std::logic_error("stored component vertex is not a contraction representative");
      if (s.contains(name)) local.insert(static_cast<Vertex>(i));
    }
    if (local.trivial()) continue;
    const Estimate part = query_basic(comp.sketch, local);
    total += part.value * stored.unit;
    est.terms.insert(est.terms.end(), part.terms.begin(), part.terms.end());
    est.clamped = est.clamped || part.clamped;
  }
  est.value = total;
  return est;
}

}  // namespace cutsketch
