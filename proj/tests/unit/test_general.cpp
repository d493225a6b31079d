#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cutsketch/general_sketch.hpp"
#include "cutsketch/generators.hpp"
#include "cutsketch/oracles.hpp"
#include "cutsketch/rng.hpp"

using namespace cutsketch;

namespace {

double prim_weight(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<double>> best(n, std::vector<double>(n, 0));
  for (const Edge& e : g.edges()) {
    best[e.u][e.v] = std::max(best[e.u][e.v], e.w);
    best[e.v][e.u] = best[e.u][e.v];
  }
  std::vector<char> in(n, 0);
  std::vector<double> key(n, -1);
  double total = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (in[start]) continue;
    key[start] = 0;
    for (;;) {
      std::size_t pick = n;
      for (std::size_t v = 0; v < n; ++v) {
        if (!in[v] && key[v] >= 0 && (pick == n || key[v] > key[pick])) pick = v;
      }
      if (pick == n) break;
      in[pick] = 1;
      total += key[pick];
      for (std::size_t v = 0; v < n; ++v) {
        if (!in[v] && best[pick][v] > 0) key[v] = std::max(key[v], best[pick][v]);
      }
    }
  }
  return total;
}

}  // namespace

TEST_CASE("spanning tree order") {
  Graph p(4);
  p.add_edge(2, 3, 1);
  p.add_edge(0, 1, 3);
  p.add_edge(1, 2, 2);
  const auto t = max_spanning_tree(p);
  REQUIRE(t.size() == 3);
  CHECK(t[0].w == 3);
  CHECK(t[1].w == 2);
  CHECK(t[2].w == 1);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = gen_weighted_range(10, 0.5, 1000, seed);
    const auto tree = max_spanning_tree(g);
    double total = 0;
    for (std::size_t i = 0; i < tree.size(); ++i) {
      total += tree[i].w;
      if (i > 0) CHECK(tree[i - 1].w >= tree[i].w);
    }
    CHECK(total == doctest::Approx(prim_weight(g)));
    CHECK(tree.size() == 10 - components(10, g.edges()).num_parts);
  }
}

TEST_CASE("window representatives") {
  const std::vector<Edge> unit{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
  CHECK(window_representatives(unit) == std::vector<std::size_t>{0});
  const std::vector<Edge> pow4{{0, 1, 16}, {1, 2, 4}, {2, 3, 1}};
  CHECK(window_representatives(pow4) == std::vector<std::size_t>{0, 1, 2});
  const std::vector<Edge> mixed{{0, 1, 10}, {1, 2, 6}, {2, 3, 5}, {3, 4, 4.9}, {4, 5, 2}};
  const auto kept = window_representatives(mixed);
  CHECK(kept == std::vector<std::size_t>{0, 2, 4});
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = a + 1; b < kept.size(); ++b) CHECK(mixed[kept[a]].w / mixed[kept[b]].w >= 2);
  }
}

TEST_CASE("reduced graph") {
  const Graph k = gen_complete(5, 7);
  const ReducedGraph same = reduced_graph(k, 7);
  CHECK(same.graph == k);
  CHECK(same.contraction.num_parts == 5);

  const double n = 3;
  Graph two(3);
  two.add_edge(1, 2, 1);
  two.add_edge(0, 1, 2 * n * n * n);
  const ReducedGraph r = reduced_graph(two, 1);
  CHECK(r.contraction.num_parts == 2);
  CHECK(r.representative == std::vector<Vertex>{0, 0, 2});
  REQUIRE(r.graph.num_edges() == 1);
  CHECK(r.graph.edge(0) == Edge{0, 2, 1});

  // Cuts that do not split a contracted group keep the weight of the
  // graph without light edges.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = gen_weighted_range(10, 0.6, 1e7, seed);
    const double wj = g.edge(0).w;
    const ReducedGraph red = reduced_graph(g, wj);
    Graph kept(10);
    for (const Edge& e : g.edges()) {
      if (e.w >= wj / 1000) kept.add_edge(e.u, e.v, e.w);
    }
    for (const Edge& e : red.graph.edges()) {
      CHECK(e.w >= wj / 1000);
      CHECK(e.w < 100 * wj);
    }
    for (const auto& [s, w] : enumerate_cuts(g)) {
      bool whole = true;
      for (Vertex v = 0; v < 10; ++v) whole = whole && s.contains(v) == s.contains(red.representative[v]);
      if (!whole) continue;
      CHECK(cut_weight(red.graph, s) == doctest::Approx(cut_weight(kept, s)));
    }
  }
}

TEST_CASE("scale routing properties on small weighted graphs") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 5 + seed % 8;
    const Graph g = gen_weighted_range(n, 0.6, 1e12, 1000 + seed);
    const auto tree = max_spanning_tree(g);
    const auto stored = window_representatives(tree);
    const double nn = static_cast<double>(n);
    for (const auto& [s, w] : enumerate_cuts(g)) {
      const auto route = route_query(tree, stored, n, s);
      if (!route) {
        CHECK(w == 0);
        continue;
      }
      double heaviest = 0;
      for (const Edge& e : g.edges()) {
        if (s.contains(e.u) != s.contains(e.v)) heaviest = std::max(heaviest, e.w);
      }
      CHECK(tree[route->first_crossing].w == heaviest);
      const double wk = tree[route->stored].w;
      CHECK(wk / tree[route->first_crossing].w >= 1);
      CHECK(wk / tree[route->first_crossing].w < 2);

      double gk = 0;
      for (const Edge& e : g.edges()) {
        if (s.contains(e.u) != s.contains(e.v) && e.w >= wk / (nn * nn * nn)) gk += e.w;
      }
      CHECK(gk / w <= 1);
      CHECK(gk / w >= 1 - 1 / nn);

      const std::size_t count = route->heavy_prefix ? *route->heavy_prefix + 1 : 0;
      CHECK(prefix_representatives(n, tree, count) == reduced_graph(g, wk).representative);
    }
  }
}

TEST_CASE("single scale unit graph matches its basic sketch") {
  const Graph g = gen_gnp(16, 0.4, 3);
  const CutSketch sk = build_sketch(g, 0.25, 4, {kDefaultSparsifierKappa, 3, {}});
  REQUIRE(sk.scales.size() == 1);
  REQUIRE(sk.scales[0].components.size() == 1);
  const ComponentSketch& comp = sk.scales[0].components[0];
  CHECK(comp.vertices.size() == 16);
  Rng rng(1);
  for (int q = 0; q < 50; ++q) {
    VertexSet s(16);
    for (Vertex v = 0; v < 16; ++v) {
      if (rng() & 1U) s.insert(v);
    }
    if (s.trivial()) continue;
    CHECK(query(sk, s).value == doctest::Approx(query_basic(comp.sketch, s).value * sk.scales[0].unit));
  }
}

TEST_CASE("heavy dumbbell bridge") {
  const std::size_t n = 12;
  const Graph d = gen_dumbbell(n, std::pow(static_cast<double>(n), 4), 1);
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    const CutSketch sk = build_sketch(d, 0.1, seed, {kDefaultSparsifierKappa, 1, {}});
    std::vector<Vertex> left(n / 2);
    for (Vertex v = 0; v < n / 2; ++v) left[v] = v;
    const Estimate e = query(sk, VertexSet::from_list(n, left));
    CHECK(e.scale >= 1);
    CHECK(e.scale < 2);
    ok += std::abs(e.value - 1) <= 27 * 0.1 ? 1 : 0;
  }
  CHECK(ok >= 7);
}

TEST_CASE("stored scales for spread weights") {
  const Graph g = gen_weighted_range(50, 0.2, 1e12, 5);
  const CutSketch sk = build_sketch(g, 0.25, 1, {kDefaultSparsifierKappa, 1, {}});
  const auto stored = sk.stored_positions();
  for (std::size_t a = 1; a < stored.size(); ++a) {
    CHECK(sk.tree_edges[stored[a - 1]].w / sk.tree_edges[stored[a]].w >= 2);
  }
  const double span = std::log2(sk.tree_edges.front().w / sk.tree_edges.back().w);
  CHECK(static_cast<double>(stored.size()) <= std::floor(span) + 1);
}

TEST_CASE("query errors and zero cuts") {
  Graph g(6);
  g.add_edge(0, 1, 1);
  g.add_edge(2, 3, 5);
  const CutSketch sk = build_sketch(g, 0.25, 2, {kDefaultSparsifierKappa, 1, {}});
  CHECK(query(sk, VertexSet::from_list(6, std::vector<Vertex>{0, 1})).zero_cut);
  CHECK(query(sk, VertexSet(6)).trivial_query);
  CHECK_THROWS_AS(query(sk, VertexSet(5)), InputError);
  CHECK(default_repetitions(100) == 116);
}
