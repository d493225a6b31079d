#include <doctest.h>

#include <cmath>

#include "cutsketch/generators.hpp"
#include "cutsketch/partition.hpp"

using namespace cutsketch;

namespace {

std::vector<Vertex> all_of(std::size_t n) {
  std::vector<Vertex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Vertex>(i);
  return v;
}

}  // namespace

TEST_CASE("sparse subset predicate") {
  CHECK(is_sparse_subset(0, 1, 2, 0.25));
  CHECK(is_sparse_subset(4, 1, 10, 0.25));
  CHECK_FALSE(is_sparse_subset(5, 1, 10, 0.25));
  CHECK_FALSE(is_sparse_subset(0, 6, 10, 0.25));
  CHECK_FALSE(is_sparse_subset(0, 0, 10, 0.25));
}

TEST_CASE("find sparse subset fixtures") {
  const std::vector<Edge> one{{0, 1, 1}};
  const auto iso = find_sparse_subset(all_of(3), one, 0.25);
  REQUIRE(iso);
  CHECK(*iso == std::vector<Vertex>{2});

  const Graph star = gen_star(10);
  const auto leaf = find_sparse_subset(all_of(10), star.edges(), 0.25);
  REQUIRE(leaf);
  CHECK(leaf->size() == 1);
  CHECK(leaf->front() != 0);

  for (std::size_t m = 10; m <= 20; m += 5) {
    const Graph k = gen_complete(m);
    CHECK_FALSE(find_sparse_subset(all_of(m), k.edges(), 0.25));
  }
}

TEST_CASE("recursive partition fixtures") {
  const ClassPartition none = recursive_partition(6, {}, 0.25);
  CHECK(none.partition.num_parts == 6);
  CHECK(none.cross_edges.empty());

  const Graph star = gen_star(10);
  const ClassPartition sp = recursive_partition(10, star.edges(), 0.25);
  CHECK(sp.partition.num_parts == 10);
  CHECK(sp.cross_edges.size() == 9);

  const Graph k12 = gen_complete(12);
  const ClassPartition kp = recursive_partition(12, k12.edges(), 0.25);
  CHECK(kp.partition.num_parts == 1);
  CHECK(kp.cross_edges.empty());
  CHECK(certify_partition(kp, k12.edges()));
}

TEST_CASE("certificates") {
  const Graph star = gen_star(10);
  ClassPartition whole;
  whole.partition.part_of.assign(10, 0);
  whole.partition.num_parts = 1;
  whole.eps = 0.25;
  CHECK_FALSE(certify_partition(whole, star.edges()));
  CHECK(certify_partition(recursive_partition(10, star.edges(), 0.25), star.edges()));

  ClassPartition big;
  big.partition.part_of.assign(21, 0);
  big.partition.num_parts = 1;
  big.eps = 0.25;
  CHECK_THROWS_AS(certify_partition(big, gen_complete(21).edges()), InputError);
}

TEST_CASE("partitions of small graphs certify and respect the budget") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 6 + seed % 15;
    const double eps = seed % 2 ? 0.25 : 0.1;
    const Graph g = gen_gnp(n, 0.3 + 0.05 * static_cast<double>(seed % 8), seed);
    const ClassPartition cp = recursive_partition(n, g.edges(), eps);
    CHECK(certify_partition(cp, g.edges()));
    CHECK(static_cast<double>(cp.cross_edges.size()) <= cross_edge_budget(n, eps));
    std::size_t crossing = 0;
    for (const Edge& e : g.edges()) {
      crossing += cp.partition.part_of[e.u] != cp.partition.part_of[e.v] ? 1 : 0;
    }
    CHECK(crossing == cp.cross_edges.size());
    for (const Edge& e : cp.cross_edges) CHECK(cp.partition.part_of[e.u] != cp.partition.part_of[e.v]);
  }
}

TEST_CASE("stopping condition bounds small sides") {
  // Within a final part, any side of at most half the part has few vertices
  // relative to its crossing edge count.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const double eps = 0.25;
    const Graph g = gen_gnp(12, 0.7, 50 + seed);
    const ClassPartition cp = recursive_partition(12, g.edges(), eps);
    for (const auto& part : cp.partition.parts()) {
      const std::size_t k = part.size();
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k) - 1; ++mask) {
        std::vector<std::uint8_t> in(12, 0);
        std::size_t size = 0;
        for (std::size_t i = 0; i < k; ++i) {
          if ((mask >> i) & 1U) {
            in[part[i]] = 1;
            ++size;
          }
        }
        if (2 * size > k) continue;
        std::size_t d = 0;
        for (const Edge& e : g.edges()) {
          const bool inside_u = cp.partition.part_of[e.u] == cp.partition.part_of[part[0]];
          const bool inside_v = cp.partition.part_of[e.v] == cp.partition.part_of[part[0]];
          if (inside_u && inside_v && in[e.u] != in[e.v]) ++d;
        }
        CHECK(static_cast<double>(size) <= eps * static_cast<double>(d));
      }
    }
  }
}

TEST_CASE("heuristic search above the exact cap") {
  // Two dense halves joined by one edge: the split is sparse and must be found.
  const Graph d = gen_dumbbell(40);
  const auto sub = find_sparse_subset(all_of(40), d.edges(), 0.25);
  REQUIRE(sub);
  std::size_t crossing = 0;
  std::vector<std::uint8_t> in(40, 0);
  for (Vertex v : *sub) in[v] = 1;
  for (const Edge& e : d.edges()) crossing += in[e.u] != in[e.v] ? 1 : 0;
  CHECK(is_sparse_subset(crossing, sub->size(), 40, 0.25));

  const ClassPartition cp = recursive_partition(40, d.edges(), 0.25);
  CHECK(cp.partition.num_parts == 2);
  CHECK(cp.cross_edges.size() == 1);
}

TEST_CASE("partition cache returns identical results") {
  PartitionCache cache;
  const Graph g = gen_gnp(30, 0.3, 2);
  const Partition a = cache.get(30, g.edges(), 0.1);
  const Partition b = cache.get(30, g.edges(), 0.1);
  CHECK(a == b);
  CHECK(a == recursive_partition(30, g.edges(), 0.1).partition);
  CHECK(cache.hits() == 1);
  cache.get(30, g.edges(), 0.25);
  CHECK(cache.hits() == 1);
}

TEST_CASE("budget formula") {
  CHECK(cross_edge_budget(8, 0.25) == doctest::Approx(96));
  CHECK(cross_edge_budget(100, 0.1) == doctest::Approx(7000));
}
