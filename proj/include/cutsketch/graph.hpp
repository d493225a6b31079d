#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cutsketch {

using Vertex = std::uint32_t;
using Weight = double;

/// Bad caller input: out-of-range ids, inadmissible parameters, malformed files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  Weight w = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected multigraph on vertices 0..n-1. Parallel edges are
/// kept and each contributes to cuts on its own. Self-loops are rejected.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n, std::vector<Edge> edges = {});

  void add_edge(Vertex u, Vertex v, Weight w);

  [[nodiscard]] std::size_t num_vertices() const { return n_; }
  [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }
  [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
  [[nodiscard]] const Edge& edge(std::size_t i) const { return edges_[i]; }
  [[nodiscard]] Weight total_weight() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check(const Edge& e) const;

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

/// One side S of a cut; the complement is implicit.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t n) : member_(n, 0) {}

  static VertexSet from_list(std::size_t n, std::span<const Vertex> ids);
  /// Bit i of mask selects vertex i. n <= 64.
  static VertexSet from_mask(std::size_t n, std::uint64_t mask);

  [[nodiscard]] bool contains(Vertex v) const { return member_[v] != 0; }
  void insert(Vertex v) { member_[v] = 1; }
  void erase(Vertex v) { member_[v] = 0; }

  [[nodiscard]] std::size_t universe() const { return member_.size(); }
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] bool empty() const { return size() == 0; }
  /// True for S = {} and S = V, the cuts with no crossing edges by definition.
  [[nodiscard]] bool trivial() const;
  [[nodiscard]] VertexSet complement() const;
  /// Equivalent set containing vertex 0 (S or its complement).
  [[nodiscard]] VertexSet canonical() const;
  [[nodiscard]] std::vector<Vertex> members() const;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<std::uint8_t> member_;
};

/// Vertex -> part map with dense part ids.
struct Partition {
  std::vector<std::uint32_t> part_of;
  std::uint32_t num_parts = 0;

  [[nodiscard]] std::size_t num_vertices() const { return part_of.size(); }
  [[nodiscard]] std::vector<std::vector<Vertex>> parts() const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0U);
  }

  Vertex find(Vertex x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns false if already joined.
  bool unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
  }

  [[nodiscard]] std::size_t components() const { return components_; }

 private:
  std::vector<Vertex> parent_;
  std::vector<std::uint32_t> size_;
  std::size_t components_;
};

/// Exact w(S, V\S).
Weight cut_weight(const Graph& g, const VertexSet& s);
Weight cut_weight(std::span<const Edge> edges, const VertexSet& s);

/// Connected components of (V, edges). Part ids follow the smallest
/// contained vertex, so part 0 holds vertex 0.
Partition components(std::size_t n, std::span<const Edge> edges);

/// Subgraph induced by `vertices` (sorted ascending), relabelled 0..k-1.
Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices);

}  // namespace cutsketch
