#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cutsketch/foreach_sketch.hpp"
#include "cutsketch/graph.hpp"
#include "cutsketch/sparsify.hpp"

namespace cutsketch {

/// Kruskal over edges in order (weight descending, edge index ascending).
/// Returns the accepted edges in insertion order; a spanning forest when g
/// is disconnected.
std::vector<Edge> max_spanning_tree(const Graph& g);

/// Tree positions (0-based) whose reduced graph gets stored: position j is
/// kept unless an earlier kept k has w(e_k) / w(e_j) < 2.
std::vector<std::size_t> window_representatives(const std::vector<Edge>& tree);

struct ReducedGraph {
  /// Same vertex universe; every merged group is named by its smallest
  /// vertex and the other members are left without edges.
  Graph graph;
  Partition contraction;
  std::vector<Vertex> representative;  // vertex -> group name
};

/// Drops edges lighter than wj / n^3 and contracts edges of weight at least
/// n^2 wj, keeping parallel edges and discarding self-loops.
ReducedGraph reduced_graph(const Graph& g, Weight wj);

/// Query routing derived from the tree alone.
struct Route {
  std::size_t first_crossing = 0;  // j: smallest tree position crossing S
  std::size_t stored = 0;          // k: largest stored position <= j
  std::size_t stored_slot = 0;     // index of k among the stored positions
  std::optional<std::size_t> heavy_prefix;  // k*: largest with w >= n^2 w(e_k)
};

/// nullopt when no tree edge crosses S (the cut has weight 0).
std::optional<Route> route_query(const std::vector<Edge>& tree, const std::vector<std::size_t>& stored,
                                 std::size_t n, const VertexSet& s);

/// Vertex -> name of its group in components(V, e_1..e_count).
std::vector<Vertex> prefix_representatives(std::size_t n, const std::vector<Edge>& tree, std::size_t count);

/// Basic sketches of one connected component of a stored reduced graph.
struct ComponentSketch {
  std::vector<Vertex> vertices;  // group names; local vertex i is vertices[i]
  BasicSketch sketch;            // weights in units of StoredScale::unit

  friend bool operator==(const ComponentSketch&, const ComponentSketch&) = default;
};

struct StoredScale {
  std::uint32_t position = 0;  // tree position j
  double unit = 1;             // w(e_j) / n^3
  std::vector<ComponentSketch> components;

  friend bool operator==(const StoredScale&, const StoredScale&) = default;
};

struct SketchOptions {
  double kappa = kDefaultSparsifierKappa;
  /// Median-of-r amplification per component; 0 picks ceil(25 ln n).
  std::size_t repetitions = 0;
  ClassObserver observer;
};

std::size_t default_repetitions(std::size_t n);

/// Sketch for arbitrary positive weights.
struct CutSketch {
  std::size_t n = 0;
  double eps = 0;
  std::uint64_t seed = 0;
  std::uint32_t repetitions = 0;
  Sparsifier sparsifier;         // quality 1.4 over the whole graph
  std::vector<Edge> tree_edges;  // insertion order, non-increasing weight
  std::vector<StoredScale> scales;

  [[nodiscard]] std::vector<std::size_t> stored_positions() const;

  friend bool operator==(const CutSketch&, const CutSketch&) = default;
};

CutSketch build_sketch(const Graph& g, double eps, std::uint64_t seed, const SketchOptions& options = {});

/// Estimate routed through the first crossing tree edge. scale reports
/// w(e_k) of the routed window.
Estimate query(const CutSketch& sk, const VertexSet& s);

}  // namespace cutsketch
