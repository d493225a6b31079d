#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cutsketch/codec.hpp"
#include "cutsketch/general_sketch.hpp"
#include "cutsketch/graph.hpp"
#include "cutsketch/rng.hpp"

namespace cutsketch {

enum class QueryDist { uniform, singleton, hardblocks };

/// "uniform", "singleton" or "hardblocks"; anything else is an InputError.
QueryDist parse_query_dist(const std::string& name);
std::string to_string(QueryDist dist);

/// Half the left side of one block of a hard instance plus a random subset
/// of its right side. block_side = 0 infers the side length from vertex 0,
/// whose degree is half of it.
VertexSet hard_block_query(const Graph& g, std::size_t block_side, Rng& rng);

/// Draws one nontrivial query. uniform: each vertex joins S with
/// probability 1/2. singleton: one uniform vertex.
VertexSet draw_query(const Graph& g, QueryDist dist, Rng& rng, std::size_t block_side = 0);

struct BenchOptions {
  std::size_t queries = 100;
  std::size_t seeds = 20;
  QueryDist dist = QueryDist::uniform;
  std::uint64_t seed = 0;
  SketchOptions sketch;
  std::size_t block_side = 0;
  std::string instance;
};

/// Accuracy counts as success when |estimate - truth| <= 27 eps * truth.
inline constexpr double kSuccessErrorFactor = 27.0;

struct BenchReport {
  std::string instance;
  double eps = 0;
  std::size_t trials = 0;
  std::size_t queries_per_trial = 0;
  double success_fraction = 0;
  double p50 = 0;
  double p90 = 0;
  double p99 = 0;
  SizeReport size;  // of the first trial's sketch
  double wall_seconds = 0;
};

nlohmann::json to_json(const BenchReport& r);

/// Builds options.seeds sketches and checks options.queries fresh queries
/// against each.
BenchReport bench_accuracy(const Graph& g, double eps, const BenchOptions& options);

/// Nearest-rank quantile of sorted values; q in [0, 1].
double quantile(const std::vector<double>& sorted, double q);

struct ProbeResult {
  bool edge = false;
  /// d({u}) + d({v}) - d({u, v}) from three sketch queries; twice the
  /// weight between u and v.
  double statistic = 0;
  bool indeterminate = false;   // both estimated degrees are 0
  bool degree_warning = false;  // an estimated degree exceeds 1/(4 eps) + 1/4
};

/// Declares an edge when the statistic is at least 1.
ProbeResult edge_probe(const CutSketch& sk, Vertex u, Vertex v, double eps);

}  // namespace cutsketch
