#pragma once

#include <cstdint>
#include <vector>

#include "cutsketch/graph.hpp"

namespace cutsketch {

inline constexpr double kDefaultSparsifierKappa = 12.0;

/// Reweighted subgraph approximating every cut of its source.
struct Sparsifier {
  Graph graph;
  double quality = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const Sparsifier&, const Sparsifier&) = default;
};

/// Weighted Nagamochi-Ibaraki forest indices from one maximum-adjacency scan.
/// index[e] lower-bounds the local edge connectivity between e's endpoints
/// and is at least w(e).
std::vector<Weight> forest_indices(const Graph& g);

/// Importance-sampled cut sparsifier of target quality rho > 1: edge e is kept
/// independently with p_e = min(1, kappa ln^2 n w_e / ((rho-1)^2 index_e)) and
/// reweighted by 1/p_e, so every cut is preserved in expectation.
Sparsifier sparsify(const Graph& g, double rho, std::uint64_t seed,
                    double kappa = kDefaultSparsifierKappa);

/// Keep probabilities used by sparsify, exposed for tests and size planning.
std::vector<double> sampling_probabilities(const Graph& g, double rho,
                                           double kappa = kDefaultSparsifierKappa);

/// Edge-multiset union; cut weights add exactly.
Sparsifier merge(const Sparsifier& a, const Sparsifier& b);

inline Weight approx_cut(const Sparsifier& h, const VertexSet& s) { return cut_weight(h.graph, s); }

}  // namespace cutsketch
