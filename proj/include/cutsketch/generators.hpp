#pragma once

#include <cstddef>
#include <cstdint>

#include "cutsketch/graph.hpp"

namespace cutsketch {

// All generators are deterministic functions of their arguments and emit
// integer-valued weights.

Graph gen_complete(std::size_t n, Weight w = 1);
Graph gen_path(std::size_t n, Weight w = 1);
Graph gen_cycle(std::size_t n, Weight w = 1);
Graph gen_star(std::size_t n);
Graph gen_gnp(std::size_t n, double p, std::uint64_t seed);

/// Two cliques of sizes ceil(n/2) and floor(n/2), each clique edge of weight
/// clique_w, joined by one bridge of weight bridge_w between vertex 0 and
/// vertex ceil(n/2).
Graph gen_dumbbell(std::size_t n, Weight clique_w = 1, Weight bridge_w = 1);

/// G(n, p) with weights round(exp(U * ln w_max)), i.e. log-uniform in [1, w_max].
Graph gen_weighted_range(std::size_t n, double p, double w_max, std::uint64_t seed);

/// Disjoint union of eps^2 n / 2 bipartite blocks with 1/eps^2 vertices per
/// side; each left vertex is joined to a uniform random half of its block's
/// right side. Block b occupies vertices [2kb, 2k(b+1)) with k = 1/eps^2,
/// left side first.
Graph gen_hard_instance(std::size_t n, double eps, std::uint64_t seed);

/// Bipartite degree-bounded graph with n/2 vertices per side, blocks of D
/// vertices; left block i and right block i carry a uniform random D x D
/// adjacency. Left vertex a of block i is 2Di + a, right vertex b is
/// 2Di + D + b.
Graph gen_probe_instance(std::size_t n, std::size_t block, std::uint64_t seed);

}  // namespace cutsketch
