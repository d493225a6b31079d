#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "cutsketch/graph.hpp"

namespace cutsketch {

struct MinCut {
  Weight value = 0;
  VertexSet side;
};

/// Stoer-Wagner global minimum cut. A disconnected graph yields 0 with one
/// connected component as the witness. Requires n >= 2.
MinCut min_cut_exact(const Graph& g);

inline constexpr std::size_t kDefaultEnumerationCap = 20;

/// Calls visit(S, w(S)) for each of the 2^(n-1)-1 nonempty proper cuts,
/// with S the side holding vertex 0. Walks a Gray code, so each step costs
/// one vertex's degree. Refuses n > max_n.
void for_each_cut(const Graph& g, const std::function<void(const VertexSet&, Weight)>& visit,
                  std::size_t max_n = kDefaultEnumerationCap);

/// Materialized form of for_each_cut.
std::vector<std::pair<VertexSet, Weight>> enumerate_cuts(const Graph& g,
                                                         std::size_t max_n = kDefaultEnumerationCap);

}  // namespace cutsketch
