#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cutsketch/graph.hpp"

namespace cutsketch {

/// Parts up to this size are searched exhaustively and can be certified.
inline constexpr std::size_t kExactPartCap = 20;

/// Result of partitioning one weight class. Edge counts (not weights) decide
/// the splits; cross edges keep their weights for the estimator.
struct ClassPartition {
  Partition partition;
  std::vector<Edge> cross_edges;
  double eps = 0;
};

/// P' is a sparse subset of a part of size part_size when
/// 1 <= |P'| <= part_size / 2 and crossing / |P'| <= 1/eps.
bool is_sparse_subset(std::size_t crossing, std::size_t subset_size, std::size_t part_size, double eps);

/// Edge budget for a full partition: n ceil(log2 n) / eps.
double cross_edge_budget(std::size_t n, double eps);

/// Searches `part` (vertex ids, any order) for a sparse subset. Edges with an
/// endpoint outside the part are ignored. Any returned set (sorted) has been
/// verified; "none" is exact only for parts of at most kExactPartCap vertices.
std::optional<std::vector<Vertex>> find_sparse_subset(std::span<const Vertex> part,
                                                      std::span<const Edge> class_edges, double eps);

/// Splits V along sparse subsets until no part splits, and collects the edges
/// between final parts. Throws std::logic_error if the cross-edge budget is
/// exceeded.
ClassPartition recursive_partition(std::size_t n, std::span<const Edge> class_edges, double eps);

/// Memoizes recursive_partition on the exact (n, class edge sequence, eps).
/// Safe to share between threads.
class PartitionCache {
 public:
  Partition get(std::size_t n, std::span<const Edge> class_edges, double eps);
  [[nodiscard]] std::size_t hits() const;

 private:
  struct Entry {
    std::size_t n;
    double eps;
    std::vector<Edge> edges;
    Partition partition;
  };
  mutable std::mutex mutex_;
  std::unordered_multimap<std::uint64_t, Entry> entries_;
  std::size_t hits_ = 0;
};

/// Exhaustive check that no part contains a sparse subset. Throws InputError
/// for parts larger than kExactPartCap.
bool certify_partition(const ClassPartition& cp, std::span<const Edge> class_edges);

}  // namespace cutsketch
