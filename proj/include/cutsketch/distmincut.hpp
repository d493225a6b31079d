#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cutsketch/general_sketch.hpp"
#include "cutsketch/graph.hpp"
#include "cutsketch/sparsify.hpp"

namespace cutsketch {

/// Quality of the sparsifier each server sends.
inline constexpr double kServerSparsifierQuality = 1.2;
/// Candidate cuts are those strictly below this multiple of the minimum.
inline constexpr double kCandidateFactor = 1.5;

/// Assigns every edge to one of k shards uniformly at random. All shards keep
/// the full vertex set.
std::vector<Graph> shard_edges(const Graph& g, std::size_t k, std::uint64_t seed);

struct ServerMessage {
  std::uint32_t shard = 0;
  Sparsifier sparsifier;
  CutSketch sketch;

  friend bool operator==(const ServerMessage&, const ServerMessage&) = default;
};

struct ServerOptions {
  double kappa = kDefaultSparsifierKappa;
  std::size_t repetitions = 0;  // 0: ceil(25 ln n)
};

/// Both summaries derive from `seed` under the shard's own stream.
ServerMessage build_message(const Graph& shard, std::uint32_t shard_id, double eps, std::uint64_t seed,
                            const ServerOptions& options = {});

std::vector<std::uint8_t> serialize(const ServerMessage& msg);
ServerMessage deserialize_message(std::span<const std::uint8_t> bytes);

struct CandidateOptions {
  double factor = kCandidateFactor;
  /// Graphs up to this size are enumerated exactly.
  std::size_t exact_cap = 20;
  /// Contraction runs: ceil(runs_constant n^2 ln n).
  double runs_constant = 4.0;
  /// Each run contracts down to this many super-vertices and keeps every
  /// split of them.
  std::size_t contract_to = 3;
  std::uint64_t seed = 0;
};

/// Canonical sides of the cuts of h lighter than factor * mincut(h).
/// Throws InputError when h is disconnected.
std::vector<VertexSet> candidate_cuts(const Sparsifier& h, const CandidateOptions& options = {});

struct CoordinatorResult {
  double mincut_estimate = 0;
  VertexSet witness;
  std::vector<std::size_t> bytes_sent_per_server;
  std::size_t candidates_evaluated = 0;
};

/// Decodes the messages, merges their sparsifiers, and returns the candidate
/// with the smallest summed sketch estimate.
CoordinatorResult coordinator_min_cut(const std::vector<std::vector<std::uint8_t>>& messages, double eps,
                                      const CandidateOptions& options = {});

/// Shards g, builds one message per shard and runs the coordinator on the
/// serialized bytes.
CoordinatorResult distributed_min_cut(const Graph& g, std::size_t k, double eps, std::uint64_t seed,
                                      const ServerOptions& server = {}, CandidateOptions candidates = {});

}  // namespace cutsketch
